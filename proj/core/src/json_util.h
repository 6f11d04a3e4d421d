#ifndef CHARTNAV_SRC_JSON_UTIL_H_
#define CHARTNAV_SRC_JSON_UTIL_H_

#include <cstddef>
#include <string_view>
#include <utility>

#include "json.hpp"

namespace chartnav::internal {

// 1-based line and column of byte offset `offset` (0-based) in `text`.
std::pair<std::size_t, std::size_t> LineColumn(std::string_view text, std::size_t offset);

// Parses JSON, throwing SyntaxError with a position for malformed text and
// SchemaError for duplicate object keys.
nlohmann::json ParseJsonStrict(std::string_view text);

}  // namespace chartnav::internal

#endif  // CHARTNAV_SRC_JSON_UTIL_H_
