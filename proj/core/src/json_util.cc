#include "json_util.h"

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "chartnav/errors.h"

namespace chartnav::internal {

std::pair<std::size_t, std::size_t> LineColumn(std::string_view text, std::size_t offset) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

nlohmann::json ParseJsonStrict(std::string_view text) {
  struct Frame {
    std::set<std::string> keys;
    std::string path;
    std::string pending_key;
  };
  std::vector<Frame> stack;
  std::optional<std::string> duplicate;

  auto callback = [&](int /*depth*/, nlohmann::json::parse_event_t event,
                      nlohmann::json& parsed) {
    using Event = nlohmann::json::parse_event_t;
    switch (event) {
      case Event::object_start: {
        std::string path;
        if (!stack.empty()) {
          path = stack.back().path.empty() ? stack.back().pending_key
                                           : stack.back().path + "." + stack.back().pending_key;
        }
        stack.push_back({{}, path, {}});
        break;
      }
      case Event::object_end:
        if (!stack.empty()) stack.pop_back();
        break;
      case Event::key: {
        if (stack.empty()) break;
        std::string key = parsed.get<std::string>();
        if (!stack.back().keys.insert(key).second && !duplicate) {
          duplicate = stack.back().path.empty() ? key : stack.back().path + "." + key;
        }
        stack.back().pending_key = key;
        break;
      }
      default:
        break;
    }
    return true;
  };

  nlohmann::json value;
  try {
    value = nlohmann::json::parse(text.begin(), text.end(), callback);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    auto [line, column] = LineColumn(text, offset);
    std::string message = e.what();
    // Drop nlohmann's "[json.exception.parse_error.101] " prefix.
    if (auto pos = message.find("] "); pos != std::string::npos) message = message.substr(pos + 2);
    throw SyntaxError(message, line, column);
  }
  if (duplicate) throw SchemaError("duplicate key", *duplicate);
  return value;
}

}  // namespace chartnav::internal
