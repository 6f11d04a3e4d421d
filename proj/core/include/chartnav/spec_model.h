#ifndef CHARTNAV_SPEC_MODEL_H_
#define CHARTNAV_SPEC_MODEL_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chartnav {

class DataTable;

enum class Mark { kPoint, kLine, kBar, kArea };
enum class Channel { kX, kY, kColor };
enum class FieldType { kQuantitative, kNominal, kOrdinal, kTemporal };
enum class Aggregate { kNone, kCount, kMean, kSum };

std::string_view ToString(Mark mark);
std::string_view ToString(Channel channel);
std::string_view ToString(FieldType type);
std::string_view ToString(Aggregate aggregate);

std::optional<Mark> MarkFromString(std::string_view text);
std::optional<Channel> ChannelFromString(std::string_view text);
std::optional<FieldType> FieldTypeFromString(std::string_view text);
std::optional<Aggregate> AggregateFromString(std::string_view text);

// True for the types whose values live on a number line (temporal values are
// epoch days).
inline bool IsNumeric(FieldType type) {
  return type == FieldType::kQuantitative || type == FieldType::kTemporal;
}

inline constexpr int kDefaultMaxBins = 10;

struct BinParams {
  int maxbins = kDefaultMaxBins;

  bool operator==(const BinParams&) const = default;
};

struct EncodingDef {
  Channel channel = Channel::kX;
  std::string field;
  FieldType type = FieldType::kQuantitative;
  std::optional<BinParams> bin;
  Aggregate aggregate = Aggregate::kNone;
  // Color names for a categorical color scale, in category order.
  std::vector<std::string> scale_range;

  bool operator==(const EncodingDef&) const = default;
};

struct FacetDef {
  std::string field;
  FieldType type = FieldType::kNominal;
  std::vector<std::string> order;

  bool operator==(const FacetDef&) const = default;
};

// An authored highlight over [lo, hi] on one positional axis.
struct AnnotationDef {
  std::string label;
  Channel channel = Channel::kX;
  double lo = 0;
  double hi = 0;
  std::string note;

  bool operator==(const AnnotationDef&) const = default;
};

struct ChartSpec {
  Mark mark = Mark::kPoint;
  std::map<Channel, EncodingDef> encodings;
  std::optional<FacetDef> facet;
  std::vector<AnnotationDef> annotations;
  std::optional<std::string> title;
  std::optional<std::string> description;

  const EncodingDef* encoding(Channel channel) const {
    auto it = encodings.find(channel);
    return it == encodings.end() ? nullptr : &it->second;
  }

  bool operator==(const ChartSpec&) const = default;
};

// Parses the JSON chart spec format. Throws SyntaxError for malformed text and
// SchemaError (with the offending key path) for anything outside the schema.
ChartSpec ParseChartSpec(std::string_view spec_text);

// Canonical JSON rendering; ParseChartSpec(SerializeChartSpec(s)) == s.
std::string SerializeChartSpec(const ChartSpec& spec);

enum class Severity { kError, kWarning };

struct ValidationIssue {
  Severity severity = Severity::kError;
  std::string path;
  std::string message;
};

std::vector<ValidationIssue> ValidateSpec(const ChartSpec& spec,
                                          const DataTable& data);

// First issue with kError severity, if any.
const ValidationIssue* FirstError(const std::vector<ValidationIssue>& issues);

}  // namespace chartnav

#endif  // CHARTNAV_SPEC_MODEL_H_
