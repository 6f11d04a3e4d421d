#include "chartnav/spec_model.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "chartnav/data_table.h"
#include "chartnav/errors.h"
#include "json.hpp"
#include "json_util.h"

namespace chartnav {

using nlohmann::json;

namespace {

constexpr std::pair<Mark, std::string_view> kMarks[] = {
    {Mark::kPoint, "point"}, {Mark::kLine, "line"}, {Mark::kBar, "bar"}, {Mark::kArea, "area"}};
constexpr std::pair<Channel, std::string_view> kChannels[] = {
    {Channel::kX, "x"}, {Channel::kY, "y"}, {Channel::kColor, "color"}};
constexpr std::pair<FieldType, std::string_view> kFieldTypes[] = {
    {FieldType::kQuantitative, "quantitative"},
    {FieldType::kNominal, "nominal"},
    {FieldType::kOrdinal, "ordinal"},
    {FieldType::kTemporal, "temporal"}};
constexpr std::pair<Aggregate, std::string_view> kAggregates[] = {
    {Aggregate::kNone, "none"},
    {Aggregate::kCount, "count"},
    {Aggregate::kMean, "mean"},
    {Aggregate::kSum, "sum"}};

template <typename E, std::size_t N>
std::string_view NameOf(const std::pair<E, std::string_view> (&table)[N], E value) {
  for (const auto& [e, name] : table) {
    if (e == value) return name;
  }
  return "?";
}

template <typename E, std::size_t N>
std::optional<E> ValueOf(const std::pair<E, std::string_view> (&table)[N], std::string_view name) {
  for (const auto& [e, n] : table) {
    if (n == name) return e;
  }
  return std::nullopt;
}

std::string JoinPath(const std::string& base, std::string_view key) {
  return base.empty() ? std::string(key) : base + "." + std::string(key);
}

void RejectUnknownKeys(const json& object, std::initializer_list<std::string_view> allowed,
                       const std::string& path) {
  for (const auto& item : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw SchemaError("unknown key \"" + item.key() + "\"", JoinPath(path, item.key()));
    }
  }
}

const json& RequireObject(const json& value, const std::string& path) {
  if (!value.is_object()) throw SchemaError("expected an object", path);
  return value;
}

std::string RequireString(const json& value, const std::string& path) {
  if (!value.is_string()) throw SchemaError("expected a string", path);
  return value.get<std::string>();
}

template <typename E, std::size_t N>
E RequireEnum(const std::pair<E, std::string_view> (&table)[N], const json& value,
              const std::string& path, std::string_view what) {
  std::string text = RequireString(value, path);
  auto parsed = ValueOf(table, text);
  if (!parsed) throw SchemaError("unsupported " + std::string(what) + " \"" + text + "\"", path);
  return *parsed;
}

EncodingDef ParseEncoding(Channel channel, const json& value, const std::string& path) {
  RequireObject(value, path);
  RejectUnknownKeys(value, {"field", "type", "bin", "aggregate", "scale"}, path);
  EncodingDef def;
  def.channel = channel;
  if (!value.contains("field")) throw SchemaError("missing required key \"field\"", path + ".field");
  def.field = RequireString(value["field"], path + ".field");
  if (!value.contains("type")) throw SchemaError("missing required key \"type\"", path + ".type");
  def.type = RequireEnum(kFieldTypes, value["type"], path + ".type", "field type");
  if (value.contains("bin")) {
    const json& bin = value["bin"];
    const std::string bin_path = path + ".bin";
    if (bin.is_boolean()) {
      if (bin.get<bool>()) def.bin = BinParams{};
    } else if (bin.is_object()) {
      RejectUnknownKeys(bin, {"maxbins"}, bin_path);
      BinParams params;
      if (bin.contains("maxbins")) {
        const json& maxbins = bin["maxbins"];
        if (!maxbins.is_number_integer() || maxbins.get<long long>() < 1) {
          throw SchemaError("maxbins must be a positive integer", bin_path + ".maxbins");
        }
        params.maxbins = static_cast<int>(maxbins.get<long long>());
      }
      def.bin = params;
    } else {
      throw SchemaError("expected a boolean or an object", bin_path);
    }
  }
  if (value.contains("aggregate")) {
    def.aggregate = RequireEnum(kAggregates, value["aggregate"], path + ".aggregate", "aggregate");
  }
  if (value.contains("scale")) {
    const std::string scale_path = path + ".scale";
    if (channel != Channel::kColor) throw SchemaError("scale is only supported on color", scale_path);
    const json& scale = RequireObject(value["scale"], scale_path);
    RejectUnknownKeys(scale, {"range"}, scale_path);
    if (scale.contains("range")) {
      const json& range = scale["range"];
      if (!range.is_array()) throw SchemaError("expected an array", scale_path + ".range");
      for (std::size_t i = 0; i < range.size(); ++i) {
        def.scale_range.push_back(
            RequireString(range[i], scale_path + ".range[" + std::to_string(i) + "]"));
      }
    }
  }
  return def;
}

double ParseRangeValue(const json& value, const std::string& path) {
  if (value.is_number()) {
    double v = value.get<double>();
    if (!std::isfinite(v)) throw SchemaError("range values must be finite", path);
    return v;
  }
  if (value.is_string()) {
    if (auto day = ParseIsoDate(value.get<std::string>())) return static_cast<double>(*day);
    throw SchemaError("range value is neither a number nor an ISO date", path);
  }
  throw SchemaError("expected a number or an ISO date string", path);
}

AnnotationDef ParseAnnotation(const json& value, const std::string& path) {
  RequireObject(value, path);
  RejectUnknownKeys(value, {"label", "channel", "range", "note"}, path);
  AnnotationDef def;
  if (!value.contains("label")) throw SchemaError("missing required key \"label\"", path + ".label");
  def.label = RequireString(value["label"], path + ".label");
  if (!value.contains("channel")) {
    throw SchemaError("missing required key \"channel\"", path + ".channel");
  }
  def.channel = RequireEnum(kChannels, value["channel"], path + ".channel", "channel");
  if (def.channel == Channel::kColor) {
    throw SchemaError("annotations apply to the x or y channel", path + ".channel");
  }
  if (!value.contains("range")) throw SchemaError("missing required key \"range\"", path + ".range");
  const json& range = value["range"];
  if (!range.is_array() || range.size() != 2) {
    throw SchemaError("range must be a [lo, hi] pair", path + ".range");
  }
  def.lo = ParseRangeValue(range[0], path + ".range[0]");
  def.hi = ParseRangeValue(range[1], path + ".range[1]");
  if (value.contains("note")) def.note = RequireString(value["note"], path + ".note");
  return def;
}

FacetDef ParseFacet(const json& value, const std::string& path) {
  RequireObject(value, path);
  RejectUnknownKeys(value, {"field", "type", "order"}, path);
  FacetDef def;
  if (!value.contains("field")) throw SchemaError("missing required key \"field\"", path + ".field");
  def.field = RequireString(value["field"], path + ".field");
  if (value.contains("type")) {
    def.type = RequireEnum(kFieldTypes, value["type"], path + ".type", "field type");
    if (def.type != FieldType::kNominal && def.type != FieldType::kOrdinal) {
      throw SchemaError("facet type must be nominal or ordinal", path + ".type");
    }
  }
  if (value.contains("order")) {
    const json& order = value["order"];
    if (!order.is_array()) throw SchemaError("expected an array", path + ".order");
    for (std::size_t i = 0; i < order.size(); ++i) {
      const std::string item_path = path + ".order[" + std::to_string(i) + "]";
      if (order[i].is_number()) {
        def.order.push_back(CategoryKey(Value{order[i].get<double>()}));
      } else {
        def.order.push_back(RequireString(order[i], item_path));
      }
    }
  }
  return def;
}

}  // namespace

std::string_view ToString(Mark mark) { return NameOf(kMarks, mark); }
std::string_view ToString(Channel channel) { return NameOf(kChannels, channel); }
std::string_view ToString(FieldType type) { return NameOf(kFieldTypes, type); }
std::string_view ToString(Aggregate aggregate) { return NameOf(kAggregates, aggregate); }
std::optional<Mark> MarkFromString(std::string_view text) { return ValueOf(kMarks, text); }
std::optional<Channel> ChannelFromString(std::string_view text) { return ValueOf(kChannels, text); }
std::optional<FieldType> FieldTypeFromString(std::string_view text) {
  return ValueOf(kFieldTypes, text);
}
std::optional<Aggregate> AggregateFromString(std::string_view text) {
  return ValueOf(kAggregates, text);
}

ChartSpec ParseChartSpec(std::string_view spec_text) {
  json root = internal::ParseJsonStrict(spec_text);
  RequireObject(root, "$");
  RejectUnknownKeys(root, {"mark", "encoding", "facet", "annotations", "title", "description"}, "");

  ChartSpec spec;
  if (!root.contains("mark")) throw SchemaError("missing required key \"mark\"", "mark");
  spec.mark = RequireEnum(kMarks, root["mark"], "mark", "mark");

  if (!root.contains("encoding")) throw SchemaError("missing required key \"encoding\"", "encoding");
  const json& encoding = RequireObject(root["encoding"], "encoding");
  for (const auto& item : encoding.items()) {
    const std::string path = "encoding." + item.key();
    auto channel = ChannelFromString(item.key());
    if (!channel) throw SchemaError("unsupported channel \"" + item.key() + "\"", path);
    spec.encodings.emplace(*channel, ParseEncoding(*channel, item.value(), path));
  }
  if (!spec.encodings.contains(Channel::kX) && !spec.encodings.contains(Channel::kY)) {
    throw SchemaError("at least one of the x and y channels is required", "encoding");
  }

  if (root.contains("facet")) spec.facet = ParseFacet(root["facet"], "facet");
  if (root.contains("annotations")) {
    const json& annotations = root["annotations"];
    if (!annotations.is_array()) throw SchemaError("expected an array", "annotations");
    for (std::size_t i = 0; i < annotations.size(); ++i) {
      spec.annotations.push_back(
          ParseAnnotation(annotations[i], "annotations[" + std::to_string(i) + "]"));
    }
  }
  if (root.contains("title")) spec.title = RequireString(root["title"], "title");
  if (root.contains("description")) {
    spec.description = RequireString(root["description"], "description");
  }
  return spec;
}

std::string SerializeChartSpec(const ChartSpec& spec) {
  nlohmann::ordered_json out;
  out["mark"] = ToString(spec.mark);
  if (spec.title) out["title"] = *spec.title;
  if (spec.description) out["description"] = *spec.description;
  nlohmann::ordered_json encoding = nlohmann::ordered_json::object();
  for (const auto& [channel, def] : spec.encodings) {
    nlohmann::ordered_json e;
    e["field"] = def.field;
    e["type"] = ToString(def.type);
    if (def.bin) e["bin"] = {{"maxbins", def.bin->maxbins}};
    if (def.aggregate != Aggregate::kNone) e["aggregate"] = ToString(def.aggregate);
    if (!def.scale_range.empty()) e["scale"] = {{"range", def.scale_range}};
    encoding[std::string(ToString(channel))] = std::move(e);
  }
  out["encoding"] = std::move(encoding);
  if (spec.facet) {
    nlohmann::ordered_json facet;
    facet["field"] = spec.facet->field;
    facet["type"] = ToString(spec.facet->type);
    if (!spec.facet->order.empty()) facet["order"] = spec.facet->order;
    out["facet"] = std::move(facet);
  }
  if (!spec.annotations.empty()) {
    nlohmann::ordered_json annotations = nlohmann::ordered_json::array();
    for (const auto& a : spec.annotations) {
      nlohmann::ordered_json item;
      item["label"] = a.label;
      item["channel"] = ToString(a.channel);
      const EncodingDef* axis = spec.encoding(a.channel);
      auto render = [&](double v) -> nlohmann::ordered_json {
        if (axis && axis->type == FieldType::kTemporal && std::floor(v) == v) {
          return FormatIsoDate(static_cast<std::int64_t>(v));
        }
        return v;
      };
      item["range"] = {render(a.lo), render(a.hi)};
      if (!a.note.empty()) item["note"] = a.note;
      annotations.push_back(std::move(item));
    }
    out["annotations"] = std::move(annotations);
  }
  return out.dump(2) + "\n";
}

namespace {

void AddIssue(std::vector<ValidationIssue>& issues, Severity severity, std::string path,
              std::string message) {
  issues.push_back({severity, std::move(path), std::move(message)});
}

}  // namespace

std::vector<ValidationIssue> ValidateSpec(const ChartSpec& spec, const DataTable& data) {
  std::vector<ValidationIssue> issues;
  if (!spec.encoding(Channel::kX) && !spec.encoding(Channel::kY)) {
    AddIssue(issues, Severity::kError, "encoding", "at least one of x and y must be encoded");
  }

  for (const auto& [channel, def] : spec.encodings) {
    const std::string path = "encoding." + std::string(ToString(channel));
    const FieldMeta* field = data.Field(def.field);
    if (!field) {
      AddIssue(issues, Severity::kError, path + ".field",
               "field \"" + def.field + "\" is not in the data");
      continue;
    }
    // A field without values carries no type evidence.
    const bool has_values = field->null_count < data.row_count();
    if (has_values && def.type == FieldType::kQuantitative && !IsNumeric(field->inferred_type)) {
      AddIssue(issues, Severity::kError, path + ".type",
               "field \"" + def.field + "\" is " + std::string(ToString(field->inferred_type)) +
                   " and cannot be encoded as quantitative");
    }
    if (has_values && def.type == FieldType::kTemporal && field->inferred_type != FieldType::kTemporal) {
      AddIssue(issues, Severity::kError, path + ".type",
               "field \"" + def.field + "\" does not hold ISO-8601 dates");
    }
    if (def.bin && !IsNumeric(def.type)) {
      AddIssue(issues, Severity::kError, path + ".bin",
               "bin requires a quantitative or temporal field, \"" + def.field + "\" is " +
                   std::string(ToString(def.type)));
    }
    if ((def.aggregate == Aggregate::kMean || def.aggregate == Aggregate::kSum) &&
        def.type != FieldType::kQuantitative) {
      AddIssue(issues, Severity::kError, path + ".aggregate",
               std::string(ToString(def.aggregate)) + " requires a quantitative field");
    }
    if (field->null_count > 0 && field->null_count == data.row_count()) {
      AddIssue(issues, Severity::kWarning, path + ".field",
               "field \"" + def.field + "\" has no non-null values");
    }
  }

  if (spec.facet) {
    const FacetDef& facet = *spec.facet;
    const FieldMeta* field = data.Field(facet.field);
    if (!field) {
      AddIssue(issues, Severity::kError, "facet.field",
               "field \"" + facet.field + "\" is not in the data");
    } else {
      for (Channel channel : {Channel::kX, Channel::kY}) {
        const EncodingDef* def = spec.encoding(channel);
        if (def && def->field == facet.field) {
          AddIssue(issues, Severity::kError, "facet.field",
                   "facet field \"" + facet.field + "\" is also the " +
                       std::string(ToString(channel)) + " field");
        }
      }
      FieldMeta view = CategoricalView(data, facet.field, facet.type);
      if (view.categories.empty()) {
        AddIssue(issues, Severity::kError, "facet.field",
                 "facet field \"" + facet.field + "\" has no categories");
      }
      for (std::size_t i = 0; i < facet.order.size(); ++i) {
        if (std::find(view.categories.begin(), view.categories.end(), facet.order[i]) ==
            view.categories.end()) {
          AddIssue(issues, Severity::kWarning, "facet.order[" + std::to_string(i) + "]",
                   "category \"" + facet.order[i] + "\" does not occur in the data");
        }
      }
    }
  }

  for (std::size_t i = 0; i < spec.annotations.size(); ++i) {
    const AnnotationDef& a = spec.annotations[i];
    const std::string path = "annotations[" + std::to_string(i) + "]";
    if (a.lo > a.hi) {
      AddIssue(issues, Severity::kError, path + ".range",
               "annotation \"" + a.label + "\" has lo > hi");
    }
    const EncodingDef* axis = spec.encoding(a.channel);
    if (!axis) {
      AddIssue(issues, Severity::kError, path + ".channel",
               "annotation \"" + a.label + "\" targets the unencoded " +
                   std::string(ToString(a.channel)) + " channel");
      continue;
    }
    if (!IsNumeric(axis->type)) {
      AddIssue(issues, Severity::kError, path + ".channel",
               "annotation \"" + a.label + "\" targets a non-numeric axis");
      continue;
    }
    const FieldMeta* field = data.Field(axis->field);
    if (field && field->numeric_domain && a.lo <= a.hi) {
      const NumericDomain& d = *field->numeric_domain;
      if (a.hi < d.min || a.lo > d.max) {
        AddIssue(issues, Severity::kError, path + ".range",
                 "annotation \"" + a.label + "\" lies outside the data domain");
      }
    }
  }
  return issues;
}

const ValidationIssue* FirstError(const std::vector<ValidationIssue>& issues) {
  for (const auto& issue : issues) {
    if (issue.severity == Severity::kError) return &issue;
  }
  return nullptr;
}

}  // namespace chartnav
