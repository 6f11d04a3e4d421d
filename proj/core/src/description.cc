#include "chartnav/description.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "chartnav/errors.h"
#include "json.hpp"
#include "json_util.h"

namespace chartnav {

namespace internal {
extern const std::string_view kDefaultTemplatesJson;
}  // namespace internal

namespace {

constexpr std::array<std::string_view, 10> kTokenKindNames = {
    "levelLabel",   "branchContext", "positionIndex",  "rangeOrCategory", "datumValues",
    "summaryStats", "encodingInfo",  "boundaryNotice", "clampNotice",     "sizeInfo",
};

using Values = std::map<std::string, std::string>;
using nlohmann::json;

std::set<TokenKind> KindSet(const json& list, const std::string& path) {
  if (!list.is_array()) throw SchemaError("expected a list of token kinds", path);
  std::set<TokenKind> out;
  for (const auto& item : list) {
    auto kind = item.is_string() ? TokenKindFromString(item.get<std::string>()) : std::nullopt;
    if (!kind) throw SchemaError("unknown token kind " + item.dump(), path);
    out.insert(*kind);
  }
  return out;
}

std::string StringAt(const json& value, const std::string& path) {
  if (!value.is_string()) throw SchemaError("expected a string", path);
  return value.get<std::string>();
}

bool IsTemporalField(const DataTable& table, std::string_view field) {
  const FieldMeta* meta = table.Field(field);
  return meta && meta->inferred_type == FieldType::kTemporal;
}

// Interval bounds and cell values in their field's natural units.
std::string NumberText(const DataTable& table, std::string_view field, double v, int digits) {
  if (IsTemporalField(table, field)) return FormatIsoDate(static_cast<std::int64_t>(std::llround(v)));
  return FormatNumber(v, digits);
}

std::string ValueText(const DataTable& table, std::size_t field, RowId row, int digits) {
  const Value& v = table.value(row, field);
  if (IsNull(v)) return "missing";
  if (const auto* d = std::get_if<double>(&v)) {
    return NumberText(table, table.fields()[field].name, *d, digits);
  }
  return std::get<std::string>(v);
}

// Renders a count-bearing template, preferring the ".one" variant for 1.
std::string Counted(const Templates& templates, const std::string& key, std::size_t count,
                    Values values = {}) {
  values["count"] = std::to_string(count);
  if (count == 1) {
    try {
      return templates.Render(key + ".one", values);
    } catch (const Error&) {
    }
  }
  return templates.Render(key, values);
}

class TokenBuilder {
 public:
  TokenBuilder(const AccessStructure& structure, const DescriptionConfig& config,
               const Templates& templates)
      : s_(structure), table_(structure.table()), config_(config), templates_(templates) {}

  std::vector<DescriptionToken> ForNode(NodeIndex index, bool include_level_label);
  std::vector<DescriptionToken> Summary();

 private:
  void Emit(TokenKind kind, const std::string& key, const Values& values) {
    tokens_.push_back({kind, templates_.Render(key, values), templates_.IsAttached(key)});
  }
  void EmitText(TokenKind kind, std::string text) {
    if (!text.empty()) tokens_.push_back({kind, std::move(text), false});
  }

  std::string Bound(std::string_view field, double v) const {
    return NumberText(table_, field, v, config_.significant_digits);
  }
  std::string BranchNameFor(NodeIndex index) const;
  std::optional<std::string> ColorName(const std::string& category) const;
  Values IntervalValues(const AccessNode& node) const;

  void Context(NodeIndex index);
  void Stats(const AccessNode& node);
  void Size(const AccessNode& node) {
    Emit(TokenKind::kSizeInfo, node.selection.size() == 1 ? "size.points.one" : "size.points",
         {{"count", std::to_string(node.selection.size())}});
  }
  void Note(const AccessNode& node) {
    if (auto note = templates_.BranchNote(node.id)) EmitText(TokenKind::kSummaryStats, *note);
  }

  const AccessStructure& s_;
  const DataTable& table_;
  const DescriptionConfig& config_;
  const Templates& templates_;
  std::vector<DescriptionToken> tokens_;
};

std::string TokenBuilder::BranchNameFor(NodeIndex index) const {
  if (auto owner = s_.OwningBranch(index)) return templates_.BranchName(s_.node(*owner).branch);
  return templates_.BranchName("annotations");
}

std::optional<std::string> TokenBuilder::ColorName(const std::string& category) const {
  const EncodingDef* color = s_.spec().encoding(Channel::kColor);
  if (!color || IsNumeric(color->type)) return std::nullopt;
  FieldMeta view = CategoricalView(table_, color->field, color->type);
  auto it = std::find(view.categories.begin(), view.categories.end(), category);
  if (it == view.categories.end()) return std::nullopt;
  std::size_t i = static_cast<std::size_t>(it - view.categories.begin());
  if (i < color->scale_range.size()) return color->scale_range[i];
  if (templates_.palette().empty()) return std::nullopt;
  return templates_.palette()[i % templates_.palette().size()];
}

Values TokenBuilder::IntervalValues(const AccessNode& node) const {
  Values v{{"field", node.field}};
  if (node.interval) {
    v["lo"] = Bound(node.field, node.interval->lo);
    v["hi"] = Bound(node.field, node.interval->hi);
  }
  return v;
}

void TokenBuilder::Context(NodeIndex index) {
  for (NodeIndex a : s_.PathFromRoot(index)) {
    if (a == index) break;
    const AccessNode& node = s_.node(a);
    switch (node.kind) {
      case NodeKind::kFacetBranch:
        Emit(TokenKind::kBranchContext, "context.facet",
             {{"field", node.field}, {"category", node.category.value_or("")}});
        break;
      case NodeKind::kIntervalNode:
        Emit(TokenKind::kBranchContext, "context.interval", IntervalValues(node));
        break;
      case NodeKind::kCategoryNode:
        Emit(TokenKind::kBranchContext, "context.category",
             {{"field", node.field}, {"category", node.category.value_or("")}});
        break;
      case NodeKind::kGridCellNode: {
        const EncodingDef* y = s_.spec().encoding(Channel::kY);
        std::string yf = y ? y->field : "";
        Emit(TokenKind::kBranchContext, "context.cell",
             {{"x", node.field},
              {"xLo", Bound(node.field, node.interval->lo)},
              {"xHi", Bound(node.field, node.interval->hi)},
              {"y", yf},
              {"yLo", Bound(yf, node.y_interval->lo)},
              {"yHi", Bound(yf, node.y_interval->hi)}});
        break;
      }
      case NodeKind::kAnnotationRegion:
        Emit(TokenKind::kBranchContext, "context.region", {{"label", node.label}});
        break;
      case NodeKind::kDataSplitNode:
        Emit(TokenKind::kBranchContext, "context.split", IntervalValues(node));
        break;
      default:
        break;
    }
  }
}

void TokenBuilder::Stats(const AccessNode& node) {
  std::vector<std::string> fields;
  for (Channel ch : {Channel::kX, Channel::kY, Channel::kColor}) {
    const EncodingDef* enc = s_.spec().encoding(ch);
    if (!enc || !IsNumeric(enc->type)) continue;
    const FieldMeta* meta = table_.Field(enc->field);
    if (!meta || !IsNumeric(meta->inferred_type)) continue;
    if (std::find(fields.begin(), fields.end(), enc->field) == fields.end()) {
      fields.push_back(enc->field);
    }
  }
  chartnav::Summary summary = Summarize(node.selection, table_, fields);
  for (const auto& field : fields) {
    const FieldStats& stats = summary.numeric[field];
    if (stats.count == 0) continue;
    Emit(TokenKind::kSummaryStats, "stats.field",
         {{"field", field},
          {"min", Bound(field, *stats.min)},
          {"max", Bound(field, *stats.max)},
          {"mean", Bound(field, *stats.mean)}});
  }
  Note(node);
}

std::vector<DescriptionToken> TokenBuilder::ForNode(NodeIndex index, bool include_level_label) {
  tokens_.clear();
  const AccessNode& node = s_.node(index);
  if (include_level_label) {
    std::string label = templates_.LevelLabel(node.kind);
    if (auto at = label.find("{branch}"); at != std::string::npos) {
      label.replace(at, 8, BranchNameFor(index));
    }
    EmitText(TokenKind::kLevelLabel, label);
  }

  switch (node.kind) {
    case NodeKind::kRoot: {
      auto summary = Summary();
      tokens_.insert(tokens_.end(), summary.begin(), summary.end());
      break;
    }
    case NodeKind::kFacetBranch: {
      Emit(TokenKind::kRangeOrCategory, "facet",
           {{"field", node.field}, {"category", node.category.value_or("")}});
      Emit(TokenKind::kPositionIndex, "position.facet",
           {{"index", std::to_string(s_.IndexInParent(index) + 1)},
            {"count", std::to_string(s_.node(*node.parent).children.size())}});
      Stats(node);
      Size(node);
      break;
    }
    case NodeKind::kChannelBranch: {
      std::string branch = templates_.BranchName(node.branch);
      const std::size_t children = node.children.size();
      if (node.branch == "grid") {
        const EncodingDef* x = s_.spec().encoding(Channel::kX);
        const EncodingDef* y = s_.spec().encoding(Channel::kY);
        Emit(TokenKind::kRangeOrCategory, "branch.grid",
             {{"branch", branch}, {"x", x ? x->field : ""}, {"y", y ? y->field : ""}});
        int cols = 0;
        int rows = 0;
        for (NodeIndex c : node.children) {
          cols = std::max(cols, s_.node(c).spatial_coord->col + 1);
          rows = std::max(rows, s_.node(c).spatial_coord->row + 1);
        }
        Emit(TokenKind::kEncodingInfo, "encoding.cells",
             {{"cols", std::to_string(cols)}, {"rows", std::to_string(rows)}});
      } else if (node.branch == "group" || node.branch.starts_with("drill")) {
        std::string fields;
        std::size_t which = 0;
        if (node.branch.starts_with("drill-")) which = std::stoul(node.branch.substr(6));
        if (which < s_.config().drill_orders.size()) {
          for (const auto& f : s_.config().drill_orders[which]) {
            fields += (fields.empty() ? "" : " then ") + f;
          }
        }
        Emit(TokenKind::kRangeOrCategory, node.branch == "group" ? "branch.group" : "branch.drill",
             {{"branch", branch}, {"fields", fields}});
        Emit(TokenKind::kEncodingInfo, "encoding.categories",
             {{"count", std::to_string(children)}});
      } else {
        Emit(TokenKind::kRangeOrCategory, "branch.channel",
             {{"branch", branch}, {"field", node.field}});
        bool intervals = !node.children.empty() &&
                         s_.node(node.children.front()).kind == NodeKind::kIntervalNode;
        Emit(TokenKind::kEncodingInfo, intervals ? "encoding.intervals" : "encoding.categories",
             {{"count", std::to_string(children)}});
      }
      Stats(node);
      Size(node);
      break;
    }
    case NodeKind::kAnnotationBranch:
      Emit(TokenKind::kRangeOrCategory, "branch.annotations",
           {{"branch", templates_.BranchName(node.branch)}});
      Emit(TokenKind::kEncodingInfo, "encoding.regions",
           {{"count", std::to_string(node.children.size())}});
      Stats(node);
      Size(node);
      break;
    case NodeKind::kIntervalNode:
      Context(index);
      Emit(TokenKind::kRangeOrCategory, "interval", IntervalValues(node));
      Note(node);
      Size(node);
      break;
    case NodeKind::kCategoryNode: {
      Context(index);
      Emit(TokenKind::kRangeOrCategory, "category",
           {{"field", node.field}, {"category", node.category.value_or("")}});
      auto owner = s_.OwningBranch(index);
      if (owner && s_.node(*owner).branch == "legend") {
        if (auto color = ColorName(node.category.value_or(""))) {
          Emit(TokenKind::kEncodingInfo, "encoding.color", {{"channel", "color"}, {"color", *color}});
        }
      }
      Note(node);
      Size(node);
      break;
    }
    case NodeKind::kGridCellNode: {
      Context(index);
      const EncodingDef* y = s_.spec().encoding(Channel::kY);
      std::string yf = y ? y->field : "";
      Emit(TokenKind::kRangeOrCategory, "cell",
           {{"x", node.field},
            {"xLo", Bound(node.field, node.interval->lo)},
            {"xHi", Bound(node.field, node.interval->hi)},
            {"y", yf},
            {"yLo", Bound(yf, node.y_interval->lo)},
            {"yHi", Bound(yf, node.y_interval->hi)}});
      Note(node);
      Size(node);
      break;
    }
    case NodeKind::kAnnotationRegion: {
      Context(index);
      Values v = IntervalValues(node);
      v["label"] = node.label;
      Emit(TokenKind::kRangeOrCategory, "region", v);
      const AnnotationDef& def = s_.spec().annotations[*node.annotation];
      if (!def.note.empty()) Emit(TokenKind::kSummaryStats, "region.note", {{"note", def.note}});
      Stats(node);
      Size(node);
      break;
    }
    case NodeKind::kDataSplitNode:
      Context(index);
      Emit(TokenKind::kRangeOrCategory, "split", IntervalValues(node));
      Stats(node);
      Size(node);
      break;
    case NodeKind::kDatumLeaf: {
      Context(index);
      const AccessNode& parent = s_.node(*node.parent);
      std::size_t position = 0;
      std::size_t count = 0;
      for (NodeIndex sibling : parent.children) {
        if (s_.node(sibling).kind != NodeKind::kDatumLeaf) continue;
        ++count;
        if (sibling == index) position = count;
      }
      Emit(TokenKind::kPositionIndex, "position.datum",
           {{"index", std::to_string(position)}, {"count", std::to_string(count)}});

      // The color value is implied when an ancestor already groups by it.
      const EncodingDef* color = s_.spec().encoding(Channel::kColor);
      bool color_implied = false;
      for (NodeIndex a : s_.PathFromRoot(index)) {
        const AccessNode& an = s_.node(a);
        if (color && an.kind == NodeKind::kCategoryNode && an.field == color->field) {
          color_implied = true;
        }
      }
      for (Channel ch : {Channel::kX, Channel::kY, Channel::kColor}) {
        const EncodingDef* enc = s_.spec().encoding(ch);
        if (!enc || (ch == Channel::kColor && color_implied)) continue;
        auto f = table_.FieldIndex(enc->field);
        if (!f) continue;
        Emit(TokenKind::kDatumValues, "datum.value",
             {{"field", enc->field},
              {"value", ValueText(table_, *f, *node.row, config_.significant_digits)}});
      }
      if (color && !IsNumeric(color->type)) {
        auto f = table_.FieldIndex(color->field);
        const Value& v = table_.value(*node.row, *f);
        if (!IsNull(v)) {
          if (auto name = ColorName(CategoryKey(v))) {
            Emit(TokenKind::kEncodingInfo, "datum.color", {{"color", *name}});
          }
        }
      }
      Note(node);
      break;
    }
    case NodeKind::kTableCell: {
      Emit(TokenKind::kPositionIndex, "position.table",
           {{"row", std::to_string(node.spatial_coord->row + 1)},
            {"col", std::to_string(node.spatial_coord->col + 1)}});
      auto f = table_.FieldIndex(node.field);
      Emit(TokenKind::kDatumValues, "datum.value",
           {{"field", node.field},
            {"value", ValueText(table_, *f, *node.row, config_.significant_digits)}});
      Emit(TokenKind::kSizeInfo, "size.table",
           {{"rows", std::to_string(table_.row_count())},
            {"cols", std::to_string(table_.field_count())}});
      break;
    }
    case NodeKind::kListItem: {
      Emit(TokenKind::kPositionIndex, "position.item",
           {{"index", std::to_string(s_.IndexInParent(index) + 1)},
            {"count", std::to_string(s_.node(*node.parent).children.size())}});
      if (node.row) {
        for (Channel ch : {Channel::kX, Channel::kY, Channel::kColor}) {
          const EncodingDef* enc = s_.spec().encoding(ch);
          if (!enc) continue;
          auto f = table_.FieldIndex(enc->field);
          if (!f) continue;
          Emit(TokenKind::kDatumValues, "datum.value",
               {{"field", enc->field},
                {"value", ValueText(table_, *f, *node.row, config_.significant_digits)}});
        }
      } else {
        Emit(TokenKind::kRangeOrCategory, "branch.channel",
             {{"branch", templates_.BranchName(node.branch)}, {"field", node.field}});
        Size(node);
      }
      break;
    }
  }
  return std::move(tokens_);
}

std::vector<DescriptionToken> TokenBuilder::Summary() {
  std::vector<DescriptionToken> saved = std::move(tokens_);
  tokens_.clear();
  const ChartSpec& spec = s_.spec();
  std::string mark(ToString(spec.mark));
  if (spec.title) {
    Emit(TokenKind::kRangeOrCategory, "root.titled", {{"title", *spec.title}, {"mark", mark}});
  } else {
    Emit(TokenKind::kRangeOrCategory, "root.untitled", {{"mark", mark}});
  }
  if (spec.description) {
    Emit(TokenKind::kSummaryStats, "summary.description", {{"text", *spec.description}});
  }
  tokens_.push_back({TokenKind::kEncodingInfo,
                     Counted(templates_, "summary.encodings", spec.encodings.size()), false});
  for (const auto& [channel, enc] : spec.encodings) {
    std::string branch = templates_.BranchName(channel == Channel::kColor ? "legend"
                                               : channel == Channel::kX  ? "x"
                                                                         : "y");
    const FieldMeta* meta = table_.Field(enc.field);
    Values v{{"branch", branch}, {"field", enc.field}, {"type", std::string(ToString(enc.type))}};
    if (meta && IsNumeric(enc.type) && IsNumeric(meta->inferred_type)) {
      if (meta->numeric_domain) {
        v["min"] = Bound(enc.field, meta->numeric_domain->min);
        v["max"] = Bound(enc.field, meta->numeric_domain->max);
        Emit(TokenKind::kEncodingInfo, "summary.channel.numeric", v);
      } else {
        Emit(TokenKind::kEncodingInfo, "summary.channel.empty", v);
      }
    } else {
      std::size_t count = CategoricalView(table_, enc.field, enc.type).categories.size();
      v["count"] = std::to_string(count);
      Emit(TokenKind::kEncodingInfo, "summary.channel.categorical", v);
    }
  }
  if (s_.has_grid()) {
    for (const auto& [name, index] : s_.branch_registry()) {
      if (name != "grid") continue;
      int cols = 0;
      int rows = 0;
      for (NodeIndex c : s_.node(index).children) {
        cols = std::max(cols, s_.node(c).spatial_coord->col + 1);
        rows = std::max(rows, s_.node(c).spatial_coord->row + 1);
      }
      Emit(TokenKind::kEncodingInfo, "summary.grid",
           {{"cols", std::to_string(cols)}, {"rows", std::to_string(rows)}});
    }
  }
  if (spec.facet) {
    std::size_t views =
        CategoricalView(table_, spec.facet->field, spec.facet->type, spec.facet->order)
            .categories.size();
    tokens_.push_back({TokenKind::kEncodingInfo,
                       Counted(templates_, "summary.facet", views, {{"field", spec.facet->field}}),
                       false});
  }
  if (!spec.annotations.empty()) {
    tokens_.push_back({TokenKind::kEncodingInfo,
                       Counted(templates_, "summary.annotations", spec.annotations.size()), false});
  }
  Note(s_.root());
  tokens_.push_back({TokenKind::kSizeInfo,
                     Counted(templates_, "size.points", table_.row_count()), false});
  std::vector<DescriptionToken> out = std::move(tokens_);
  tokens_ = std::move(saved);
  return out;
}

}  // namespace

std::string_view ToString(TokenKind kind) { return kTokenKindNames[static_cast<int>(kind)]; }

std::optional<TokenKind> TokenKindFromString(std::string_view text) {
  for (std::size_t i = 0; i < kTokenKindNames.size(); ++i) {
    if (kTokenKindNames[i] == text) return static_cast<TokenKind>(i);
  }
  return std::nullopt;
}

std::string_view ToString(Composition composition) {
  return composition == Composition::kContextFirst ? "contextFirst" : "dataFirst";
}

std::string_view ToString(Verbosity verbosity) {
  switch (verbosity) {
    case Verbosity::kHigh: return "high";
    case Verbosity::kMedium: return "medium";
    case Verbosity::kLow: return "low";
  }
  return {};
}

std::optional<Composition> CompositionFromString(std::string_view text) {
  if (text == "contextFirst") return Composition::kContextFirst;
  if (text == "dataFirst") return Composition::kDataFirst;
  return std::nullopt;
}

std::optional<Verbosity> VerbosityFromString(std::string_view text) {
  if (text == "high") return Verbosity::kHigh;
  if (text == "medium") return Verbosity::kMedium;
  if (text == "low") return Verbosity::kLow;
  return std::nullopt;
}

void Templates::Overlay(std::string_view text) {
  json doc = internal::ParseJsonStrict(text);
  if (!doc.is_object()) throw SchemaError("templates must be an object", "(root)");
  static const std::set<std::string> kKeys = {
      "join",         "sentenceKinds", "contextKinds", "noticeKinds", "verbosity",
      "levelLabels",  "branchNames",   "palette",      "templates",   "branchNotes"};
  for (const auto& item : doc.items()) {
    if (!kKeys.contains(item.key())) throw SchemaError("unknown key", item.key());
  }
  if (doc.contains("join")) {
    const json& join = doc["join"];
    for (const auto& item : join.items()) {
      std::string path = "join." + item.key();
      if (item.key() == "separator") separator_ = StringAt(item.value(), path);
      else if (item.key() == "sentenceBreak") sentence_break_ = StringAt(item.value(), path);
      else if (item.key() == "terminator") terminator_ = StringAt(item.value(), path);
      else throw SchemaError("unknown key", path);
    }
  }
  if (doc.contains("sentenceKinds")) sentence_kinds_ = KindSet(doc["sentenceKinds"], "sentenceKinds");
  if (doc.contains("contextKinds")) context_kinds_ = KindSet(doc["contextKinds"], "contextKinds");
  if (doc.contains("noticeKinds")) notice_kinds_ = KindSet(doc["noticeKinds"], "noticeKinds");
  if (doc.contains("verbosity")) {
    for (const auto& item : doc["verbosity"].items()) {
      auto level = VerbosityFromString(item.key());
      std::string path = "verbosity." + item.key();
      if (!level) throw SchemaError("unknown verbosity level", path);
      for (const auto& rule : item.value().items()) {
        if (rule.key() == "drop") dropped_[*level] = KindSet(rule.value(), path + ".drop");
        else if (rule.key() == "keepInnermost")
          keep_innermost_[*level] = KindSet(rule.value(), path + ".keepInnermost");
        else throw SchemaError("unknown key", path + "." + rule.key());
      }
    }
  }
  if (doc.contains("levelLabels")) {
    for (const auto& item : doc["levelLabels"].items()) {
      if (!NodeKindFromString(item.key())) {
        throw SchemaError("unknown node kind", "levelLabels." + item.key());
      }
      level_labels_[item.key()] = StringAt(item.value(), "levelLabels." + item.key());
    }
  }
  if (doc.contains("branchNames")) {
    for (const auto& item : doc["branchNames"].items()) {
      branch_names_[item.key()] = StringAt(item.value(), "branchNames." + item.key());
    }
  }
  if (doc.contains("branchNotes")) {
    for (const auto& item : doc["branchNotes"].items()) {
      branch_notes_[item.key()] = StringAt(item.value(), "branchNotes." + item.key());
    }
  }
  if (doc.contains("palette")) {
    palette_.clear();
    for (const auto& item : doc["palette"]) palette_.push_back(StringAt(item, "palette"));
  }
  if (doc.contains("templates")) {
    for (const auto& item : doc["templates"].items()) {
      std::string path = "templates." + item.key();
      const json& v = item.value();
      if (v.is_string()) {
        templates_[item.key()] = v.get<std::string>();
        attached_.erase(item.key());
      } else if (v.is_object()) {
        for (const auto& field : v.items()) {
          if (field.key() != "text" && field.key() != "attach") {
            throw SchemaError("unknown key", path + "." + field.key());
          }
        }
        if (!v.contains("text")) throw SchemaError("missing text", path);
        templates_[item.key()] = StringAt(v["text"], path + ".text");
        if (v.value("attach", false)) attached_.insert(item.key());
        else attached_.erase(item.key());
      } else {
        throw SchemaError("expected a string or {text, attach}", path);
      }
    }
  }
}

Templates Templates::Parse(std::string_view json_text) {
  Templates t = Default();
  t.Overlay(json_text);
  return t;
}

const Templates& Templates::Default() {
  static const Templates kDefault = [] {
    Templates t;
    t.Overlay(internal::kDefaultTemplatesJson);
    return t;
  }();
  return kDefault;
}

std::string Templates::Render(std::string_view key, const std::map<std::string, std::string>& values) const {
  auto it = templates_.find(key);
  if (it == templates_.end()) throw Error("no template named \"" + std::string(key) + "\"");
  const std::string& text = it->second;
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '{') {
      std::size_t close = text.find('}', i);
      if (close != std::string::npos) {
        auto v = values.find(text.substr(i + 1, close - i - 1));
        if (v != values.end()) {
          out += v->second;
          i = close;
          continue;
        }
      }
    }
    out.push_back(text[i]);
  }
  return out;
}

std::string Templates::LevelLabel(NodeKind kind) const {
  auto it = level_labels_.find(ToString(kind));
  return it == level_labels_.end() ? std::string() : it->second;
}

std::string Templates::BranchName(std::string_view branch) const {
  if (auto it = branch_names_.find(branch); it != branch_names_.end()) return it->second;
  // Numbered branches such as drill-0 read as "Drill path 1".
  auto dash = branch.rfind('-');
  if (dash != std::string_view::npos) {
    auto it = branch_names_.find(branch.substr(0, dash));
    if (it != branch_names_.end()) {
      int n = std::atoi(std::string(branch.substr(dash + 1)).c_str());
      return it->second + " " + std::to_string(n + 1);
    }
  }
  return std::string(branch);
}

std::optional<std::string> Templates::BranchNote(std::string_view node_id) const {
  auto it = branch_notes_.find(node_id);
  if (it == branch_notes_.end()) return std::nullopt;
  return it->second;
}

const std::set<TokenKind>& Templates::Dropped(Verbosity level) const {
  static const std::set<TokenKind> kNone;
  auto it = dropped_.find(level);
  return it == dropped_.end() ? kNone : it->second;
}

const std::set<TokenKind>& Templates::KeepInnermost(Verbosity level) const {
  static const std::set<TokenKind> kNone;
  auto it = keep_innermost_.find(level);
  return it == keep_innermost_.end() ? kNone : it->second;
}

std::vector<DescriptionToken> NodeTokens(const AccessStructure& structure, NodeIndex node,
                                         bool include_level_label, const DescriptionConfig& config,
                                         const Templates& templates) {
  return TokenBuilder(structure, config, templates).ForNode(node, include_level_label);
}

std::vector<DescriptionToken> VerbosityFilter(std::vector<DescriptionToken> tokens,
                                              Verbosity level, const Templates& templates) {
  const auto& dropped = templates.Dropped(level);
  const auto& innermost = templates.KeepInnermost(level);
  std::map<TokenKind, std::size_t> last;
  for (std::size_t i = 0; i < tokens.size(); ++i) last[tokens[i].kind] = i;
  std::vector<DescriptionToken> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    TokenKind kind = tokens[i].kind;
    if (templates.IsNotice(kind)) {
      out.push_back(std::move(tokens[i]));
      continue;
    }
    if (dropped.contains(kind)) continue;
    if (innermost.contains(kind) && last[kind] != i) continue;
    out.push_back(std::move(tokens[i]));
  }
  return out;
}

std::vector<DescriptionToken> Compose(std::vector<DescriptionToken> tokens,
                                      Composition composition, const Templates& templates) {
  std::vector<DescriptionToken> notices, labels, context, data;
  for (auto& token : tokens) {
    if (templates.IsNotice(token.kind)) notices.push_back(std::move(token));
    else if (token.kind == TokenKind::kLevelLabel) labels.push_back(std::move(token));
    else if (templates.IsContext(token.kind)) context.push_back(std::move(token));
    else data.push_back(std::move(token));
  }
  std::vector<DescriptionToken> out = std::move(notices);
  out.insert(out.end(), labels.begin(), labels.end());
  auto& first = composition == Composition::kContextFirst ? context : data;
  auto& second = composition == Composition::kContextFirst ? data : context;
  out.insert(out.end(), first.begin(), first.end());
  out.insert(out.end(), second.begin(), second.end());
  return out;
}

std::string JoinTokens(const std::vector<DescriptionToken>& tokens, const Templates& templates) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) {
      if (tokens[i].attach) out += " ";
      else if (templates.EndsSentence(tokens[i - 1].kind)) out += templates.sentence_break();
      else out += templates.separator();
    }
    out += tokens[i].text;
  }
  if (!out.empty()) out += templates.terminator();
  return out;
}

Utterance Describe(const AccessStructure& structure, NodeIndex node, const DescribeContext& context,
                   const DescriptionConfig& config, const Templates& templates) {
  bool include_level = !(config.suppress_repeated_level && !context.level_changed);
  std::vector<DescriptionToken> tokens;
  if (context.transition == Transition::kBoundary && !context.boundary_key.empty()) {
    tokens.push_back({TokenKind::kBoundaryNotice,
                      templates.Render(context.boundary_key, context.boundary_values),
                      templates.IsAttached(context.boundary_key)});
  }
  if (context.clamped) {
    tokens.push_back({TokenKind::kClampNotice, templates.Render("clamp", {}), false});
  }
  auto body = NodeTokens(structure, node, include_level, config, templates);
  tokens.insert(tokens.end(), body.begin(), body.end());

  Utterance u;
  u.tokens = Compose(VerbosityFilter(std::move(tokens), config.verbosity, templates),
                     config.composition, templates);
  u.text = JoinTokens(u.tokens, templates);
  return u;
}

Utterance DescribeStructureSummary(const AccessStructure& structure, const DescriptionConfig& config,
                                   const Templates& templates) {
  Utterance u;
  u.tokens = Compose(TokenBuilder(structure, config, templates).Summary(), config.composition,
                     templates);
  u.text = JoinTokens(u.tokens, templates);
  return u;
}

Utterance NoticeUtterance(TokenKind kind, std::string_view key,
                          const std::map<std::string, std::string>& values,
                          const Templates& templates) {
  Utterance u;
  u.tokens.push_back({kind, templates.Render(key, values), false});
  u.text = JoinTokens(u.tokens, templates);
  return u;
}

std::string FormatNumber(double value, int significant_digits) {
  if (!std::isfinite(value)) return value != value ? "NaN" : (value > 0 ? "Infinity" : "-Infinity");
  if (value == 0) return "0";
  significant_digits = std::max(1, significant_digits);
  int exponent = static_cast<int>(std::floor(std::log10(std::fabs(value))));
  int decimals = significant_digits - 1 - exponent;
  char buffer[64];
  if (decimals >= 0) {
    std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
  } else {
    double scale = std::pow(10.0, -decimals);
    std::snprintf(buffer, sizeof(buffer), "%.0f", std::round(value / scale) * scale);
  }
  std::string out = buffer;
  if (out.find('.') != std::string::npos) {
    while (out.back() == '0') out.pop_back();
    if (out.back() == '.') out.pop_back();
  }
  if (out == "-0") out = "0";
  return out;
}

}  // namespace chartnav
