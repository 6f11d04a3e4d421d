#include "chartnav/structure.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>

#include "chartnav/errors.h"
#include "json.hpp"

namespace chartnav {

namespace {

constexpr std::array<std::string_view, kNodeKindCount> kNodeKindNames = {
    "root",           "facetBranch",      "channelBranch",  "intervalNode",
    "categoryNode",   "gridCellNode",     "annotationBranch", "annotationRegion",
    "dataSplitNode",  "datumLeaf",        "tableCell",      "listItem",
};

constexpr std::array<std::string_view, 8> kVariantNames = {
    "flatList",   "dataTable",   "encodingTree", "annotationTree",
    "binaryTree", "multiBranch", "facetedTree",  "nestedCategoryTree",
};

const std::vector<std::string> kDefaultBranchOrder = {"x", "y", "legend", "grid", "annotations"};

std::string Sanitize(std::string_view text) {
  std::string out;
  for (char c : text) {
    bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                c == '_' || c == '.' || c == '-';
    out.push_back(keep ? c : '_');
  }
  return out.empty() ? "_" : out;
}

std::string ChannelBranchName(Channel channel) {
  switch (channel) {
    case Channel::kX: return "x";
    case Channel::kY: return "y";
    case Channel::kColor: return "legend";
  }
  return {};
}

}  // namespace

std::string_view ToString(NodeKind kind) { return kNodeKindNames[static_cast<int>(kind)]; }

std::string_view ToString(Granularity granularity) {
  switch (granularity) {
    case Granularity::kExistence: return "existence";
    case Granularity::kOverview: return "overview";
    case Granularity::kDetail: return "detail";
  }
  return {};
}

std::string_view ToString(StructureForm form) {
  switch (form) {
    case StructureForm::kList: return "list";
    case StructureForm::kTable: return "table";
    case StructureForm::kTree: return "tree";
  }
  return {};
}

std::string_view ToString(Variant variant) { return kVariantNames[static_cast<int>(variant)]; }

std::optional<NodeKind> NodeKindFromString(std::string_view text) {
  for (int i = 0; i < kNodeKindCount; ++i) {
    if (kNodeKindNames[i] == text) return static_cast<NodeKind>(i);
  }
  return std::nullopt;
}

std::optional<Variant> VariantFromString(std::string_view text) {
  for (std::size_t i = 0; i < kVariantNames.size(); ++i) {
    if (kVariantNames[i] == text) return static_cast<Variant>(i);
  }
  return std::nullopt;
}

Granularity GranularityFor(NodeKind kind) {
  if (kind == NodeKind::kRoot) return Granularity::kExistence;
  if (kind == NodeKind::kDatumLeaf || kind == NodeKind::kTableCell) return Granularity::kDetail;
  return Granularity::kOverview;
}

std::optional<DumpFormat> DumpFormatFromString(std::string_view text) {
  if (text == "json") return DumpFormat::kJson;
  if (text == "text") return DumpFormat::kText;
  return std::nullopt;
}

std::optional<NodeIndex> AccessStructure::Find(std::string_view id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

std::size_t AccessStructure::IndexInParent(NodeIndex index) const {
  const auto& parent = nodes_[index].parent;
  if (!parent) return 0;
  const auto& siblings = nodes_[*parent].children;
  return static_cast<std::size_t>(std::find(siblings.begin(), siblings.end(), index) -
                                  siblings.begin());
}

std::optional<NodeIndex> AccessStructure::TopLevelBranch(NodeIndex index) const {
  if (index == kRoot) return std::nullopt;
  while (*nodes_[index].parent != kRoot) index = *nodes_[index].parent;
  return index;
}

std::optional<NodeIndex> AccessStructure::OwningBranch(NodeIndex index) const {
  std::optional<NodeIndex> at = index;
  while (at) {
    NodeKind kind = nodes_[*at].kind;
    if (kind == NodeKind::kChannelBranch || kind == NodeKind::kAnnotationBranch) return at;
    at = nodes_[*at].parent;
  }
  return std::nullopt;
}

std::vector<NodeIndex> AccessStructure::PathFromRoot(NodeIndex index) const {
  std::vector<NodeIndex> path;
  std::optional<NodeIndex> at = index;
  while (at) {
    path.push_back(*at);
    at = nodes_[*at].parent;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

bool AccessStructure::IsAncestor(NodeIndex ancestor, NodeIndex node) const {
  std::optional<NodeIndex> at = nodes_[node].parent;
  while (at) {
    if (*at == ancestor) return true;
    at = nodes_[*at].parent;
  }
  return false;
}

std::optional<double> AccessStructure::AxisPosition(Channel channel, RowId row) const {
  auto it = axis_positions_.find(channel);
  if (it == axis_positions_.end() || row >= it->second.size()) return std::nullopt;
  return it->second[row];
}

// Compiles a spec + table into the flat pre-order node vector.
class StructureBuilder {
 public:
  StructureBuilder(std::shared_ptr<const ChartSpec> spec, std::shared_ptr<const DataTable> data,
                   const StructureConfig& config)
      : s_(std::make_shared<AccessStructure>()) {
    s_->spec_ = std::move(spec);
    s_->table_ = std::move(data);
    s_->config_ = config;
  }

  std::shared_ptr<const AccessStructure> Build();

 private:
  // Everything a branch needs to know about one encoded channel.
  struct ChannelInfo {
    const EncodingDef* enc = nullptr;
    std::size_t field = 0;
    bool numeric = false;
    std::vector<Interval> intervals;
    FieldMeta categories;
  };

  const ChartSpec& spec() const { return *s_->spec_; }
  const DataTable& table() const { return *s_->table_; }

  void CheckConfig() const;
  void PrepareChannels();

  NodeIndex Add(std::optional<NodeIndex> parent, AccessNode node, std::string_view segment);
  void AddLeaves(NodeIndex parent, const Selection& selection, Channel order_channel,
                 const std::string& field);

  void BuildEncodingBranches(NodeIndex parent, const Selection& base, bool with_annotations);
  void BuildChannelBranch(NodeIndex parent, Channel channel, const Selection& base);
  void BuildGridBranch(NodeIndex parent, const Selection& base);
  void BuildRegions(NodeIndex parent, const Selection& base);
  void BuildAnnotationBranch(NodeIndex parent, const Selection& base);
  void BuildBinary(NodeIndex parent, const Selection& selection,
                   std::span<const double> distinct, int depth_guard);
  void BuildDrillLevel(NodeIndex parent, const Selection& selection,
                       std::span<const std::string> fields, bool full_domain);
  void BuildFlatList(NodeIndex root);
  void BuildDataTable(NodeIndex root);

  // Categories of any field for drill levels: numeric fields use their
  // distinct values ascending.
  std::vector<std::string> LevelCategories(const std::string& field) const;
  std::string ValueText(std::size_t field, const Value& v) const;
  std::vector<std::string> BranchOrder() const;

  std::shared_ptr<AccessStructure> s_;
  std::map<Channel, ChannelInfo> channels_;
};

void StructureBuilder::CheckConfig() const {
  const StructureConfig& config = s_->config_;
  const auto issues = ValidateSpec(spec(), table());
  if (const auto* issue = FirstError(issues)) {
    throw ConfigError("spec does not match the data: " + issue->path + ": " + issue->message);
  }
  if (config.binary_leaf_size < 1) throw ConfigError("binaryLeafSize must be at least 1");
  for (const auto& name : config.branch_order) {
    if (std::find(kDefaultBranchOrder.begin(), kDefaultBranchOrder.end(), name) ==
        kDefaultBranchOrder.end()) {
      throw ConfigError("unknown branch \"" + name + "\" in branchOrder");
    }
  }
  for (const auto& order : config.drill_orders) {
    if (order.empty()) throw ConfigError("drill orders must name at least one field");
    for (const auto& field : order) {
      if (!table().FieldIndex(field)) {
        throw ConfigError("drill order field \"" + field + "\" is not in the data");
      }
    }
  }
  switch (config.variant) {
    case Variant::kBinaryTree: {
      const EncodingDef* x = spec().encoding(Channel::kX);
      if (!x || !IsNumeric(x->type)) {
        throw ConfigError("binaryTree needs a quantitative or temporal x encoding");
      }
      break;
    }
    case Variant::kFacetedTree:
      if (!spec().facet) throw ConfigError("facetedTree needs a facet in the spec");
      break;
    case Variant::kAnnotationTree:
      if (spec().annotations.empty()) throw ConfigError("annotationTree needs annotations");
      break;
    case Variant::kMultiBranch:
      if (config.drill_orders.size() < 2 && spec().annotations.empty()) {
        throw ConfigError("multiBranch needs annotations or at least two drill orders");
      }
      break;
    case Variant::kNestedCategoryTree:
      if (config.drill_orders.empty() || config.drill_orders[0].size() != 2) {
        throw ConfigError("nestedCategoryTree needs a drill order of two fields (outer, inner)");
      }
      break;
    default:
      break;
  }
}

void StructureBuilder::PrepareChannels() {
  for (const auto& [channel, enc] : spec().encodings) {
    ChannelInfo info;
    info.enc = &enc;
    info.field = *table().FieldIndex(enc.field);
    const FieldMeta& meta = table().fields()[info.field];
    // Validation guarantees a numeric field whenever the column has values;
    // an empty column takes the encoding's word for it.
    info.numeric = IsNumeric(enc.type);
    if (info.numeric) {
      int target = enc.bin ? enc.bin->maxbins : kDefaultMaxBins;
      NumericDomain domain = meta.numeric_domain.value_or(NumericDomain{0, 1});
      bool temporal = meta.numeric_domain ? meta.inferred_type == FieldType::kTemporal
                                          : enc.type == FieldType::kTemporal;
      info.intervals = ComputeIntervals(domain, target, temporal);
    } else {
      info.categories = CategoricalView(table(), enc.field, enc.type);
    }

    if (channel != Channel::kColor) {
      std::vector<std::optional<double>> positions(table().row_count());
      std::unordered_map<std::string, std::size_t> index;
      for (std::size_t i = 0; i < info.categories.categories.size(); ++i) {
        index.emplace(info.categories.categories[i], i);
      }
      for (std::size_t r = 0; r < table().row_count(); ++r) {
        const Value& v = table().value(static_cast<RowId>(r), info.field);
        if (IsNull(v)) continue;
        if (info.numeric) {
          positions[r] = std::get<double>(v);
        } else if (auto it = index.find(CategoryKey(v)); it != index.end()) {
          positions[r] = static_cast<double>(it->second);
        }
      }
      s_->axis_positions_[channel] = std::move(positions);
    }
    channels_.emplace(channel, std::move(info));
  }
}

NodeIndex StructureBuilder::Add(std::optional<NodeIndex> parent, AccessNode node,
                                std::string_view segment) {
  std::string id(segment);
  if (parent) {
    const std::string& parent_id = s_->nodes_[*parent].id;
    id = parent_id + "/" + std::string(segment);
    // Sanitized category names can collide.
    for (int n = 2; s_->by_id_.contains(id); ++n) {
      id = parent_id + "/" + std::string(segment) + "~" + std::to_string(n);
    }
    node.depth = s_->nodes_[*parent].depth + 1;
  }
  node.id = id;
  node.parent = parent;
  node.granularity = GranularityFor(node.kind);
  NodeIndex index = s_->nodes_.size();
  s_->by_id_.emplace(id, index);
  s_->nodes_.push_back(std::move(node));
  if (parent) s_->nodes_[*parent].children.push_back(index);
  return index;
}

void StructureBuilder::AddLeaves(NodeIndex parent, const Selection& selection,
                                 Channel order_channel, const std::string& field) {
  std::vector<RowId> rows = selection.member_row_ids;
  auto& positions = s_->axis_positions_[order_channel];
  auto key = [&](RowId r) {
    return r < positions.size() && positions[r] ? *positions[r]
                                                : std::numeric_limits<double>::infinity();
  };
  std::stable_sort(rows.begin(), rows.end(), [&](RowId a, RowId b) {
    double ka = key(a);
    double kb = key(b);
    return ka != kb ? ka < kb : a < b;
  });
  for (RowId r : rows) {
    AccessNode leaf;
    leaf.kind = NodeKind::kDatumLeaf;
    leaf.label = "row " + std::to_string(r);
    leaf.field = field;
    leaf.row = r;
    leaf.selection = Refine(table(), selection, Constraint{"", RowConstraint{r}});
    Add(parent, std::move(leaf), "datum-" + std::to_string(r));
  }
}

std::vector<std::string> StructureBuilder::BranchOrder() const {
  std::vector<std::string> order = s_->config_.branch_order;
  for (const auto& name : kDefaultBranchOrder) {
    if (std::find(order.begin(), order.end(), name) == order.end()) order.push_back(name);
  }
  return order;
}

void StructureBuilder::BuildEncodingBranches(NodeIndex parent, const Selection& base,
                                             bool with_annotations) {
  for (const auto& name : BranchOrder()) {
    if (name == "x" && channels_.contains(Channel::kX)) {
      BuildChannelBranch(parent, Channel::kX, base);
    } else if (name == "y" && channels_.contains(Channel::kY)) {
      BuildChannelBranch(parent, Channel::kY, base);
    } else if (name == "legend" && channels_.contains(Channel::kColor)) {
      BuildChannelBranch(parent, Channel::kColor, base);
    } else if (name == "grid" && channels_.contains(Channel::kX) &&
               channels_.contains(Channel::kY) && channels_.at(Channel::kX).numeric &&
               channels_.at(Channel::kY).numeric) {
      BuildGridBranch(parent, base);
    } else if (name == "annotations" && with_annotations) {
      BuildAnnotationBranch(parent, base);
    }
  }
}

void StructureBuilder::BuildChannelBranch(NodeIndex parent, Channel channel,
                                          const Selection& base) {
  const ChannelInfo& info = channels_.at(channel);
  const std::string& field = info.enc->field;
  const std::string name = ChannelBranchName(channel);
  std::array<std::string, 1> fields = {field};

  AccessNode branch;
  branch.kind = NodeKind::kChannelBranch;
  branch.branch = name;
  branch.field = field;
  branch.label = name + " (" + field + ")";
  branch.selection = NonNull(table(), base, fields);
  NodeIndex branch_index = Add(parent, branch, name);
  const Selection branch_selection = s_->nodes_[branch_index].selection;

  // Positional branches order leaves by their own field, the legend by x.
  Channel order = channel == Channel::kColor ? Channel::kX : channel;
  if (!s_->axis_positions_.contains(order)) order = Channel::kY;

  if (info.numeric) {
    for (std::size_t i = 0; i < info.intervals.size(); ++i) {
      const Interval& interval = info.intervals[i];
      AccessNode node;
      node.kind = NodeKind::kIntervalNode;
      node.field = field;
      node.interval = interval;
      node.label = field + " " + interval.label;
      node.selection = Refine(
          table(), branch_selection,
          Constraint{field, IntervalConstraint{interval.lo, interval.hi, interval.closed_low,
                                               interval.closed_high}});
      Selection selection = node.selection;
      NodeIndex index = Add(branch_index, std::move(node), "interval-" + std::to_string(i));
      AddLeaves(index, selection, order, field);
    }
  } else {
    for (auto& [category, selection] : GroupByCategory(table(), info.categories, &branch_selection)) {
      AccessNode node;
      node.kind = NodeKind::kCategoryNode;
      node.field = field;
      node.category = category;
      node.label = field + " " + category;
      node.selection = selection;
      NodeIndex index = Add(branch_index, std::move(node), "category-" + Sanitize(category));
      AddLeaves(index, selection, order, field);
    }
  }
}

void StructureBuilder::BuildGridBranch(NodeIndex parent, const Selection& base) {
  const ChannelInfo& x = channels_.at(Channel::kX);
  const ChannelInfo& y = channels_.at(Channel::kY);
  std::array<std::string, 2> fields = {x.enc->field, y.enc->field};

  AccessNode branch;
  branch.kind = NodeKind::kChannelBranch;
  branch.branch = "grid";
  branch.label = "grid (" + x.enc->field + " by " + y.enc->field + ")";
  branch.selection = NonNull(table(), base, fields);
  NodeIndex branch_index = Add(parent, branch, "grid");
  s_->has_grid_ = true;
  const Selection branch_selection = s_->nodes_[branch_index].selection;

  auto cells = GridCells(table(), x.enc->field, x.intervals, y.enc->field, y.intervals,
                         &branch_selection);
  // Row-major from the bottom row (lowest y interval).
  for (std::size_t r = 0; r < y.intervals.size(); ++r) {
    for (std::size_t c = 0; c < x.intervals.size(); ++c) {
      AccessNode node;
      node.kind = NodeKind::kGridCellNode;
      node.field = x.enc->field;
      node.interval = x.intervals[c];
      node.y_interval = y.intervals[r];
      node.spatial_coord = SpatialCoord{static_cast<int>(c), static_cast<int>(r)};
      node.label = x.enc->field + " " + x.intervals[c].label + ", " + y.enc->field + " " +
                   y.intervals[r].label;
      node.selection = cells[c][r];
      Selection selection = node.selection;
      NodeIndex index = Add(branch_index, std::move(node),
                            "cell-" + std::to_string(c) + "-" + std::to_string(r));
      AddLeaves(index, selection, Channel::kX, x.enc->field);
    }
  }
}

void StructureBuilder::BuildRegions(NodeIndex parent, const Selection& base) {
  for (std::size_t i = 0; i < spec().annotations.size(); ++i) {
    const AnnotationDef& annotation = spec().annotations[i];
    const ChannelInfo& info = channels_.at(annotation.channel);
    const std::string& field = info.enc->field;
    bool temporal = table().fields()[info.field].inferred_type == FieldType::kTemporal;
    auto bound = [&](double v) {
      return temporal ? FormatIsoDate(static_cast<std::int64_t>(std::llround(v)))
                      : CategoryKey(Value{v});
    };

    AccessNode node;
    node.kind = NodeKind::kAnnotationRegion;
    node.field = field;
    node.annotation = i;
    node.interval = Interval{annotation.lo, annotation.hi, true, true,
                             bound(annotation.lo) + "\xE2\x80\x93" + bound(annotation.hi)};
    node.label = annotation.label;
    node.selection =
        Refine(table(), base, Constraint{field, IntervalConstraint{annotation.lo, annotation.hi, true, true}});
    Selection selection = node.selection;
    NodeIndex index = Add(parent, std::move(node), "region-" + std::to_string(i));
    AddLeaves(index, selection, Channel::kX, field);
  }
}

void StructureBuilder::BuildAnnotationBranch(NodeIndex parent, const Selection& base) {
  if (spec().annotations.empty()) return;
  AccessNode branch;
  branch.kind = NodeKind::kAnnotationBranch;
  branch.branch = "annotations";
  branch.label = "annotations";
  branch.selection = base;
  NodeIndex index = Add(parent, branch, "annotations");
  BuildRegions(index, base);
}

void StructureBuilder::BuildBinary(NodeIndex parent, const Selection& selection,
                                   std::span<const double> distinct, int depth_guard) {
  const ChannelInfo& x = channels_.at(Channel::kX);
  const std::string& field = x.enc->field;
  const std::size_t leaf_size = static_cast<std::size_t>(s_->config_.binary_leaf_size);
  if (distinct.size() <= leaf_size || depth_guard > 64) {
    AddLeaves(parent, selection, Channel::kX, field);
    return;
  }
  const std::size_t split = distinct.size() / 2;
  const std::array<std::span<const double>, 2> halves = {distinct.subspan(0, split),
                                                         distinct.subspan(split)};
  bool temporal = table().fields()[x.field].inferred_type == FieldType::kTemporal;
  auto bound = [&](double v) {
    return temporal ? FormatIsoDate(static_cast<std::int64_t>(std::llround(v)))
                    : CategoryKey(Value{v});
  };
  for (int side = 0; side < 2; ++side) {
    std::span<const double> half = halves[side];
    Selection part = Refine(table(), selection,
                            Constraint{field, IntervalConstraint{half.front(), half.back(), true, true}});
    if (half.size() <= leaf_size) {
      AddLeaves(parent, part, Channel::kX, field);
      continue;
    }
    AccessNode node;
    node.kind = NodeKind::kDataSplitNode;
    node.field = field;
    std::string label = bound(half.front()) + "\xE2\x80\x93" + bound(half.back());
    node.interval = Interval{half.front(), half.back(), true, true, label};
    node.label = field + " " + label;
    node.selection = part;
    NodeIndex index = Add(parent, std::move(node), side == 0 ? "left" : "right");
    BuildBinary(index, part, half, depth_guard + 1);
  }
}

std::vector<std::string> StructureBuilder::LevelCategories(const std::string& field) const {
  std::size_t index = *table().FieldIndex(field);
  const FieldMeta& meta = table().fields()[index];
  if (!IsNumeric(meta.inferred_type)) return CategoricalView(table(), field).categories;
  std::set<double> values;
  for (const Value& v : table().column(index)) {
    if (const auto* d = std::get_if<double>(&v)) values.insert(*d);
  }
  std::vector<std::string> out;
  for (double v : values) out.push_back(CategoryKey(Value{v}));
  return out;
}

std::string StructureBuilder::ValueText(std::size_t field, const Value& v) const {
  if (table().fields()[field].inferred_type == FieldType::kTemporal) {
    if (const auto* d = std::get_if<double>(&v)) {
      return FormatIsoDate(static_cast<std::int64_t>(std::llround(*d)));
    }
  }
  return CategoryKey(v);
}

void StructureBuilder::BuildDrillLevel(NodeIndex parent, const Selection& selection,
                                       std::span<const std::string> fields, bool full_domain) {
  if (fields.empty()) {
    Channel order = s_->axis_positions_.contains(Channel::kX) ? Channel::kX : Channel::kY;
    const std::string field = s_->nodes_[parent].field;  // Add() may reallocate nodes_
    AddLeaves(parent, selection, order, field);
    return;
  }
  const std::string& field = fields.front();
  std::size_t field_index = *table().FieldIndex(field);
  FieldMeta view;
  view.name = field;
  view.inferred_type = FieldType::kNominal;
  view.categories = LevelCategories(field);
  for (auto& [category, group] : GroupByCategory(table(), view, &selection)) {
    if (!full_domain && group.size() == 0) continue;
    AccessNode node;
    node.kind = NodeKind::kCategoryNode;
    node.field = field;
    node.category = category;
    std::string text = category;
    if (table().fields()[field_index].inferred_type == FieldType::kTemporal) {
      text = ValueText(field_index, Value{std::stod(category)});
    }
    node.label = field + " " + text;
    node.selection = group;
    Selection next = node.selection;
    NodeIndex index = Add(parent, std::move(node), "category-" + Sanitize(category));
    BuildDrillLevel(index, next, fields.subspan(1), false);
  }
}

void StructureBuilder::BuildFlatList(NodeIndex root) {
  int item = 0;
  for (Channel channel : {Channel::kX, Channel::kY, Channel::kColor}) {
    auto it = channels_.find(channel);
    if (it == channels_.end()) continue;
    const std::string& field = it->second.enc->field;
    std::array<std::string, 1> fields = {field};
    AccessNode node;
    node.kind = NodeKind::kListItem;
    node.branch = ChannelBranchName(channel);
    node.field = field;
    node.label = ChannelBranchName(channel) + " (" + field + ")";
    node.selection = NonNull(table(), s_->nodes_[root].selection, fields);
    Add(root, std::move(node), "item-" + std::to_string(item++));
  }
  const Selection all = s_->nodes_[root].selection;
  for (RowId r : all.member_row_ids) {
    AccessNode node;
    node.kind = NodeKind::kListItem;
    node.row = r;
    node.label = "row " + std::to_string(r);
    node.selection = Refine(table(), all, Constraint{"", RowConstraint{r}});
    Add(root, std::move(node), "item-" + std::to_string(item++));
  }
}

void StructureBuilder::BuildDataTable(NodeIndex root) {
  const Selection all = s_->nodes_[root].selection;
  for (RowId r : all.member_row_ids) {
    Selection row = Refine(table(), all, Constraint{"", RowConstraint{r}});
    for (std::size_t f = 0; f < table().field_count(); ++f) {
      const FieldMeta& meta = table().fields()[f];
      AccessNode node;
      node.kind = NodeKind::kTableCell;
      node.row = r;
      node.field = meta.name;
      node.spatial_coord = SpatialCoord{static_cast<int>(f), static_cast<int>(r)};
      node.label = meta.name + ", row " + std::to_string(r);
      node.selection = row;
      Add(root, std::move(node), "cell-" + std::to_string(f) + "-" + std::to_string(r));
    }
  }
}

std::shared_ptr<const AccessStructure> StructureBuilder::Build() {
  CheckConfig();
  PrepareChannels();
  const StructureConfig& config = s_->config_;

  switch (config.variant) {
    case Variant::kFlatList: s_->form_ = StructureForm::kList; break;
    case Variant::kDataTable: s_->form_ = StructureForm::kTable; break;
    default: s_->form_ = StructureForm::kTree; break;
  }

  AccessNode root_node;
  root_node.kind = NodeKind::kRoot;
  root_node.label = spec().title.value_or("chart");
  root_node.selection = SelectAll(table());
  NodeIndex root = Add(std::nullopt, std::move(root_node), "root");
  const Selection all = s_->nodes_[root].selection;

  switch (config.variant) {
    case Variant::kFlatList:
      BuildFlatList(root);
      break;
    case Variant::kDataTable:
      BuildDataTable(root);
      break;
    case Variant::kEncodingTree:
      BuildEncodingBranches(root, all, false);
      break;
    case Variant::kAnnotationTree:
      BuildRegions(root, all);
      break;
    case Variant::kBinaryTree: {
      const ChannelInfo& x = channels_.at(Channel::kX);
      std::array<std::string, 1> fields = {x.enc->field};
      Selection present = NonNull(table(), all, fields);
      std::set<double> values;
      for (RowId r : present.member_row_ids) values.insert(*table().Number(r, x.field));
      std::vector<double> distinct(values.begin(), values.end());
      if (!distinct.empty()) {
        s_->nodes_[root].field = x.enc->field;
        s_->nodes_[root].interval =
            Interval{distinct.front(), distinct.back(), true, true,
                     ValueText(x.field, Value{distinct.front()}) + "\xE2\x80\x93" +
                         ValueText(x.field, Value{distinct.back()})};
      }
      BuildBinary(root, present, distinct, 0);
      break;
    }
    case Variant::kMultiBranch:
      if (config.drill_orders.size() >= 2) {
        for (std::size_t i = 0; i < config.drill_orders.size(); ++i) {
          const auto& fields = config.drill_orders[i];
          std::string name = "drill-" + std::to_string(i);
          AccessNode branch;
          branch.kind = NodeKind::kChannelBranch;
          branch.branch = name;
          std::string joined;
          for (const auto& f : fields) joined += (joined.empty() ? "" : " then ") + f;
          branch.label = "drill path (" + joined + ")";
          branch.selection = NonNull(table(), all, fields);
          NodeIndex index = Add(root, branch, name);
          Selection selection = s_->nodes_[index].selection;
          BuildDrillLevel(index, selection, fields, true);
        }
      } else {
        BuildEncodingBranches(root, all, true);
      }
      break;
    case Variant::kFacetedTree: {
      const FacetDef& facet = *spec().facet;
      FieldMeta view = CategoricalView(table(), facet.field, facet.type, facet.order);
      for (auto& [category, selection] : GroupByCategory(table(), view)) {
        AccessNode node;
        node.kind = NodeKind::kFacetBranch;
        node.field = facet.field;
        node.category = category;
        node.label = facet.field + " " + category;
        node.selection = selection;
        NodeIndex index = Add(root, std::move(node), "facet-" + Sanitize(category));
        BuildEncodingBranches(index, selection, false);
      }
      break;
    }
    case Variant::kNestedCategoryTree: {
      const auto& fields = config.drill_orders[0];
      AccessNode branch;
      branch.kind = NodeKind::kChannelBranch;
      branch.branch = "group";
      branch.label = "groups (" + fields[0] + " then " + fields[1] + ")";
      branch.selection = NonNull(table(), all, fields);
      NodeIndex index = Add(root, branch, "group");
      Selection selection = s_->nodes_[index].selection;
      BuildDrillLevel(index, selection, std::span<const std::string>(fields), true);
      if (channels_.contains(Channel::kColor)) BuildChannelBranch(root, Channel::kColor, all);
      break;
    }
  }

  for (NodeIndex i = 0; i < s_->nodes_.size(); ++i) s_->landmarks_[s_->nodes_[i].kind].push_back(i);
  for (NodeIndex child : s_->nodes_[root].children) {
    const std::string& id = s_->nodes_[child].id;
    s_->branches_.emplace_back(id.substr(id.rfind('/') + 1), child);
  }
  return s_;
}

std::shared_ptr<const AccessStructure> BuildStructure(std::shared_ptr<const ChartSpec> spec,
                                                      std::shared_ptr<const DataTable> data,
                                                      const StructureConfig& config) {
  if (!spec || !data) throw ConfigError("spec and data are required");
  return StructureBuilder(std::move(spec), std::move(data), config).Build();
}

LandmarkIndex AttachLandmarks(const AccessStructure& structure, std::span<const NodeKind> levels,
                              NodeIndex scope) {
  LandmarkIndex index;
  for (NodeKind kind : levels) index[kind];
  const int scope_depth = structure.node(scope).depth;
  for (NodeIndex i = scope; i < structure.size(); ++i) {
    const AccessNode& node = structure.node(i);
    if (i != scope && node.depth <= scope_depth) break;  // left the subtree
    auto it = index.find(node.kind);
    if (it != index.end()) it->second.push_back(i);
  }
  return index;
}

std::string DumpStructure(const AccessStructure& structure, DumpFormat format) {
  if (format == DumpFormat::kText) {
    std::ostringstream out;
    out << "variant " << ToString(structure.variant()) << ", form " << ToString(structure.form())
        << ", " << structure.size() << " nodes\n";
    for (const AccessNode& node : structure.nodes()) {
      out << std::string(static_cast<std::size_t>(node.depth) * 2, ' ') << node.id << " ["
          << ToString(node.kind) << "] " << node.label << " (" << node.selection.size()
          << " rows)";
      if (node.spatial_coord) {
        out << " @" << node.spatial_coord->col << "," << node.spatial_coord->row;
      }
      out << "\n";
    }
    return out.str();
  }

  nlohmann::ordered_json doc;
  doc["variant"] = ToString(structure.variant());
  doc["form"] = ToString(structure.form());
  auto nodes = nlohmann::ordered_json::array();
  for (const AccessNode& node : structure.nodes()) {
    nlohmann::ordered_json j;
    j["id"] = node.id;
    j["kind"] = ToString(node.kind);
    j["label"] = node.label;
    j["granularity"] = ToString(node.granularity);
    if (!node.branch.empty()) j["branch"] = node.branch;
    j["parentId"] = node.parent ? nlohmann::ordered_json(structure.node(*node.parent).id)
                                : nlohmann::ordered_json(nullptr);
    auto children = nlohmann::ordered_json::array();
    for (NodeIndex c : node.children) children.push_back(structure.node(c).id);
    j["childIds"] = std::move(children);
    if (node.spatial_coord) {
      j["spatialCoord"] = {{"col", node.spatial_coord->col}, {"row", node.spatial_coord->row}};
    } else {
      j["spatialCoord"] = nullptr;
    }
    j["rowIds"] = node.selection.member_row_ids;
    nodes.push_back(std::move(j));
  }
  doc["nodes"] = std::move(nodes);
  return doc.dump(2) + "\n";
}

}  // namespace chartnav
