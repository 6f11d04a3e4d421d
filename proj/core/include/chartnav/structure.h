#ifndef CHARTNAV_STRUCTURE_H_
#define CHARTNAV_STRUCTURE_H_

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chartnav/data_table.h"
#include "chartnav/spec_model.h"

namespace chartnav {

enum class NodeKind {
  kRoot,
  kFacetBranch,
  kChannelBranch,
  kIntervalNode,
  kCategoryNode,
  kGridCellNode,
  kAnnotationBranch,
  kAnnotationRegion,
  kDataSplitNode,
  kDatumLeaf,
  kTableCell,
  kListItem,
};
inline constexpr int kNodeKindCount = 12;

enum class Granularity { kExistence, kOverview, kDetail };
enum class StructureForm { kList, kTable, kTree };

enum class Variant {
  kFlatList,
  kDataTable,
  kEncodingTree,
  kAnnotationTree,
  kBinaryTree,
  kMultiBranch,
  kFacetedTree,
  kNestedCategoryTree,
};

std::string_view ToString(NodeKind kind);
std::string_view ToString(Granularity granularity);
std::string_view ToString(StructureForm form);
std::string_view ToString(Variant variant);
std::optional<NodeKind> NodeKindFromString(std::string_view text);
std::optional<Variant> VariantFromString(std::string_view text);

// granularity is a function of kind: root is existence, datum leaves and
// table cells are detail, everything else overview.
Granularity GranularityFor(NodeKind kind);

using NodeIndex = std::size_t;

struct SpatialCoord {
  int col = 0;
  int row = 0;

  bool operator==(const SpatialCoord&) const = default;
};

struct AccessNode {
  std::string id;  // deterministic path, e.g. "root/x/interval-3/datum-17"
  NodeKind kind = NodeKind::kRoot;
  // Channel branches: x, y, legend, grid, group or drill-N. Empty otherwise.
  std::string branch;
  std::string label;
  Selection selection;
  std::optional<NodeIndex> parent;
  std::vector<NodeIndex> children;
  std::optional<SpatialCoord> spatial_coord;
  Granularity granularity = Granularity::kExistence;
  int depth = 0;

  // Field this node groups, splits or (for leaves and cells) reads.
  std::string field;
  // Interval, binary-split span or annotated range (x range for grid cells).
  std::optional<Interval> interval;
  std::optional<Interval> y_interval;  // grid cells only
  std::optional<std::string> category;
  std::optional<RowId> row;
  std::optional<std::size_t> annotation;  // index into ChartSpec::annotations
};

struct StructureConfig {
  Variant variant = Variant::kEncodingTree;
  // Top-level branch names among x, y, legend, grid, annotations. Empty means
  // the default x, y, legend, grid, annotations.
  std::vector<std::string> branch_order;
  int binary_leaf_size = 1;
  // Field sequences for nested categories (one sequence of two fields) and
  // for dual drill paths (two or more sequences).
  std::vector<std::vector<std::string>> drill_orders;
};

using LandmarkIndex = std::map<NodeKind, std::vector<NodeIndex>>;

// Compiled, immutable accessible form of a chart. Nodes are stored in
// depth-first pre-order; node 0 is the root.
class AccessStructure {
 public:
  StructureForm form() const { return form_; }
  Variant variant() const { return config_.variant; }
  const StructureConfig& config() const { return config_; }
  const ChartSpec& spec() const { return *spec_; }
  const DataTable& table() const { return *table_; }
  std::shared_ptr<const ChartSpec> spec_ptr() const { return spec_; }
  std::shared_ptr<const DataTable> table_ptr() const { return table_; }

  static constexpr NodeIndex kRoot = 0;
  const AccessNode& root() const { return nodes_[kRoot]; }
  const AccessNode& node(NodeIndex index) const { return nodes_[index]; }
  const std::vector<AccessNode>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }

  std::optional<NodeIndex> Find(std::string_view id) const;

  const LandmarkIndex& landmark_index() const { return landmarks_; }
  // Top-level branches by name, in child order.
  const std::vector<std::pair<std::string, NodeIndex>>& branch_registry() const {
    return branches_;
  }

  // Position of `index` among its parent's children (0 for the root).
  std::size_t IndexInParent(NodeIndex index) const;
  // The root's child that contains `index`; nullopt for the root.
  std::optional<NodeIndex> TopLevelBranch(NodeIndex index) const;
  // Nearest ancestor-or-self of kind channel branch or annotation branch.
  std::optional<NodeIndex> OwningBranch(NodeIndex index) const;
  // Root-to-node chain, inclusive.
  std::vector<NodeIndex> PathFromRoot(NodeIndex index) const;
  bool IsAncestor(NodeIndex ancestor, NodeIndex node) const;

  // Whether a grid branch was built (x and y both numeric).
  bool has_grid() const { return has_grid_; }

  // Position of a row along a positional channel: the value for numeric
  // encodings, the category index for categorical ones. nullopt when the
  // channel is not encoded or the value is null.
  std::optional<double> AxisPosition(Channel channel, RowId row) const;

 private:
  friend class StructureBuilder;

  StructureForm form_ = StructureForm::kTree;
  StructureConfig config_;
  std::shared_ptr<const ChartSpec> spec_;
  std::shared_ptr<const DataTable> table_;
  std::vector<AccessNode> nodes_;
  std::map<std::string, NodeIndex, std::less<>> by_id_;
  LandmarkIndex landmarks_;
  std::vector<std::pair<std::string, NodeIndex>> branches_;
  bool has_grid_ = false;
  std::map<Channel, std::vector<std::optional<double>>> axis_positions_;
};

// Throws ConfigError when the config cannot be satisfied by the spec (or the
// spec has validation errors against the data).
std::shared_ptr<const AccessStructure> BuildStructure(
    std::shared_ptr<const ChartSpec> spec, std::shared_ptr<const DataTable> data,
    const StructureConfig& config);

// Ordered nodes per requested kind, in document (depth-first) order,
// restricted to the subtree under `scope`.
LandmarkIndex AttachLandmarks(const AccessStructure& structure,
                              std::span<const NodeKind> levels,
                              NodeIndex scope = AccessStructure::kRoot);

enum class DumpFormat { kJson, kText };
std::optional<DumpFormat> DumpFormatFromString(std::string_view text);

// Byte-stable serialization of every node.
std::string DumpStructure(const AccessStructure& structure,
                          DumpFormat format = DumpFormat::kJson);

}  // namespace chartnav

#endif  // CHARTNAV_STRUCTURE_H_
