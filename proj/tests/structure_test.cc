#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <set>

#include "chartnav/data_table.h"
#include "chartnav/errors.h"
#include "chartnav/spec_model.h"
#include "chartnav/structure.h"
#include "json.hpp"
#include "oracles.h"
#include "test_support.h"

namespace {

using namespace chartnav;
using chartnav_test::BuildEntry;
using chartnav_test::BuildFromText;
using chartnav_test::Entry;
using chartnav_test::NodesOfKind;

std::vector<std::string> ChildBranches(const AccessStructure& s, NodeIndex n) {
  std::vector<std::string> out;
  for (NodeIndex c : s.node(n).children) out.push_back(s.node(c).branch);
  return out;
}

TEST(EncodingTree, Fig2aBranches) {
  auto s = BuildEntry(Entry("fig2a"));
  EXPECT_EQ(s->form(), StructureForm::kTree);
  EXPECT_EQ(ChildBranches(*s, AccessStructure::kRoot),
            (std::vector<std::string>{"x", "y", "legend", "grid"}));
  for (NodeIndex c : s->root().children) EXPECT_EQ(s->node(c).kind, NodeKind::kChannelBranch);

  NodeIndex legend = *s->Find("root/legend");
  ASSERT_EQ(s->node(legend).children.size(), 2u);
  EXPECT_EQ(s->node(s->node(legend).children[0]).id, "root/legend/category-O");
  EXPECT_EQ(s->node(s->node(legend).children[0]).kind, NodeKind::kCategoryNode);
  EXPECT_EQ(s->node(s->node(legend).children[0]).children.size(), 15u);

  NodeIndex x = *s->Find("root/x");
  NodeIndex y = *s->Find("root/y");
  NodeIndex grid = *s->Find("root/grid");
  EXPECT_EQ(s->node(grid).children.size(),
            s->node(x).children.size() * s->node(y).children.size());
}

TEST(EncodingTree, GridCellsMatchGridSelections) {
  auto s = BuildEntry(Entry("penguins"));
  const DataTable& t = s->table();
  std::vector<Interval> xs, ys;
  for (NodeIndex c : s->node(*s->Find("root/x")).children) xs.push_back(*s->node(c).interval);
  for (NodeIndex c : s->node(*s->Find("root/y")).children) ys.push_back(*s->node(c).interval);
  auto cells = GridCells(t, "flipper_length_mm", xs, "body_mass_g", ys);
  for (NodeIndex c : s->node(*s->Find("root/grid")).children) {
    const AccessNode& cell = s->node(c);
    ASSERT_EQ(cell.kind, NodeKind::kGridCellNode);
    auto coord = *cell.spatial_coord;
    EXPECT_EQ(cell.selection.member_row_ids,
              cells[static_cast<std::size_t>(coord.col)][static_cast<std::size_t>(coord.row)].member_row_ids);
    EXPECT_EQ(cell.children.size(), cell.selection.size());
  }
}

TEST(EncodingTree, CustomBranchOrder) {
  StructureConfig config;
  config.branch_order = {"grid", "legend"};
  auto s = BuildFromText(chartnav_test::ReadFile(Entry("fig2a").spec_path),
                         chartnav_test::ReadFile(Entry("fig2a").data_path), config);
  EXPECT_EQ(ChildBranches(*s, AccessStructure::kRoot),
            (std::vector<std::string>{"grid", "legend", "x", "y"}));
}

TEST(EncodingTree, LeavesFollowAxisOrder) {
  auto s = BuildEntry(Entry("cars"));
  const DataTable& t = s->table();
  std::size_t hp = *t.FieldIndex("Horsepower");
  std::size_t mpg = *t.FieldIndex("Miles_per_Gallon");
  auto check = [&](const std::string& branch, std::size_t field) {
    for (NodeIndex group : s->node(*s->Find(branch)).children) {
      const auto& leaves = s->node(group).children;
      for (std::size_t i = 0; i + 1 < leaves.size(); ++i) {
        RowId a = *s->node(leaves[i]).row;
        RowId b = *s->node(leaves[i + 1]).row;
        double va = *t.Number(a, field);
        double vb = *t.Number(b, field);
        EXPECT_TRUE(va < vb || (va == vb && a < b)) << branch;
      }
    }
  };
  check("root/x", hp);
  check("root/y", mpg);
  check("root/legend", hp);  // legend leaves follow x
  check("root/grid", hp);
}

TEST(EncodingTree, NodeInvariantsHoldAcrossGallery) {
  for (const auto& entry : chartnav_test::LoadManifest()) {
    auto s = BuildEntry(entry);
    std::set<std::string> ids;
    for (NodeIndex i = 0; i < s->size(); ++i) {
      const AccessNode& n = s->node(i);
      EXPECT_TRUE(ids.insert(n.id).second) << entry.name << " duplicate id " << n.id;
      EXPECT_EQ(s->Find(n.id), i);
      EXPECT_EQ(n.granularity, GranularityFor(n.kind));
      Granularity want = n.kind == NodeKind::kRoot ? Granularity::kExistence
                         : (n.kind == NodeKind::kDatumLeaf || n.kind == NodeKind::kTableCell)
                             ? Granularity::kDetail
                             : Granularity::kOverview;
      EXPECT_EQ(n.granularity, want) << n.id;
      if (i == 0) {
        EXPECT_FALSE(n.parent);
      } else {
        ASSERT_TRUE(n.parent);
        const auto& siblings = s->node(*n.parent).children;
        EXPECT_EQ(std::count(siblings.begin(), siblings.end(), i), 1) << n.id;
        EXPECT_EQ(n.depth, s->node(*n.parent).depth + 1);
        EXPECT_LT(*n.parent, i) << "pre-order";
        // Children select subsets of their parent.
        const auto& parent_rows = s->node(*n.parent).selection.member_row_ids;
        EXPECT_TRUE(std::includes(parent_rows.begin(), parent_rows.end(),
                                  n.selection.member_row_ids.begin(),
                                  n.selection.member_row_ids.end()))
            << n.id;
      }
      const auto& indexed = s->landmark_index().at(n.kind);
      EXPECT_TRUE(std::binary_search(indexed.begin(), indexed.end(), i)) << n.id;
    }
  }
}

TEST(LeafCompleteness, GalleryHasNoViolations) {
  for (const auto& entry : chartnav_test::LoadManifest()) {
    auto s = BuildEntry(entry);
    auto violations = chartnav_test::LeafCoverageViolations(*s);
    EXPECT_TRUE(violations.empty()) << entry.name << ": " << violations.size() << " violations, first "
                                    << (violations.empty() ? "" : violations[0]);
  }
}

TEST(LeafCompleteness, RandomTablesWithNulls) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto s = BuildFromText(chartnav_test::RandomScatterSpec(), chartnav_test::RandomCsv(seed, 200));
    EXPECT_TRUE(chartnav_test::LeafCoverageViolations(*s).empty()) << seed;
  }
}

TEST(Landmarks, LevelsAndScope) {
  auto fig = BuildEntry(Entry("fig2a"));
  std::array<NodeKind, 1> branches = {NodeKind::kChannelBranch};
  EXPECT_EQ(AttachLandmarks(*fig, branches).at(NodeKind::kChannelBranch).size(), 4u);

  std::array<NodeKind, 1> leaves = {NodeKind::kDatumLeaf};
  NodeIndex o = *fig->Find("root/legend/category-O");
  auto in_o = AttachLandmarks(*fig, leaves, o).at(NodeKind::kDatumLeaf);
  EXPECT_EQ(in_o, fig->node(o).children);

  auto barley = BuildEntry(Entry("barley"));
  std::array<NodeKind, 1> facets = {NodeKind::kFacetBranch};
  EXPECT_EQ(AttachLandmarks(*barley, facets).at(NodeKind::kFacetBranch).size(), 6u);
}

// (kind, child count) for every non-leaf in pre-order.
std::vector<std::pair<NodeKind, std::size_t>> Shape(const AccessStructure& s, NodeIndex n) {
  std::vector<std::pair<NodeKind, std::size_t>> out;
  std::function<void(NodeIndex)> walk = [&](NodeIndex i) {
    const AccessNode& node = s.node(i);
    if (node.kind == NodeKind::kDatumLeaf) return;
    bool interval_level = node.kind == NodeKind::kIntervalNode ||
                          node.kind == NodeKind::kCategoryNode ||
                          node.kind == NodeKind::kGridCellNode;
    out.emplace_back(node.kind, interval_level ? 0 : node.children.size());
    for (NodeIndex c : node.children) walk(c);
  };
  walk(n);
  return out;
}

TEST(FacetedTree, BarleyFacetsAreIsomorphic) {
  auto s = BuildEntry(Entry("barley"));
  const auto& facets = s->root().children;
  ASSERT_EQ(facets.size(), 6u);
  auto first = Shape(*s, facets[0]);
  for (NodeIndex f : facets) {
    EXPECT_EQ(s->node(f).kind, NodeKind::kFacetBranch);
    EXPECT_EQ(Shape(*s, f), first) << s->node(f).id;
  }
  EXPECT_EQ(s->node(facets[0]).id, "root/facet-University_Farm");
}

// Expected split tree built straight from the sorted distinct values.
struct SplitShape {
  double lo, hi;
  std::vector<SplitShape> halves;
  std::vector<double> leaf_values;
};

SplitShape ExpectedSplit(const std::vector<double>& values, std::size_t leaf_size) {
  SplitShape node{values.front(), values.back(), {}, {}};
  if (values.size() <= leaf_size) {
    node.leaf_values = values;
    return node;
  }
  std::size_t half = values.size() / 2;
  std::vector<double> left(values.begin(), values.begin() + static_cast<long>(half));
  std::vector<double> right(values.begin() + static_cast<long>(half), values.end());
  for (auto* part : {&left, &right}) {
    if (part->size() <= leaf_size) {
      for (double v : *part) node.leaf_values.push_back(v);
    } else {
      node.halves.push_back(ExpectedSplit(*part, leaf_size));
    }
  }
  return node;
}

void ExpectSplitShape(const AccessStructure& s, const SplitShape& e, NodeIndex n) {
  const AccessNode& node = s.node(n);
  ASSERT_TRUE(node.interval) << node.id;
  EXPECT_EQ(node.interval->lo, e.lo) << node.id;
  EXPECT_EQ(node.interval->hi, e.hi) << node.id;
  std::size_t splits = 0;
  std::set<double> leaf_values;
  for (NodeIndex c : node.children) {
    if (s.node(c).kind == NodeKind::kDataSplitNode) {
      ASSERT_LT(splits, e.halves.size()) << node.id;
      ExpectSplitShape(s, e.halves[splits++], c);
    } else {
      leaf_values.insert(*s.table().Number(*s.node(c).row, *s.table().FieldIndex(s.node(c).field)));
    }
  }
  EXPECT_EQ(splits, e.halves.size()) << node.id;
  EXPECT_EQ(std::vector<double>(leaf_values.begin(), leaf_values.end()), e.leaf_values) << node.id;
}

TEST(BinaryTree, SixteenPointSeries) {
  auto s = BuildEntry(Entry("series16"));
  const DataTable& t = s->table();
  std::size_t year = *t.FieldIndex("year");

  int depth = 0;
  std::vector<double> in_order;
  for (NodeIndex i = 0; i < s->size(); ++i) {
    const AccessNode& n = s->node(i);
    depth = std::max(depth, n.depth);
    if (n.kind == NodeKind::kDatumLeaf) in_order.push_back(*t.Number(*n.row, year));
  }
  EXPECT_EQ(depth, 4);
  ASSERT_EQ(in_order.size(), 16u);
  EXPECT_TRUE(std::is_sorted(in_order.begin(), in_order.end()));

  for (NodeIndex i = 0; i < s->size(); ++i) {
    const AccessNode& n = s->node(i);
    if (n.children.empty()) continue;
    std::vector<RowId> rows;
    for (NodeIndex c : n.children) {
      const auto& r = s->node(c).selection.member_row_ids;
      rows.insert(rows.end(), r.begin(), r.end());
    }
    std::sort(rows.begin(), rows.end());
    EXPECT_EQ(rows, n.selection.member_row_ids) << n.id;
    if (n.children.size() == 2 && s->node(n.children[0]).kind == NodeKind::kDataSplitNode) {
      EXPECT_LT(s->node(n.children[0]).interval->hi, s->node(n.children[1]).interval->lo);
    }
  }

  ExpectSplitShape(*s, ExpectedSplit(in_order, 1), AccessStructure::kRoot);
}

TEST(BinaryTree, LeafSizeAndDuplicates) {
  const char* spec = R"({"mark":"line","encoding":{"x":{"field":"x","type":"quantitative"}}})";
  StructureConfig config;
  config.variant = Variant::kBinaryTree;
  config.binary_leaf_size = 3;
  auto s = BuildFromText(spec, "x\n1\n1\n2\n3\n4\n5\n6\n7\n", config);
  EXPECT_TRUE(chartnav_test::LeafCoverageViolations(*s).empty());
  ExpectSplitShape(*s, ExpectedSplit({1, 2, 3, 4, 5, 6, 7}, 3), AccessStructure::kRoot);
  EXPECT_EQ(NodesOfKind(*s, NodeKind::kDatumLeaf).size(), 8u);
}

TEST(AnnotationTree, RegionsAndOverlap) {
  const char* spec = R"({"mark":"line","encoding":{"x":{"field":"t","type":"quantitative"},
      "y":{"field":"v","type":"quantitative"}},
      "annotations":[{"label":"early","channel":"x","range":[1,3]},
                     {"label":"late","channel":"x","range":[3,5],"note":"peak"}]})";
  StructureConfig config;
  config.variant = Variant::kAnnotationTree;
  auto s = BuildFromText(spec, "t,v\n1,5\n2,6\n3,7\n4,8\n5,9\n6,1\n", config);
  // Regions hang directly off the root.
  ASSERT_EQ(s->root().children.size(), 2u);
  NodeIndex early = s->root().children[0];
  NodeIndex late = s->root().children[1];
  EXPECT_EQ(s->node(early).kind, NodeKind::kAnnotationRegion);
  EXPECT_EQ(s->node(early).selection.member_row_ids, (std::vector<RowId>{0, 1, 2}));
  EXPECT_EQ(s->node(late).selection.member_row_ids, (std::vector<RowId>{2, 3, 4}));
  EXPECT_EQ(s->node(early).children.size(), 3u);
  EXPECT_TRUE(chartnav_test::LeafCoverageViolations(*s).empty());
}

TEST(MultiBranch, EncodingPlusAnnotations) {
  auto s = BuildEntry(Entry("sp500_multi"));
  EXPECT_EQ(ChildBranches(*s, AccessStructure::kRoot),
            (std::vector<std::string>{"x", "y", "grid", "annotations"}));
  auto annotations = s->node(*s->Find("root/annotations"));
  EXPECT_EQ(annotations.kind, NodeKind::kAnnotationBranch);
  EXPECT_EQ(annotations.children.size(), 2u);
}

TEST(MultiBranch, DualDrillPaths) {
  auto s = BuildEntry(Entry("weather"));
  EXPECT_EQ(ChildBranches(*s, AccessStructure::kRoot),
            (std::vector<std::string>{"drill-0", "drill-1"}));
  const AccessNode& month_first = s->node(*s->Find("root/drill-0"));
  ASSERT_EQ(month_first.children.size(), 12u);
  EXPECT_EQ(s->node(month_first.children[0]).category, "Jan");
  const AccessNode& weather_first = s->node(*s->Find("root/drill-1"));
  EXPECT_EQ(s->node(weather_first.children[0]).field, "weather");
  // Both paths hold the same leaves.
  std::multiset<RowId> a, b;
  for (const AccessNode& n : s->nodes()) {
    if (n.kind != NodeKind::kDatumLeaf) continue;
    (n.id.starts_with("root/drill-0") ? a : b).insert(*n.row);
  }
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), 365u);
}

TEST(NestedCategoryTree, StatesThenCounties) {
  auto s = BuildEntry(Entry("counties"));
  EXPECT_EQ(ChildBranches(*s, AccessStructure::kRoot),
            (std::vector<std::string>{"group", "legend"}));
  const AccessNode& group = s->node(*s->Find("root/group"));
  ASSERT_EQ(group.children.size(), 5u);
  const AccessNode& maine = s->node(group.children[0]);
  EXPECT_EQ(maine.category, "Maine");
  EXPECT_EQ(maine.children.size(), 6u);
  for (NodeIndex county : maine.children) {
    EXPECT_EQ(s->node(county).kind, NodeKind::kCategoryNode);
    EXPECT_EQ(s->node(county).children.size(), 1u);
  }
}

TEST(BaselineForms, ListAndTable) {
  auto table = BuildEntry(Entry("cars_table"));
  EXPECT_EQ(table->form(), StructureForm::kTable);
  EXPECT_EQ(table->root().children.size(), 392u * 3u);
  StructureConfig config;
  config.variant = Variant::kFlatList;
  auto list = BuildFromText(chartnav_test::ReadFile(Entry("fig2a").spec_path),
                            chartnav_test::ReadFile(Entry("fig2a").data_path), config);
  EXPECT_EQ(list->form(), StructureForm::kList);
  EXPECT_EQ(list->root().children.size(), 3u + 25u);
  EXPECT_TRUE(chartnav_test::LeafCoverageViolations(*list).empty());
}

TEST(EmptyData, LevelsWithoutLeaves) {
  auto s = BuildFromText(chartnav_test::ReadFile(Entry("fig2a").spec_path), "x,y,category\n");
  EXPECT_EQ(ChildBranches(*s, AccessStructure::kRoot),
            (std::vector<std::string>{"x", "y", "legend", "grid"}));
  EXPECT_TRUE(NodesOfKind(*s, NodeKind::kDatumLeaf).empty());
  EXPECT_FALSE(s->node(*s->Find("root/x")).children.empty());
  EXPECT_FALSE(s->node(*s->Find("root/y")).children.empty());
  EXPECT_TRUE(chartnav_test::LeafCoverageViolations(*s).empty());
}

TEST(Config, InvalidCombinationsThrow) {
  const std::string fig_spec = chartnav_test::ReadFile(Entry("fig2a").spec_path);
  const std::string fig_data = chartnav_test::ReadFile(Entry("fig2a").data_path);
  auto build = [&](StructureConfig config, const std::string& spec = "") {
    return BuildFromText(spec.empty() ? fig_spec : spec, fig_data, config);
  };
  StructureConfig c;
  c.variant = Variant::kBinaryTree;
  EXPECT_THROW(build(c, R"({"mark":"point","encoding":{"x":{"field":"category","type":"nominal"}}})"),
               ConfigError);
  c = {};
  c.variant = Variant::kFacetedTree;
  EXPECT_THROW(build(c), ConfigError);
  c.variant = Variant::kAnnotationTree;
  EXPECT_THROW(build(c), ConfigError);
  c.variant = Variant::kNestedCategoryTree;
  EXPECT_THROW(build(c), ConfigError);
  c.drill_orders = {{"category", "nope"}};
  EXPECT_THROW(build(c), ConfigError);
  c = {};
  c.variant = Variant::kMultiBranch;
  EXPECT_THROW(build(c), ConfigError);
  c = {};
  c.branch_order = {"z"};
  EXPECT_THROW(build(c), ConfigError);
  c = {};
  c.variant = Variant::kBinaryTree;
  c.binary_leaf_size = 0;
  EXPECT_THROW(build(c), ConfigError);
}

TEST(Dump, DeterministicAndMatchesGolden) {
  for (const auto& entry : chartnav_test::LoadManifest()) {
    std::string first = DumpStructure(*BuildEntry(entry));
    std::string second = DumpStructure(*BuildEntry(entry));
    EXPECT_EQ(first, second) << entry.name;
    EXPECT_EQ(first, chartnav_test::ReadFile(entry.golden_path)) << entry.name;
  }
}

TEST(Dump, JsonShape) {
  auto s = BuildEntry(Entry("fig2a"));
  auto doc = nlohmann::json::parse(DumpStructure(*s));
  EXPECT_EQ(doc["variant"], "encodingTree");
  EXPECT_EQ(doc["form"], "tree");
  ASSERT_EQ(doc["nodes"].size(), s->size());
  const auto& root = doc["nodes"][0];
  EXPECT_TRUE(root["parentId"].is_null());
  EXPECT_EQ(root["childIds"].size(), 4u);
  EXPECT_EQ(root["rowIds"].size(), 25u);
  bool saw_cell = false;
  for (const auto& n : doc["nodes"]) {
    if (n["kind"] == "gridCellNode") {
      saw_cell = true;
      EXPECT_TRUE(n["spatialCoord"].contains("col"));
      EXPECT_TRUE(n["spatialCoord"].contains("row"));
    }
  }
  EXPECT_TRUE(saw_cell);
  std::string text = DumpStructure(*s, DumpFormat::kText);
  EXPECT_NE(text.find("root/legend/category-O [categoryNode]"), std::string::npos);
}

TEST(AxisPosition, AgreesWithBruteForce) {
  for (const char* name : {"fig2a", "barley", "weather", "counties"}) {
    auto s = BuildEntry(Entry(name));
    for (RowId r = 0; r < s->table().row_count(); ++r) {
      for (Channel c : {Channel::kX, Channel::kY}) {
        EXPECT_EQ(s->AxisPosition(c, r), chartnav_test::BrutePosition(*s, c, r)) << name << " " << r;
      }
    }
  }
}

}  // namespace
