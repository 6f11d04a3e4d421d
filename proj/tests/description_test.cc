#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "chartnav/description.h"
#include "chartnav/errors.h"
#include "test_support.h"

namespace {

using namespace chartnav;
using chartnav_test::BuildEntry;
using chartnav_test::Entry;

DescribeContext Unchanged(NodeKind level) {
  DescribeContext c;
  c.last_announced_level = level;
  c.level_changed = false;
  return c;
}

DescriptionConfig Config(Verbosity v, Composition c = Composition::kContextFirst) {
  DescriptionConfig config;
  config.verbosity = v;
  config.composition = c;
  return config;
}

NodeIndex ThirdO(const AccessStructure& s) {
  return s.node(*s.Find("root/legend/category-O")).children[2];
}

TEST(Describe, Fig2aThirdPointMediumContextFirst) {
  auto s = BuildEntry(Entry("fig2a"));
  Utterance u = Describe(*s, ThirdO(*s), Unchanged(NodeKind::kDatumLeaf), Config(Verbosity::kMedium));
  EXPECT_EQ(u.text, "Category: O, Point 3 of 15, x = 5, y = 12.");
}

TEST(Describe, Fig2aThirdPointDataFirst) {
  auto s = BuildEntry(Entry("fig2a"));
  Utterance u = Describe(*s, ThirdO(*s), Unchanged(NodeKind::kDatumLeaf),
                         Config(Verbosity::kMedium, Composition::kDataFirst));
  EXPECT_EQ(u.text, "x = 5, y = 12, Category: O, Point 3 of 15.");
}

TEST(Describe, Fig2aLegendCategory) {
  auto s = BuildEntry(Entry("fig2a"));
  DescribeContext entering;
  entering.last_announced_level = NodeKind::kChannelBranch;
  Utterance u = Describe(*s, *s->Find("root/legend/category-O"), entering, Config(Verbosity::kHigh));
  EXPECT_EQ(u.text, "Legend. Category O has color encoding green, 15 points.");
}

TEST(Describe, LevelLabelLeadsWhenTheLevelChanges) {
  auto s = BuildEntry(Entry("fig2a"));
  DescribeContext entering;
  entering.last_announced_level = NodeKind::kCategoryNode;
  Utterance u = Describe(*s, ThirdO(*s), entering, Config(Verbosity::kMedium));
  EXPECT_EQ(u.text, "Data point. Category: O, Point 3 of 15, x = 5, y = 12.");
}

TEST(Describe, RootAndSummary) {
  auto s = BuildEntry(Entry("fig2a"));
  EXPECT_EQ(DescribeStructureSummary(*s).text,
            "O and X scatterplot, a point chart, 3 encodings, X-axis x (quantitative) from 1 to 29, "
            "Y-axis y (quantitative) from 2 to 33, Legend category (nominal) with 2 categories, "
            "grid of 6 by 7 cells, 25 points.");
  auto barley = BuildEntry(Entry("barley"));
  EXPECT_NE(DescribeStructureSummary(*barley).text.find("faceted by site into 6 views"),
            std::string::npos);
}

TEST(Describe, EmptyDataSaysZeroPoints) {
  auto s = chartnav_test::BuildFromText(chartnav_test::ReadFile(Entry("fig2a").spec_path),
                                        "x,y,category\n");
  std::string text = DescribeStructureSummary(*s).text;
  EXPECT_NE(text.find("0 points"), std::string::npos) << text;
}

TEST(Describe, BoundaryNoticeComesFirst) {
  auto s = BuildEntry(Entry("fig2a"));
  DescribeContext c = Unchanged(NodeKind::kDatumLeaf);
  c.transition = Transition::kBoundary;
  c.boundary_key = "boundary.end";
  for (auto composition : {Composition::kContextFirst, Composition::kDataFirst}) {
    Utterance u = Describe(*s, ThirdO(*s), c, Config(Verbosity::kLow, composition));
    ASSERT_FALSE(u.tokens.empty());
    EXPECT_EQ(u.tokens[0].kind, TokenKind::kBoundaryNotice);
    EXPECT_EQ(u.text.rfind("End of region. ", 0), 0u) << u.text;
  }
}

TEST(Describe, LowVerbosityKeepsOnlyTheEssentials) {
  auto s = BuildEntry(Entry("fig2a"));
  Utterance u = Describe(*s, ThirdO(*s), DescribeContext{}, Config(Verbosity::kLow));
  EXPECT_EQ(u.text, "x = 5, y = 12.");
}

bool IsSubsequence(const std::vector<DescriptionToken>& small,
                   const std::vector<DescriptionToken>& big) {
  std::size_t j = 0;
  for (const auto& t : big) {
    if (j < small.size() && small[j] == t) ++j;
  }
  return j == small.size();
}

std::vector<NodeIndex> RandomNodes(const AccessStructure& s, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, s.size() - 1);
  std::vector<NodeIndex> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(pick(rng));
  return out;
}

TEST(Verbosity, LatticeOverRandomNodes) {
  std::uint64_t seed = 1;
  for (const auto& entry : chartnav_test::LoadManifest()) {
    auto s = BuildEntry(entry);
    for (NodeIndex n : RandomNodes(*s, 100, seed++)) {
      for (bool changed : {true, false}) {
        DescribeContext c;
        c.level_changed = changed;
        auto high = Describe(*s, n, c, Config(Verbosity::kHigh)).tokens;
        auto medium = Describe(*s, n, c, Config(Verbosity::kMedium)).tokens;
        auto low = Describe(*s, n, c, Config(Verbosity::kLow)).tokens;
        EXPECT_TRUE(IsSubsequence(medium, high)) << s->node(n).id;
        EXPECT_TRUE(IsSubsequence(low, medium)) << s->node(n).id;
        EXPECT_FALSE(low.empty()) << s->node(n).id;
      }
    }
  }
}

TEST(Composition, SameTokensEitherOrder) {
  std::uint64_t seed = 50;
  for (const auto& entry : chartnav_test::LoadManifest()) {
    auto s = BuildEntry(entry);
    for (NodeIndex n : RandomNodes(*s, 50, seed++)) {
      for (auto v : {Verbosity::kHigh, Verbosity::kMedium, Verbosity::kLow}) {
        auto a = Describe(*s, n, {}, Config(v, Composition::kContextFirst)).tokens;
        auto b = Describe(*s, n, {}, Config(v, Composition::kDataFirst)).tokens;
        auto key = [](const DescriptionToken& t) { return std::make_pair(static_cast<int>(t.kind), t.text); };
        std::vector<std::pair<int, std::string>> ka, kb;
        for (const auto& t : a) ka.push_back(key(t));
        for (const auto& t : b) kb.push_back(key(t));
        std::sort(ka.begin(), ka.end());
        std::sort(kb.begin(), kb.end());
        EXPECT_EQ(ka, kb) << s->node(n).id;
        // Context tokens precede data tokens under contextFirst.
        const Templates& t = Templates::Default();
        bool seen_data = false;
        for (const auto& token : a) {
          if (t.IsNotice(token.kind) || token.kind == TokenKind::kLevelLabel) continue;
          if (t.IsContext(token.kind)) {
            if (!token.attach) {
              EXPECT_FALSE(seen_data) << s->node(n).id;
            }
          } else {
            seen_data = true;
          }
        }
      }
    }
  }
}

TEST(Suppression, LevelLabelOnlyOnChange) {
  std::uint64_t seed = 99;
  for (const auto& entry : chartnav_test::LoadManifest()) {
    auto s = BuildEntry(entry);
    for (NodeIndex n : RandomNodes(*s, 30, seed++)) {
      auto has_label = [&](bool changed, bool suppress) {
        DescribeContext c;
        c.level_changed = changed;
        DescriptionConfig config = Config(Verbosity::kHigh);
        config.suppress_repeated_level = suppress;
        for (const auto& t : Describe(*s, n, c, config).tokens) {
          if (t.kind == TokenKind::kLevelLabel) return true;
        }
        return false;
      };
      EXPECT_TRUE(has_label(true, true)) << s->node(n).id;
      EXPECT_FALSE(has_label(false, true)) << s->node(n).id;
      EXPECT_TRUE(has_label(false, false)) << s->node(n).id;
    }
  }
}

TEST(Suppression, NavigationTracksTheLastLevel) {
  auto s = BuildEntry(Entry("fig2a"));
  SessionState state = CreateSession(s);
  DescriptionConfig config = Config(Verbosity::kMedium);
  ApplyCommand(state, NavCommand::Jump("root/legend/category-O"), config);
  NavResult first = ApplyCommand(state, {Verb::kDown, std::nullopt}, config);
  EXPECT_EQ(first.utterance.tokens[0].kind, TokenKind::kLevelLabel);
  ApplyCommand(state, {Verb::kRight, std::nullopt}, config);
  NavResult third = ApplyCommand(state, {Verb::kRight, std::nullopt}, config);
  EXPECT_EQ(third.utterance.text, "Category: O, Point 3 of 15, x = 5, y = 12.");
}

TEST(Templates, OverlayReplacesKeys) {
  Templates t = Templates::Parse(R"({"templates":{"category":"Group {category}"},
                                     "join":{"separator":"; "}})");
  auto s = BuildEntry(Entry("fig2a"));
  Utterance u = Describe(*s, *s->Find("root/legend/category-O"), Unchanged(NodeKind::kCategoryNode),
                         Config(Verbosity::kMedium), t);
  EXPECT_EQ(u.text.rfind("Group O", 0), 0u) << u.text;
  EXPECT_EQ(Templates::Default().separator(), ", ");
  EXPECT_EQ(t.Render("interval", {{"field", "x"}, {"lo", "1"}, {"hi", "2"}}), "x 1 to 2");
}

TEST(Templates, BadDocumentsThrow) {
  EXPECT_THROW(Templates::Parse("{"), SyntaxError);
  EXPECT_THROW(Templates::Parse(R"({"verbosity":{"loud":{}}})"), SchemaError);
  EXPECT_THROW(Templates::Parse(R"({"verbosity":{"low":{"drop":["shouting"]}}})"), SchemaError);
  EXPECT_THROW(Templates::Parse(R"({"templates":{"category":7}})"), SchemaError);
  EXPECT_THROW(Templates::Default().Render("no.such.key", {}), Error);
}

TEST(Templates, BranchNotesAppearOnTheirNode) {
  Templates t = Templates::Parse(R"({"branchNotes":{"root/x":"drawn along the bottom"}})");
  auto s = BuildEntry(Entry("fig2a"));
  Utterance u = Describe(*s, *s->Find("root/x"), {}, Config(Verbosity::kHigh), t);
  EXPECT_NE(u.text.find("drawn along the bottom"), std::string::npos) << u.text;
}

TEST(FormatNumber, FourSignificantDigits) {
  EXPECT_EQ(FormatNumber(5), "5");
  EXPECT_EQ(FormatNumber(3.14159), "3.142");
  EXPECT_EQ(FormatNumber(1234567), "1235000");
  EXPECT_EQ(FormatNumber(0.000123456), "0.0001235");
  EXPECT_EQ(FormatNumber(-2.5), "-2.5");
  EXPECT_EQ(FormatNumber(0), "0");
  EXPECT_EQ(FormatNumber(-0.00001, 1), "-0.00001");
  EXPECT_EQ(FormatNumber(99.99, 2), "100");
}

TEST(Describe, TemporalValuesReadAsDates) {
  auto s = BuildEntry(Entry("weather"));
  NodeIndex leaf = chartnav_test::NodesOfKind(*s, NodeKind::kDatumLeaf).front();
  Utterance u = Describe(*s, leaf, {}, Config(Verbosity::kLow));
  EXPECT_NE(u.text.find("date = 2015-"), std::string::npos) << u.text;
}

}  // namespace
