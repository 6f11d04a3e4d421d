#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "chartnav/terminal_navigator.h"
#include "test_support.h"

namespace {

using namespace chartnav;
using chartnav_test::BuildEntry;
using chartnav_test::Entry;

std::vector<KeyEvent> Keys(std::initializer_list<Key> keys) {
  std::vector<KeyEvent> out;
  for (Key k : keys) out.push_back({k, 0});
  return out;
}

TEST(DecodeKeys, ArrowsAndModifiers) {
  EXPECT_EQ(DecodeKeys("\x1b[A\x1b[B\x1b[C\x1b[D"),
            Keys({Key::kArrowUp, Key::kArrowDown, Key::kArrowRight, Key::kArrowLeft}));
  EXPECT_EQ(DecodeKeys("\x1b[1;2D\x1b[1;2C"), Keys({Key::kShiftArrowLeft, Key::kShiftArrowRight}));
  EXPECT_EQ(DecodeKeys("\x1bOA\x1bOH\x1bOF"), Keys({Key::kArrowUp, Key::kHome, Key::kEnd}));
  EXPECT_EQ(DecodeKeys("\x1b[1~\x1b[4~\x1b[7~\x1b[8~"),
            Keys({Key::kHome, Key::kEnd, Key::kHome, Key::kEnd}));
}

TEST(DecodeKeys, PlainBytes) {
  EXPECT_EQ(DecodeKeys("\x1b"), Keys({Key::kEscape}));
  EXPECT_EQ(DecodeKeys("\t\r\n\x7f"), Keys({Key::kTab, Key::kEnter, Key::kEnter, Key::kBackspace}));
  EXPECT_EQ(DecodeKeys("wq"), (std::vector<KeyEvent>{{Key::kChar, 'w'}, {Key::kChar, 'q'}}));
  EXPECT_EQ(DecodeKeys("\x1b[3~x"), (std::vector<KeyEvent>{{Key::kChar, 'x'}}));  // Delete is ignored
  EXPECT_TRUE(DecodeKeys("\x1b[1;").empty());
}

TEST(CommandForKey, Bindings) {
  auto verb = [](KeyEvent e) { return CommandForKey(e)->verb; };
  EXPECT_EQ(verb({Key::kArrowUp, 0}), Verb::kUp);
  EXPECT_EQ(verb({Key::kShiftArrowRight, 0}), Verb::kLateralNext);
  EXPECT_EQ(verb({Key::kEscape, 0}), Verb::kToRoot);
  EXPECT_EQ(verb({Key::kChar, 'w'}), Verb::kSpatialUp);
  EXPECT_EQ(verb({Key::kChar, 'a'}), Verb::kSpatialLeft);
  EXPECT_EQ(verb({Key::kChar, 's'}), Verb::kSpatialDown);
  EXPECT_EQ(verb({Key::kChar, 'd'}), Verb::kSpatialRight);
  EXPECT_EQ(verb({Key::kChar, 'b'}), Verb::kSwitchBranch);
  EXPECT_FALSE(CommandForKey({Key::kTab, 0}));
  EXPECT_FALSE(CommandForKey({Key::kChar, 'q'}));
  EXPECT_FALSE(CommandForKey({Key::kChar, 'z'}));
}

std::string Replay(SessionState& state, std::vector<std::string> chunks) {
  std::size_t at = 0;
  std::ostringstream out;
  RunNavigator(state, [&]() -> std::optional<std::string> {
    if (at == chunks.size()) return std::nullopt;
    return chunks[at++];
  }, out);
  return out.str();
}

TEST(RunNavigator, ReplayMatchesDirectCalls) {
  auto s = BuildEntry(Entry("fig2a"));
  const std::string keys = "wasd";
  const std::string arrows[] = {"\x1b[A", "\x1b[B", "\x1b[C", "\x1b[D", "\x1b[1;2C", "\x1b[1;2D",
                                "\x1b[H", "\x1b[F", "b"};
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::size_t> pick(0, std::size(arrows) + keys.size() - 1);
  std::string input;
  for (int i = 0; i < 300; ++i) {
    std::size_t k = pick(rng);
    input += k < std::size(arrows) ? arrows[k] : std::string(1, keys[k - std::size(arrows)]);
  }

  SessionState replayed = CreateSession(s);
  std::string transcript = Replay(replayed, {input});

  SessionState direct = CreateSession(s);
  std::ostringstream expected;
  expected << DescribeStructureSummary(*s).text << "\n[" << StatusLine(*s, 0) << "]\n";
  for (const KeyEvent& e : DecodeKeys(input)) {
    auto command = CommandForKey(e);
    ASSERT_TRUE(command);
    NavResult r = ApplyCommand(direct, *command);
    expected << r.utterance.text << "\n[" << StatusLine(*s, direct.cursor) << "]";
    if (r.status != NavStatus::kMoved) expected << " (" << ToString(r.status) << ")";
    expected << "\n";
  }
  EXPECT_EQ(transcript, expected.str());
  EXPECT_EQ(replayed.cursor, direct.cursor);
  EXPECT_EQ(replayed.command_log.size(), 300u);
}

TEST(RunNavigator, SplitChunksDecodeTheSame) {
  auto s = BuildEntry(Entry("fig2a"));
  SessionState a = CreateSession(s);
  SessionState b = CreateSession(s);
  Replay(a, {"\x1b[B\x1b[B\x1b[C"});
  Replay(b, {"\x1b[B", "\x1b[B", "\x1b[C"});
  EXPECT_EQ(a.cursor, b.cursor);
  EXPECT_EQ(s->node(a.cursor).id, "root/x/interval-1");
}

TEST(RunNavigator, LandmarkMenu) {
  auto s = BuildEntry(Entry("fig2a"));
  SessionState state = CreateSession(s);
  std::string out = Replay(state, {"\t", "3\r"});
  EXPECT_NE(out.find("Landmarks:\n  1. "), std::string::npos) << out;
  // Menu order is document order: root/x, its 6 intervals, then root/y.
  EXPECT_EQ(s->node(state.cursor).id, "root/x/interval-1");

  out = Replay(state, {"\t99\r", "\t\x1b", "\t18\x7f\x7f" "8\r"});
  EXPECT_NE(out.find("No landmark 99."), std::string::npos);
  EXPECT_NE(out.find("Menu closed."), std::string::npos);
  EXPECT_EQ(s->node(state.cursor).id, "root/y");
}

TEST(RunNavigator, QuitStopsReading) {
  auto s = BuildEntry(Entry("fig2a"));
  SessionState state = CreateSession(s);
  std::string out = Replay(state, {"?\x1b[Bq\x1b[B"});
  EXPECT_NE(out.find("Shift+Left/Right"), std::string::npos);
  EXPECT_EQ(state.command_log.size(), 1u);
  EXPECT_EQ(s->node(state.cursor).id, "root/x");
}

TEST(StatusLine, JoinsLabels) {
  auto s = BuildEntry(Entry("fig2a"));
  EXPECT_EQ(StatusLine(*s, *s->Find("root/x/interval-1")), "O and X scatterplot > x (x) > x 5–10");
}

}  // namespace
