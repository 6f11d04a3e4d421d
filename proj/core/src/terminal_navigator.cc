#include "chartnav/terminal_navigator.h"

#include <array>

namespace chartnav {

namespace {

// Kinds listed in the Tab landmark menu.
constexpr std::array<NodeKind, 6> kMenuKinds = {
    NodeKind::kFacetBranch,    NodeKind::kChannelBranch,  NodeKind::kAnnotationBranch,
    NodeKind::kAnnotationRegion, NodeKind::kCategoryNode, NodeKind::kIntervalNode,
};

// Final byte of a CSI sequence, with its numeric parameters.
std::optional<Key> CsiKey(std::string_view params, char final) {
  const bool shifted = params.ends_with(";2");
  switch (final) {
    case 'A': return Key::kArrowUp;
    case 'B': return Key::kArrowDown;
    case 'C': return shifted ? Key::kShiftArrowRight : Key::kArrowRight;
    case 'D': return shifted ? Key::kShiftArrowLeft : Key::kArrowLeft;
    case 'H': return Key::kHome;
    case 'F': return Key::kEnd;
    case '~':
      if (params == "1" || params == "7") return Key::kHome;
      if (params == "4" || params == "8") return Key::kEnd;
      return std::nullopt;
    default: return std::nullopt;
  }
}

}  // namespace

std::vector<KeyEvent> DecodeKeys(std::string_view bytes) {
  std::vector<KeyEvent> out;
  std::size_t i = 0;
  while (i < bytes.size()) {
    char c = bytes[i];
    if (c == '\x1b') {
      if (i + 1 < bytes.size() && (bytes[i + 1] == '[' || bytes[i + 1] == 'O')) {
        std::size_t j = i + 2;
        while (j < bytes.size() && ((bytes[j] >= '0' && bytes[j] <= '9') || bytes[j] == ';')) ++j;
        if (j < bytes.size()) {
          auto key = CsiKey(bytes.substr(i + 2, j - i - 2), bytes[j]);
          if (key) out.push_back({*key, 0});
          i = j + 1;
          continue;
        }
        i = j;  // truncated sequence: drop it
        continue;
      }
      out.push_back({Key::kEscape, 0});
      ++i;
      continue;
    }
    if (c == '\t') out.push_back({Key::kTab, 0});
    else if (c == '\r' || c == '\n') out.push_back({Key::kEnter, 0});
    else if (c == '\x7f' || c == '\b') out.push_back({Key::kBackspace, 0});
    else out.push_back({Key::kChar, c});
    ++i;
  }
  return out;
}

std::optional<NavCommand> CommandForKey(const KeyEvent& event) {
  auto verb = [](Verb v) { return std::optional<NavCommand>(NavCommand{v, std::nullopt}); };
  switch (event.key) {
    case Key::kArrowUp: return verb(Verb::kUp);
    case Key::kArrowDown: return verb(Verb::kDown);
    case Key::kArrowLeft: return verb(Verb::kLeft);
    case Key::kArrowRight: return verb(Verb::kRight);
    case Key::kShiftArrowLeft: return verb(Verb::kLateralPrev);
    case Key::kShiftArrowRight: return verb(Verb::kLateralNext);
    case Key::kHome: return verb(Verb::kHome);
    case Key::kEnd: return verb(Verb::kEnd);
    case Key::kEscape: return verb(Verb::kToRoot);
    case Key::kChar:
      switch (event.ch) {
        case 'w': return verb(Verb::kSpatialUp);
        case 'a': return verb(Verb::kSpatialLeft);
        case 's': return verb(Verb::kSpatialDown);
        case 'd': return verb(Verb::kSpatialRight);
        case 'b': return verb(Verb::kSwitchBranch);
        default: return std::nullopt;
      }
    default:
      return std::nullopt;
  }
}

std::string KeybindingHelp() {
  return "Keys:\n"
         "  Up/Down          move up or down a level\n"
         "  Left/Right       previous or next sibling\n"
         "  Shift+Left/Right same place in the previous or next view\n"
         "  w a s d          move up, left, down or right in the chart\n"
         "  Home/End         first or last sibling\n"
         "  b                switch to the equivalent place in another branch\n"
         "  Escape           back to the top of the chart\n"
         "  Tab              landmark menu: type a number, then Enter\n"
         "  ?                this help\n"
         "  q                quit\n";
}

std::string StatusLine(const AccessStructure& structure, NodeIndex cursor) {
  std::string out;
  for (NodeIndex i : structure.PathFromRoot(cursor)) {
    if (!out.empty()) out += " > ";
    out += structure.node(i).label;
  }
  return out;
}

int RunNavigator(SessionState& state, const std::function<std::optional<std::string>()>& next_chunk,
                 std::ostream& out, const DescriptionConfig& config, const Templates& templates) {
  const AccessStructure& s = *state.structure;
  out << DescribeStructureSummary(s, config, templates).text << "\n";
  out << "[" << StatusLine(s, state.cursor) << "]\n";

  std::vector<NodeIndex> menu;
  bool in_menu = false;
  std::string digits;

  auto run = [&](const NavCommand& command) {
    NavResult result = ApplyCommand(state, command, config, templates);
    out << result.utterance.text << "\n";
    out << "[" << StatusLine(s, state.cursor) << "]";
    if (result.status != NavStatus::kMoved) out << " (" << ToString(result.status) << ")";
    out << "\n";
  };

  while (auto chunk = next_chunk()) {
    for (const KeyEvent& event : DecodeKeys(*chunk)) {
      if (in_menu) {
        if (event.key == Key::kChar && event.ch >= '0' && event.ch <= '9') {
          digits.push_back(event.ch);
        } else if (event.key == Key::kBackspace) {
          if (!digits.empty()) digits.pop_back();
        } else if (event.key == Key::kEnter) {
          in_menu = false;
          std::size_t choice = digits.empty() ? 0 : std::stoul(digits);
          if (choice >= 1 && choice <= menu.size()) {
            run(NavCommand::Jump(s.node(menu[choice - 1]).id));
          } else {
            out << "No landmark " << (digits.empty() ? "selected" : digits) << ".\n";
          }
        } else if (event.key == Key::kEscape || event.key == Key::kTab) {
          in_menu = false;
          out << "Menu closed.\n";
        }
        continue;
      }

      if (event.key == Key::kChar && event.ch == 'q') return 0;
      if (event.key == Key::kChar && event.ch == '?') {
        out << KeybindingHelp();
        continue;
      }
      if (event.key == Key::kTab) {
        menu.clear();
        digits.clear();
        auto index = AttachLandmarks(s, kMenuKinds);
        for (NodeIndex i = 0; i < s.size(); ++i) {
          auto it = index.find(s.node(i).kind);
          if (it != index.end()) menu.push_back(i);
        }
        if (menu.empty()) {
          out << "No landmarks.\n";
          continue;
        }
        out << "Landmarks:\n";
        for (std::size_t i = 0; i < menu.size(); ++i) {
          out << "  " << i + 1 << ". " << s.node(menu[i]).label << "\n";
        }
        in_menu = true;
        continue;
      }
      if (auto command = CommandForKey(event)) run(*command);
    }
    out.flush();
  }
  return 0;
}

}  // namespace chartnav
