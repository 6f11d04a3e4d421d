#ifndef CHARTNAV_TERMINAL_NAVIGATOR_H_
#define CHARTNAV_TERMINAL_NAVIGATOR_H_

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "chartnav/description.h"
#include "chartnav/navigation.h"

namespace chartnav {

enum class Key {
  kArrowUp,
  kArrowDown,
  kArrowLeft,
  kArrowRight,
  kShiftArrowLeft,
  kShiftArrowRight,
  kHome,
  kEnd,
  kEscape,
  kTab,
  kEnter,
  kBackspace,
  kChar,
};

struct KeyEvent {
  Key key = Key::kChar;
  char ch = 0;  // for kChar

  bool operator==(const KeyEvent&) const = default;
};

// Decodes terminal input (ANSI/xterm escape sequences) into key events. An
// ESC that is not followed by '[' or 'O' in the same chunk is Escape.
std::vector<KeyEvent> DecodeKeys(std::string_view bytes);

// The keybinding contract. Tab (landmark menu), '?' and 'q' are handled by
// the navigator itself and map to nullopt here.
std::optional<NavCommand> CommandForKey(const KeyEvent& event);

std::string KeybindingHelp();

// Reads chunks from `next_chunk` (nullopt = end of input) until 'q' or end of
// input, printing one utterance line and one status line per command.
// Returns the process exit code.
int RunNavigator(SessionState& state, const std::function<std::optional<std::string>()>& next_chunk,
                 std::ostream& out, const DescriptionConfig& config = {},
                 const Templates& templates = Templates::Default());

// "root > X-axis > Horsepower 40 to 60" style path of labels.
std::string StatusLine(const AccessStructure& structure, NodeIndex cursor);

}  // namespace chartnav

#endif  // CHARTNAV_TERMINAL_NAVIGATOR_H_
