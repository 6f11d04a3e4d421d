#ifndef CHARTNAV_NAVIGATION_H_
#define CHARTNAV_NAVIGATION_H_

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chartnav/description.h"
#include "chartnav/structure.h"

namespace chartnav {

enum class Verb {
  kUp,
  kDown,
  kLeft,
  kRight,
  kLateralPrev,
  kLateralNext,
  kSpatialUp,
  kSpatialDown,
  kSpatialLeft,
  kSpatialRight,
  kHome,
  kEnd,
  kJump,
  kSwitchBranch,
  kToRoot,
};
inline constexpr int kVerbCount = 15;

std::string_view ToString(Verb verb);
std::optional<Verb> VerbFromString(std::string_view text);

struct NavCommand {
  Verb verb = Verb::kDown;
  // Node id; required for kJump and rejected for every other verb.
  std::optional<std::string> target;

  static NavCommand Jump(std::string target) { return {Verb::kJump, std::move(target)}; }
};

enum class NavStatus { kMoved, kBoundary, kInvalid };

// Machine-readable reason attached to kInvalid results.
enum class NavError { kNone, kUnknownTarget, kInvalidVerb, kBadPayload };

std::string_view ToString(NavStatus status);
std::string_view ToString(NavError error);

struct NavResult {
  NavStatus status = NavStatus::kMoved;
  NavError error = NavError::kNone;
  std::string new_cursor;  // node id
  NodeIndex cursor_index = AccessStructure::kRoot;
  bool level_changed = false;
  bool clamped = false;
  Utterance utterance;
  std::vector<RowId> highlight_row_ids;
};

// Cursor over one structure. Single writer: apply commands sequentially.
struct SessionState {
  std::shared_ptr<const AccessStructure> structure;
  NodeIndex cursor = AccessStructure::kRoot;
  std::optional<NodeIndex> previous_node;
  NodeKind last_announced_level = NodeKind::kRoot;
  std::vector<std::pair<NavCommand, NavResult>> command_log;
  // parent -> child the cursor last visited under it
  std::map<NodeIndex, NodeIndex> last_visited_child;
};

SessionState CreateSession(std::shared_ptr<const AccessStructure> structure);

// Never throws for bad commands; those come back as kInvalid.
NavResult ApplyCommand(SessionState& state, const NavCommand& command,
                       const DescriptionConfig& config = {},
                       const Templates& templates = Templates::Default());

struct EquivalentNodeResult {
  NodeIndex node = AccessStructure::kRoot;
  bool clamped = false;
};

// Follows `node`'s child-index path below its top-level branch into
// `target_branch`, stopping at the deepest node that exists.
EquivalentNodeResult EquivalentNode(const AccessStructure& structure, NodeIndex node,
                                    NodeIndex target_branch);

enum class Direction { kUp, kDown, kLeft, kRight };

struct SpatialNeighborResult {
  enum class Outcome { kFound, kBoundary, kNotSpatial };
  Outcome outcome = Outcome::kNotSpatial;
  NodeIndex node = AccessStructure::kRoot;
};

// Grid cells and table cells move by coordinate in screen orientation; datum
// leaves move to the neighbouring sibling in (axis value, rowId) order.
SpatialNeighborResult SpatialNeighbor(const AccessStructure& structure, NodeIndex node,
                                      Direction direction);

}  // namespace chartnav

#endif  // CHARTNAV_NAVIGATION_H_
