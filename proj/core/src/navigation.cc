#include "chartnav/navigation.h"

#include <array>
#include <tuple>

namespace chartnav {

namespace {

constexpr std::array<std::string_view, kVerbCount> kVerbNames = {
    "up",           "down",        "left",       "right",        "lateralPrev",
    "lateralNext",  "spatialUp",   "spatialDown", "spatialLeft", "spatialRight",
    "home",         "end",         "jump",       "switchBranch", "toRoot",
};

// One past the last node of `index`'s subtree in pre-order.
NodeIndex SubtreeEnd(const AccessStructure& s, NodeIndex index) {
  const int depth = s.node(index).depth;
  NodeIndex end = index + 1;
  while (end < s.size() && s.node(end).depth > depth) ++end;
  return end;
}

std::size_t Overlap(const std::vector<RowId>& a, const std::vector<RowId>& b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

// Where a move ended up, before description.
struct Outcome {
  NavStatus status = NavStatus::kMoved;
  NavError error = NavError::kNone;
  NodeIndex target = AccessStructure::kRoot;
  std::string key;  // boundary or invalid template
  std::map<std::string, std::string> values;
  bool clamped = false;
};

Outcome Moved(NodeIndex target, bool clamped = false) {
  Outcome o;
  o.target = target;
  o.clamped = clamped;
  return o;
}

Outcome Boundary(std::string key, std::map<std::string, std::string> values = {}) {
  Outcome o;
  o.status = NavStatus::kBoundary;
  o.key = std::move(key);
  o.values = std::move(values);
  return o;
}

Outcome Invalid(NavError error, std::string key, std::map<std::string, std::string> values = {}) {
  Outcome o;
  o.status = NavStatus::kInvalid;
  o.error = error;
  o.key = std::move(key);
  o.values = std::move(values);
  return o;
}

std::string_view DirectionName(Direction d) {
  switch (d) {
    case Direction::kUp: return "up";
    case Direction::kDown: return "down";
    case Direction::kLeft: return "left";
    case Direction::kRight: return "right";
  }
  return {};
}

// Maps the cursor into another top-level branch: leaves by row id, other
// nodes by the largest selection overlap.
EquivalentNodeResult MapIntoBranch(const AccessStructure& s, NodeIndex cursor, NodeIndex branch) {
  const AccessNode& from = s.node(cursor);
  if (from.parent && *from.parent == AccessStructure::kRoot) return {branch, false};
  const NodeIndex end = SubtreeEnd(s, branch);

  if (from.kind == NodeKind::kDatumLeaf) {
    for (NodeIndex i = branch + 1; i < end; ++i) {
      const AccessNode& n = s.node(i);
      if (n.kind == NodeKind::kDatumLeaf && n.row == from.row) return {i, false};
    }
  }

  auto best_in = [&](bool same_depth) -> std::optional<NodeIndex> {
    std::optional<NodeIndex> best;
    std::tuple<std::size_t, std::size_t> best_key{0, 0};
    for (NodeIndex i = branch + 1; i < end; ++i) {
      const AccessNode& n = s.node(i);
      if (n.kind == NodeKind::kDatumLeaf) continue;
      if (same_depth && n.depth != from.depth) continue;
      std::size_t overlap = Overlap(from.selection.member_row_ids, n.selection.member_row_ids);
      if (overlap == 0) continue;
      // More overlap first, then the smaller selection; ties keep document order.
      if (!best || overlap > std::get<0>(best_key) ||
          (overlap == std::get<0>(best_key) && n.selection.size() < std::get<1>(best_key))) {
        best = i;
        best_key = {overlap, n.selection.size()};
      }
    }
    return best;
  };

  if (from.kind != NodeKind::kDatumLeaf) {
    if (auto hit = best_in(true)) return {*hit, false};
  }
  if (auto hit = best_in(false)) return {*hit, from.kind == NodeKind::kDatumLeaf};
  return {branch, true};
}

Outcome SwitchBranch(const AccessStructure& s, NodeIndex cursor) {
  if (cursor == AccessStructure::kRoot || s.form() != StructureForm::kTree) {
    return Invalid(NavError::kInvalidVerb, "invalid.branch");
  }
  const auto& registry = s.branch_registry();
  const NodeIndex top = *s.TopLevelBranch(cursor);
  auto find = [&](std::string_view name) -> std::optional<NodeIndex> {
    for (const auto& [n, i] : registry) {
      if (n == name) return i;
    }
    return std::nullopt;
  };

  std::optional<NodeIndex> target;
  if (s.node(top).kind == NodeKind::kAnnotationBranch) {
    std::optional<std::size_t> annotation;
    for (NodeIndex a : s.PathFromRoot(cursor)) {
      if (s.node(a).annotation) annotation = s.node(a).annotation;
    }
    if (!annotation && !s.spec().annotations.empty()) annotation = 0;
    if (annotation) {
      target = find(s.spec().annotations[*annotation].channel == Channel::kX ? "x" : "y");
    }
  } else if (auto annotations = find("annotations")) {
    target = annotations;
  }
  if (!target) {
    if (registry.size() < 2) return Boundary("boundary.branch");
    std::size_t at = s.IndexInParent(top);
    target = s.root().children[(at + 1) % s.root().children.size()];
  }
  if (*target == top) return Boundary("boundary.branch");
  auto mapped = MapIntoBranch(s, cursor, *target);
  return Moved(mapped.node, mapped.clamped);
}

Outcome Resolve(const SessionState& state, const NavCommand& command) {
  const AccessStructure& s = *state.structure;
  const NodeIndex cursor = state.cursor;
  const AccessNode& node = s.node(cursor);

  if ((command.verb == Verb::kJump) != command.target.has_value()) {
    return Invalid(NavError::kBadPayload, "invalid.payload");
  }

  auto sibling_index = [&] { return s.IndexInParent(cursor); };
  auto siblings = [&]() -> const std::vector<NodeIndex>& { return s.node(*node.parent).children; };

  switch (command.verb) {
    case Verb::kUp:
      if (!node.parent) return Boundary("boundary.top");
      return Moved(*node.parent);
    case Verb::kDown: {
      if (node.children.empty()) return Boundary("boundary.bottom");
      auto it = state.last_visited_child.find(cursor);
      return Moved(it != state.last_visited_child.end() ? it->second : node.children.front());
    }
    case Verb::kLeft:
      if (!node.parent || sibling_index() == 0) return Boundary("boundary.start");
      return Moved(siblings()[sibling_index() - 1]);
    case Verb::kRight:
      if (!node.parent || sibling_index() + 1 >= siblings().size()) return Boundary("boundary.end");
      return Moved(siblings()[sibling_index() + 1]);
    case Verb::kHome:
      if (!node.parent || sibling_index() == 0) return Boundary("boundary.start");
      return Moved(siblings().front());
    case Verb::kEnd:
      if (!node.parent || sibling_index() + 1 >= siblings().size()) return Boundary("boundary.end");
      return Moved(siblings().back());
    case Verb::kLateralPrev:
    case Verb::kLateralNext: {
      if (cursor == AccessStructure::kRoot) return Invalid(NavError::kInvalidVerb, "invalid.lateral");
      const NodeIndex top = *s.TopLevelBranch(cursor);
      const std::size_t at = s.IndexInParent(top);
      const auto& branches = s.root().children;
      if (command.verb == Verb::kLateralPrev && at == 0) return Boundary("boundary.lateral");
      if (command.verb == Verb::kLateralNext && at + 1 >= branches.size()) {
        return Boundary("boundary.lateral");
      }
      NodeIndex target = branches[command.verb == Verb::kLateralPrev ? at - 1 : at + 1];
      auto eq = EquivalentNode(s, cursor, target);
      return Moved(eq.node, eq.clamped);
    }
    case Verb::kSpatialUp:
    case Verb::kSpatialDown:
    case Verb::kSpatialLeft:
    case Verb::kSpatialRight: {
      Direction d = command.verb == Verb::kSpatialUp     ? Direction::kUp
                    : command.verb == Verb::kSpatialDown ? Direction::kDown
                    : command.verb == Verb::kSpatialLeft ? Direction::kLeft
                                                         : Direction::kRight;
      auto r = SpatialNeighbor(s, cursor, d);
      if (r.outcome == SpatialNeighborResult::Outcome::kNotSpatial) {
        return Invalid(NavError::kInvalidVerb, "invalid.spatial");
      }
      if (r.outcome == SpatialNeighborResult::Outcome::kBoundary) {
        return Boundary("boundary.spatial", {{"direction", std::string(DirectionName(d))}});
      }
      return Moved(r.node);
    }
    case Verb::kJump: {
      auto target = s.Find(*command.target);
      if (!target) {
        return Invalid(NavError::kUnknownTarget, "invalid.target", {{"target", *command.target}});
      }
      return Moved(*target);
    }
    case Verb::kSwitchBranch:
      return SwitchBranch(s, cursor);
    case Verb::kToRoot:
      if (cursor == AccessStructure::kRoot) return Boundary("boundary.top");
      return Moved(AccessStructure::kRoot);
  }
  return Invalid(NavError::kInvalidVerb, "invalid.verb");
}

}  // namespace

std::string_view ToString(Verb verb) { return kVerbNames[static_cast<int>(verb)]; }

std::optional<Verb> VerbFromString(std::string_view text) {
  for (int i = 0; i < kVerbCount; ++i) {
    if (kVerbNames[i] == text) return static_cast<Verb>(i);
  }
  return std::nullopt;
}

std::string_view ToString(NavStatus status) {
  switch (status) {
    case NavStatus::kMoved: return "moved";
    case NavStatus::kBoundary: return "boundary";
    case NavStatus::kInvalid: return "invalid";
  }
  return {};
}

std::string_view ToString(NavError error) {
  switch (error) {
    case NavError::kNone: return "";
    case NavError::kUnknownTarget: return "UNKNOWN_TARGET";
    case NavError::kInvalidVerb: return "INVALID_VERB";
    case NavError::kBadPayload: return "BAD_PAYLOAD";
  }
  return {};
}

SessionState CreateSession(std::shared_ptr<const AccessStructure> structure) {
  SessionState state;
  state.structure = std::move(structure);
  return state;
}

NavResult ApplyCommand(SessionState& state, const NavCommand& command,
                       const DescriptionConfig& config, const Templates& templates) {
  const AccessStructure& s = *state.structure;
  const NodeIndex old_cursor = state.cursor;
  Outcome outcome = Resolve(state, command);

  NavResult result;
  result.status = outcome.status;
  result.error = outcome.error;
  result.clamped = outcome.clamped;

  if (outcome.status == NavStatus::kInvalid) {
    result.cursor_index = old_cursor;
    result.utterance = NoticeUtterance(TokenKind::kBoundaryNotice, outcome.key, outcome.values, templates);
  } else {
    NodeIndex target = outcome.status == NavStatus::kMoved ? outcome.target : old_cursor;
    DescribeContext context;
    context.last_announced_level = state.last_announced_level;
    context.level_changed = s.node(target).kind != state.last_announced_level;
    context.clamped = outcome.clamped;
    if (outcome.status == NavStatus::kBoundary) {
      context.transition = Transition::kBoundary;
      context.boundary_key = outcome.key;
      context.boundary_values = outcome.values;
    }
    result.cursor_index = target;
    result.level_changed = s.node(target).kind != s.node(old_cursor).kind;
    result.utterance = Describe(s, target, context, config, templates);
    state.last_announced_level = s.node(target).kind;

    if (outcome.status == NavStatus::kMoved) {
      state.previous_node = old_cursor;
      state.cursor = target;
      std::vector<NodeIndex> path = s.PathFromRoot(target);
      for (std::size_t i = 1; i < path.size(); ++i) state.last_visited_child[path[i - 1]] = path[i];
    }
  }

  result.new_cursor = s.node(result.cursor_index).id;
  result.highlight_row_ids = s.node(result.cursor_index).selection.member_row_ids;
  state.command_log.emplace_back(command, result);
  return result;
}

EquivalentNodeResult EquivalentNode(const AccessStructure& structure, NodeIndex node,
                                    NodeIndex target_branch) {
  std::vector<NodeIndex> path = structure.PathFromRoot(node);
  EquivalentNodeResult result{target_branch, false};
  // path[0] is the root and path[1] the node's own top-level branch.
  for (std::size_t i = 2; i < path.size(); ++i) {
    std::size_t child = structure.IndexInParent(path[i]);
    const auto& children = structure.node(result.node).children;
    if (child >= children.size()) {
      result.clamped = true;
      break;
    }
    result.node = children[child];
  }
  return result;
}

SpatialNeighborResult SpatialNeighbor(const AccessStructure& structure, NodeIndex node,
                                      Direction direction) {
  using R = SpatialNeighborResult;
  const AccessNode& n = structure.node(node);
  if (!n.parent) return {R::Outcome::kNotSpatial, node};
  const auto& siblings = structure.node(*n.parent).children;

  if (n.spatial_coord &&
      (n.kind == NodeKind::kGridCellNode || n.kind == NodeKind::kTableCell)) {
    // Grid rows grow upward with y; table rows grow downward on screen.
    const int up = n.kind == NodeKind::kGridCellNode ? 1 : -1;
    SpatialCoord want = *n.spatial_coord;
    switch (direction) {
      case Direction::kUp: want.row += up; break;
      case Direction::kDown: want.row -= up; break;
      case Direction::kLeft: want.col -= 1; break;
      case Direction::kRight: want.col += 1; break;
    }
    for (NodeIndex sibling : siblings) {
      if (structure.node(sibling).spatial_coord == want) return {R::Outcome::kFound, sibling};
    }
    return {R::Outcome::kBoundary, node};
  }

  if (n.kind != NodeKind::kDatumLeaf) return {R::Outcome::kNotSpatial, node};
  const Channel channel =
      direction == Direction::kLeft || direction == Direction::kRight ? Channel::kX : Channel::kY;
  auto here = structure.AxisPosition(channel, *n.row);
  if (!here) return {R::Outcome::kNotSpatial, node};
  const bool forward = direction == Direction::kRight || direction == Direction::kUp;
  const std::pair<double, RowId> key{*here, *n.row};

  std::optional<std::pair<std::pair<double, RowId>, NodeIndex>> best;
  for (NodeIndex sibling : siblings) {
    const AccessNode& other = structure.node(sibling);
    if (other.kind != NodeKind::kDatumLeaf || sibling == node) continue;
    auto pos = structure.AxisPosition(channel, *other.row);
    if (!pos) continue;
    std::pair<double, RowId> k{*pos, *other.row};
    if (forward ? !(key < k) : !(k < key)) continue;
    if (!best || (forward ? k < best->first : best->first < k)) best.emplace(k, sibling);
  }
  if (!best) return {R::Outcome::kBoundary, node};
  return {R::Outcome::kFound, best->second};
}

}  // namespace chartnav
