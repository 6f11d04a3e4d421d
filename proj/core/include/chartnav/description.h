#ifndef CHARTNAV_DESCRIPTION_H_
#define CHARTNAV_DESCRIPTION_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "chartnav/structure.h"

namespace chartnav {

enum class TokenKind {
  kLevelLabel,
  kBranchContext,
  kPositionIndex,
  kRangeOrCategory,
  kDatumValues,
  kSummaryStats,
  kEncodingInfo,
  kBoundaryNotice,
  kClampNotice,
  kSizeInfo,
};

std::string_view ToString(TokenKind kind);
std::optional<TokenKind> TokenKindFromString(std::string_view text);

struct DescriptionToken {
  TokenKind kind = TokenKind::kRangeOrCategory;
  std::string text;
  // Joined to the previous token with a space instead of a separator.
  bool attach = false;

  bool operator==(const DescriptionToken&) const = default;
};

enum class Composition { kContextFirst, kDataFirst };
enum class Verbosity { kHigh, kMedium, kLow };

std::string_view ToString(Composition composition);
std::string_view ToString(Verbosity verbosity);
std::optional<Composition> CompositionFromString(std::string_view text);
std::optional<Verbosity> VerbosityFromString(std::string_view text);

struct DescriptionConfig {
  Composition composition = Composition::kContextFirst;
  Verbosity verbosity = Verbosity::kHigh;
  bool suppress_repeated_level = true;
  int significant_digits = 4;
};

struct Utterance {
  std::vector<DescriptionToken> tokens;
  std::string text;
};

// Token templates, joining rules and the verbosity matrix, loaded from the
// JSON templates format. Default() is the bundled default file.
class Templates {
 public:
  // Keys missing from `json_text` keep their default values. Throws
  // SyntaxError/SchemaError.
  static Templates Parse(std::string_view json_text);
  static const Templates& Default();

  // Fills {placeholders} in the template named `key`. Throws Error for an
  // unknown key.
  std::string Render(std::string_view key,
                     const std::map<std::string, std::string>& values) const;
  bool IsAttached(std::string_view key) const { return attached_.contains(std::string(key)); }
  std::string LevelLabel(NodeKind kind) const;
  std::string BranchName(std::string_view branch) const;
  const std::vector<std::string>& palette() const { return palette_; }
  // Author-supplied extra text for a node id, if any.
  std::optional<std::string> BranchNote(std::string_view node_id) const;

  const std::string& separator() const { return separator_; }
  const std::string& sentence_break() const { return sentence_break_; }
  const std::string& terminator() const { return terminator_; }
  bool EndsSentence(TokenKind kind) const { return sentence_kinds_.contains(kind); }
  bool IsContext(TokenKind kind) const { return context_kinds_.contains(kind); }
  bool IsNotice(TokenKind kind) const { return notice_kinds_.contains(kind); }

  // Kinds removed at a verbosity level, and kinds reduced to their innermost
  // (last) occurrence.
  const std::set<TokenKind>& Dropped(Verbosity level) const;
  const std::set<TokenKind>& KeepInnermost(Verbosity level) const;

 private:
  // Applies a templates document over the current values.
  void Overlay(std::string_view json_text);

  std::map<std::string, std::string, std::less<>> templates_;
  std::set<std::string> attached_;
  std::map<std::string, std::string, std::less<>> level_labels_;
  std::map<std::string, std::string, std::less<>> branch_names_;
  std::map<std::string, std::string, std::less<>> branch_notes_;
  std::vector<std::string> palette_;
  std::string separator_ = ", ";
  std::string sentence_break_ = ". ";
  std::string terminator_ = ".";
  std::set<TokenKind> sentence_kinds_;
  std::set<TokenKind> context_kinds_;
  std::set<TokenKind> notice_kinds_;
  std::map<Verbosity, std::set<TokenKind>> dropped_;
  std::map<Verbosity, std::set<TokenKind>> keep_innermost_;
};

enum class Transition { kMoved, kBoundary };

// What the describer needs to know about how the cursor got here.
struct DescribeContext {
  NodeKind last_announced_level = NodeKind::kRoot;
  bool level_changed = true;
  Transition transition = Transition::kMoved;
  // Template key of the boundary notice (e.g. "boundary.end").
  std::string boundary_key;
  std::map<std::string, std::string> boundary_values;
  bool clamped = false;
};

Utterance Describe(const AccessStructure& structure, NodeIndex node,
                   const DescribeContext& context, const DescriptionConfig& config,
                   const Templates& templates = Templates::Default());

// All tokens for a node at high verbosity in template order, before
// composition and filtering.
std::vector<DescriptionToken> NodeTokens(const AccessStructure& structure,
                                         NodeIndex node, bool include_level_label,
                                         const DescriptionConfig& config,
                                         const Templates& templates);

std::vector<DescriptionToken> VerbosityFilter(
    std::vector<DescriptionToken> tokens, Verbosity level,
    const Templates& templates = Templates::Default());

// Stable reorder: notices, then context then data (contextFirst) or data then
// context (dataFirst).
std::vector<DescriptionToken> Compose(std::vector<DescriptionToken> tokens,
                                      Composition composition,
                                      const Templates& templates = Templates::Default());

std::string JoinTokens(const std::vector<DescriptionToken>& tokens,
                       const Templates& templates = Templates::Default());

// Overview of the chart's construction; doubles as alt text.
Utterance DescribeStructureSummary(const AccessStructure& structure,
                                   const DescriptionConfig& config = {},
                                   const Templates& templates = Templates::Default());

// Utterance made only of notices (used for invalid commands).
Utterance NoticeUtterance(TokenKind kind, std::string_view key,
                          const std::map<std::string, std::string>& values,
                          const Templates& templates = Templates::Default());

// `significant_digits` significant digits, trailing zeros trimmed, no
// exponent below 1e15.
std::string FormatNumber(double value, int significant_digits = 4);

}  // namespace chartnav

#endif  // CHARTNAV_DESCRIPTION_H_
