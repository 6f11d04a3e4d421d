#ifndef CHARTNAV_TESTS_SUPPORT_ORACLES_H_
#define CHARTNAV_TESTS_SUPPORT_ORACLES_H_

// Brute-force reference computations. They read the raw table and node
// fields directly and never call the navigation code they check.

#include <optional>
#include <string>
#include <vector>

#include "chartnav/navigation.h"
#include "chartnav/structure.h"

namespace chartnav_test {

// One message per row that is missing from, duplicated in, or wrongly
// present in a top-level branch (facet children count as top level).
std::vector<std::string> LeafCoverageViolations(const chartnav::AccessStructure& s);

struct SpatialExpectation {
  enum class Outcome { kNotSpatial, kBoundary, kFound };
  Outcome outcome = Outcome::kNotSpatial;
  chartnav::NodeIndex node = 0;
};

// Nearest sibling along the axis (ties by row id) for datum leaves, the
// adjacent cell for grid and table cells.
SpatialExpectation BruteSpatial(const chartnav::AccessStructure& s, chartnav::NodeIndex node,
                                chartnav::Verb verb);

// Whether `verb` from the state's cursor should report a boundary. nullopt
// for verbs this oracle does not model (jump, switchBranch, invalid cases).
std::optional<bool> ExpectBoundary(const chartnav::SessionState& state, chartnav::Verb verb);

// The axis value the oracle uses for a row: the number for numeric
// encodings, else the index of the row's category in first-appearance order.
std::optional<double> BrutePosition(const chartnav::AccessStructure& s, chartnav::Channel channel,
                                    chartnav::RowId row);

}  // namespace chartnav_test

#endif  // CHARTNAV_TESTS_SUPPORT_ORACLES_H_
