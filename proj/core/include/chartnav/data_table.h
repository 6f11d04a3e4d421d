#ifndef CHARTNAV_DATA_TABLE_H_
#define CHARTNAV_DATA_TABLE_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "chartnav/spec_model.h"

namespace chartnav {

using RowId = std::uint32_t;

// A cell: null, a number (temporal values are epoch days), or text.
using Value = std::variant<std::monostate, double, std::string>;

inline bool IsNull(const Value& v) {
  return std::holds_alternative<std::monostate>(v);
}

struct NumericDomain {
  double min = 0;
  double max = 0;
};

struct FieldMeta {
  std::string name;
  FieldType inferred_type = FieldType::kNominal;
  // Set for quantitative/temporal fields with at least one value.
  std::optional<NumericDomain> numeric_domain;
  // Category keys in domain order, for nominal/ordinal fields.
  std::vector<std::string> categories;
  std::size_t null_count = 0;

  bool has_domain() const {
    return IsNumeric(inferred_type) ? numeric_domain.has_value()
                                    : !categories.empty();
  }
};

enum class DataFormat { kDelimited, kStructured };

struct LoadOptions {
  // When false, a table with zero data rows throws EmptyDataError.
  bool allow_empty = false;
  // Forces a field's type instead of inferring it.
  std::map<std::string, FieldType> type_hints;
};

// Typed, column-major table. Immutable once loaded.
class DataTable {
 public:
  DataTable() = default;

  std::size_t row_count() const { return row_count_; }
  std::size_t field_count() const { return fields_.size(); }
  const std::vector<FieldMeta>& fields() const { return fields_; }

  // Index of `name`, or nullopt.
  std::optional<std::size_t> FieldIndex(std::string_view name) const;
  const FieldMeta* Field(std::string_view name) const;

  const Value& value(RowId row, std::size_t field) const {
    return columns_[field][row];
  }
  const std::vector<Value>& column(std::size_t field) const {
    return columns_[field];
  }

  // Number for quantitative/temporal cells, nullopt otherwise.
  std::optional<double> Number(RowId row, std::size_t field) const;

  // Builds a table from raw tokens (one vector per row, in header order).
  // Empty tokens and the literals NA/null/NaN are null.
  static DataTable FromTokens(std::vector<std::string> header,
                              const std::vector<std::vector<std::optional<std::string>>>& rows,
                              const LoadOptions& options = {});

 private:
  std::vector<FieldMeta> fields_;
  std::vector<std::vector<Value>> columns_;
  std::size_t row_count_ = 0;
};

// Throws ParseError (with line/column) or EmptyDataError.
DataTable LoadData(std::string_view text, DataFormat format,
                   const LoadOptions& options = {});

// Key used for a value when the field is treated categorically. Numbers use
// their shortest round-trip spelling.
std::string CategoryKey(const Value& value);

// Parses YYYY-MM-DD (optionally followed by a THH:MM[:SS] time, which is
// dropped) into days since 1970-01-01.
std::optional<std::int64_t> ParseIsoDate(std::string_view text);
std::string FormatIsoDate(std::int64_t epoch_day);

// Categorical view of any field: categories in first-appearance order, or in
// `order` followed by any unlisted categories in first-appearance order.
FieldMeta CategoricalView(const DataTable& table, std::string_view field,
                          FieldType type = FieldType::kNominal,
                          std::span<const std::string> order = {});

struct Interval {
  double lo = 0;
  double hi = 0;
  bool closed_low = true;
  bool closed_high = false;
  std::string label;

  bool Contains(double v) const {
    return (closed_low ? v >= lo : v > lo) && (closed_high ? v <= hi : v < hi);
  }
};

// Nice-tick intervals over a numeric field's domain: the step is the smallest
// {1,2,5}x10^k at or above range/target_count and the domain is widened
// outward to step multiples. Intervals are [lo, hi) except the last, which is
// closed. A single-valued domain gives one [v, v] interval. Throws
// TypeMismatchError for categorical fields.
std::vector<Interval> ComputeIntervals(const FieldMeta& field, int target_count);

// Same, directly over a domain.
std::vector<Interval> ComputeIntervals(NumericDomain domain, int target_count,
                                       bool temporal = false);

// Index of the interval holding `v`, or nullopt if `v` is outside them all.
std::optional<std::size_t> FindInterval(std::span<const Interval> intervals,
                                        double v);

struct IntervalConstraint {
  double lo = 0;
  double hi = 0;
  bool closed_low = true;
  bool closed_high = false;
};

struct CategoryConstraint {
  std::string category;
};

struct NotNullConstraint {};

// Pins a single row; `field` is ignored.
struct RowConstraint {
  RowId row = 0;
};

struct Constraint {
  std::string field;
  std::variant<IntervalConstraint, CategoryConstraint, NotNullConstraint, RowConstraint> test;
};

// Conjunction of per-field constraints. A null value never satisfies a
// constraint.
struct Predicate {
  std::vector<Constraint> constraints;

  bool Matches(const DataTable& table, RowId row) const;
  std::string Describe() const;
};

struct Selection {
  Predicate predicate;
  std::vector<RowId> member_row_ids;  // sorted ascending

  std::size_t size() const { return member_row_ids.size(); }
};

Selection SelectAll(const DataTable& table);
Selection Select(const DataTable& table, Predicate predicate);
// Narrows `base` by one more constraint.
Selection Refine(const DataTable& table, const Selection& base, Constraint constraint);
// Rows of `base` whose values for every field in `fields` are non-null.
Selection NonNull(const DataTable& table, const Selection& base,
                  std::span<const std::string> fields);

// One group per category of `field` (domain order), each restricted to
// `base` (all rows if null). Throws TypeMismatchError for numeric fields.
std::vector<std::pair<std::string, Selection>> GroupByCategory(
    const DataTable& table, const FieldMeta& field, const Selection* base = nullptr);

// Matrix indexed [x][y] of selections. Each row with non-null x and y lands in
// exactly one cell.
std::vector<std::vector<Selection>> GridCells(
    const DataTable& table, std::string_view x_field,
    std::span<const Interval> x_intervals, std::string_view y_field,
    std::span<const Interval> y_intervals, const Selection* base = nullptr);

struct FieldStats {
  std::size_t count = 0;  // non-null members
  std::optional<double> min;
  std::optional<double> max;
  std::optional<double> mean;
  std::optional<double> sum;
};

struct Summary {
  std::size_t count = 0;
  std::map<std::string, FieldStats> numeric;
  // category -> member count, in domain order
  std::map<std::string, std::vector<std::pair<std::string, std::size_t>>> categories;
};

Summary Summarize(const Selection& selection, const DataTable& table,
                  std::span<const std::string> fields_in_scope);

}  // namespace chartnav

#endif  // CHARTNAV_DATA_TABLE_H_
