#include "chartnav/data_table.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <unordered_map>

#include "chartnav/errors.h"
#include "json.hpp"
#include "json_util.h"

namespace chartnav {

namespace {

// Share of non-null tokens that must parse for a numeric/temporal type.
constexpr double kInferenceThreshold = 0.95;

bool IsNullToken(std::string_view token) {
  return token.empty() || token == "NA" || token == "N/A" || token == "null" ||
         token == "NULL" || token == "NaN" || token == "nan";
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::optional<double> ParseNumber(std::string_view token) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  if (token.empty()) return std::nullopt;
  double value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::string EnDash() { return "\xE2\x80\x93"; }

std::string FormatBoundary(double v, bool temporal) {
  if (temporal) return FormatIsoDate(static_cast<std::int64_t>(std::llround(v)));
  return CategoryKey(Value{v});
}

}  // namespace

std::optional<std::int64_t> ParseIsoDate(std::string_view text) {
  // YYYY-MM-DD[THH:MM[:SS[.fff]][Z]]
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto digits = [&](std::size_t from, std::size_t count) -> std::optional<int> {
    int v = 0;
    for (std::size_t i = from; i < from + count; ++i) {
      if (text[i] < '0' || text[i] > '9') return std::nullopt;
      v = v * 10 + (text[i] - '0');
    }
    return v;
  };
  auto y = digits(0, 4);
  auto m = digits(5, 2);
  auto d = digits(8, 2);
  if (!y || !m || !d) return std::nullopt;
  if (text.size() > 10) {
    std::string_view rest = text.substr(10);
    if (rest.front() != 'T' && rest.front() != ' ') return std::nullopt;
    if (rest.size() < 6 || rest[3] != ':') return std::nullopt;
    for (char c : rest.substr(1)) {
      if (!((c >= '0' && c <= '9') || c == ':' || c == '.' || c == 'Z' || c == '+' || c == '-')) {
        return std::nullopt;
      }
    }
  }
  using namespace std::chrono;
  year_month_day ymd{year{*y}, month{static_cast<unsigned>(*m)}, day{static_cast<unsigned>(*d)}};
  if (!ymd.ok()) return std::nullopt;
  return sys_days{ymd}.time_since_epoch().count();
}

std::string FormatIsoDate(std::int64_t epoch_day) {
  using namespace std::chrono;
  year_month_day ymd{sys_days{days{epoch_day}}};
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buffer;
}

std::string CategoryKey(const Value& value) {
  if (const auto* s = std::get_if<std::string>(&value)) return *s;
  if (const auto* d = std::get_if<double>(&value)) {
    double v = *d == 0 ? 0.0 : *d;  // no "-0"
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), v);
    return std::string(buffer, ptr);
  }
  return {};
}

std::optional<std::size_t> DataTable::FieldIndex(std::string_view name) const {
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    if (fields_[i].name == name) return i;
  }
  return std::nullopt;
}

const FieldMeta* DataTable::Field(std::string_view name) const {
  auto index = FieldIndex(name);
  return index ? &fields_[*index] : nullptr;
}

std::optional<double> DataTable::Number(RowId row, std::size_t field) const {
  if (const auto* d = std::get_if<double>(&columns_[field][row])) return *d;
  return std::nullopt;
}

DataTable DataTable::FromTokens(
    std::vector<std::string> header,
    const std::vector<std::vector<std::optional<std::string>>>& rows,
    const LoadOptions& options) {
  if (rows.empty() && !options.allow_empty) throw EmptyDataError();
  DataTable table;
  table.row_count_ = rows.size();
  for (std::size_t f = 0; f < header.size(); ++f) {
    FieldMeta meta;
    meta.name = header[f];

    std::size_t non_null = 0;
    std::size_t numeric = 0;
    std::size_t dates = 0;
    for (const auto& row : rows) {
      const auto& token = row[f];
      if (!token || IsNullToken(*token)) continue;
      ++non_null;
      if (ParseNumber(*token)) ++numeric;
      else if (ParseIsoDate(*token)) ++dates;
    }

    if (auto hint = options.type_hints.find(meta.name); hint != options.type_hints.end()) {
      meta.inferred_type = hint->second;
    } else if (non_null > 0 && numeric >= kInferenceThreshold * static_cast<double>(non_null)) {
      meta.inferred_type = FieldType::kQuantitative;
    } else if (non_null > 0 && dates >= kInferenceThreshold * static_cast<double>(non_null)) {
      meta.inferred_type = FieldType::kTemporal;
    } else {
      meta.inferred_type = FieldType::kNominal;
    }

    std::vector<Value> column;
    column.reserve(rows.size());
    std::unordered_map<std::string, bool> seen;
    for (const auto& row : rows) {
      const auto& token = row[f];
      Value v;
      if (token && !IsNullToken(*token)) {
        switch (meta.inferred_type) {
          case FieldType::kQuantitative:
            if (auto n = ParseNumber(*token)) v = *n;
            break;
          case FieldType::kTemporal:
            if (auto day = ParseIsoDate(*token)) v = static_cast<double>(*day);
            break;
          case FieldType::kNominal:
          case FieldType::kOrdinal:
            v = *token;
            break;
        }
      }
      if (IsNull(v)) {
        ++meta.null_count;
      } else if (const auto* d = std::get_if<double>(&v)) {
        if (!meta.numeric_domain) {
          meta.numeric_domain = NumericDomain{*d, *d};
        } else {
          meta.numeric_domain->min = std::min(meta.numeric_domain->min, *d);
          meta.numeric_domain->max = std::max(meta.numeric_domain->max, *d);
        }
      } else {
        const auto& s = std::get<std::string>(v);
        if (seen.emplace(s, true).second) meta.categories.push_back(s);
      }
      column.push_back(std::move(v));
    }
    table.fields_.push_back(std::move(meta));
    table.columns_.push_back(std::move(column));
  }
  return table;
}

namespace {

DataTable LoadDelimited(std::string_view text, const LoadOptions& options) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  std::vector<std::vector<std::optional<std::string>>> records;
  std::vector<std::size_t> record_lines;
  std::vector<std::optional<std::string>> current;
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t record_line = 1;
  std::size_t i = 0;
  bool at_field_start = true;

  auto end_record = [&]() {
    // Blank lines are skipped.
    if (!(current.size() == 1 && current[0] && current[0]->empty())) {
      records.push_back(std::move(current));
      record_lines.push_back(record_line);
    }
    current.clear();
  };

  while (i < text.size()) {
    if (at_field_start && text[i] == '"') {
      std::size_t open_line = line;
      std::size_t open_column = column;
      std::string value;
      ++i;
      ++column;
      bool closed = false;
      while (i < text.size()) {
        char c = text[i];
        if (c == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            value.push_back('"');
            i += 2;
            column += 2;
            continue;
          }
          ++i;
          ++column;
          closed = true;
          break;
        }
        if (c == '\n') {
          ++line;
          column = 1;
        } else {
          ++column;
        }
        value.push_back(c);
        ++i;
      }
      if (!closed) throw ParseError("unterminated quoted field", open_line, open_column);
      current.emplace_back(std::move(value));
      at_field_start = false;
      if (i < text.size() && text[i] != ',' && text[i] != '\n' &&
          !(text[i] == '\r' && i + 1 < text.size() && text[i + 1] == '\n')) {
        throw ParseError("unexpected character after closing quote", line, column);
      }
      continue;
    }

    std::size_t start = i;
    while (i < text.size() && text[i] != ',' && text[i] != '\n' &&
           !(text[i] == '\r' && i + 1 < text.size() && text[i + 1] == '\n')) {
      if (text[i] == '"') throw ParseError("quote inside an unquoted field", line, column);
      ++i;
      ++column;
    }
    if (at_field_start || start != i) {
      current.emplace_back(std::string(Trim(text.substr(start, i - start))));
    }
    at_field_start = false;
    if (i >= text.size()) break;
    if (text[i] == ',') {
      ++i;
      ++column;
      at_field_start = true;
      if (i >= text.size()) current.emplace_back(std::string());
      continue;
    }
    // Line end.
    i += text[i] == '\r' ? 2 : 1;
    end_record();
    ++line;
    column = 1;
    record_line = line;
    at_field_start = true;
  }
  if (!current.empty()) end_record();

  if (records.empty()) throw ParseError("missing header row", 1, 1);
  std::vector<std::string> header;
  for (std::size_t f = 0; f < records[0].size(); ++f) {
    std::string name = records[0][f].value_or("");
    if (name.empty()) throw ParseError("empty column name", record_lines[0], f + 1);
    if (std::find(header.begin(), header.end(), name) != header.end()) {
      throw ParseError("duplicate column name \"" + name + "\"", record_lines[0], f + 1);
    }
    header.push_back(std::move(name));
  }
  std::vector<std::vector<std::optional<std::string>>> rows(
      std::make_move_iterator(records.begin() + 1), std::make_move_iterator(records.end()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " fields, found " +
                           std::to_string(rows[r].size()),
                       record_lines[r + 1], 1);
    }
  }
  return DataTable::FromTokens(std::move(header), rows, options);
}

DataTable LoadStructured(std::string_view text, const LoadOptions& options) {
  nlohmann::ordered_json root;  // keeps fields in the order they first appear
  try {
    root = nlohmann::ordered_json::parse(text.begin(), text.end());
  } catch (const nlohmann::ordered_json::parse_error& e) {
    auto [line, column] = internal::LineColumn(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError("malformed JSON", line, column);
  }
  if (!root.is_array()) throw ParseError("expected an array of records", 1, 1);

  std::vector<std::string> header;
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t r = 0; r < root.size(); ++r) {
    if (!root[r].is_object()) {
      throw ParseError("record " + std::to_string(r) + " is not an object", 1, 1);
    }
    for (const auto& item : root[r].items()) {
      if (index.emplace(item.key(), header.size()).second) header.push_back(item.key());
    }
  }

  std::vector<std::vector<std::optional<std::string>>> rows;
  rows.reserve(root.size());
  for (std::size_t r = 0; r < root.size(); ++r) {
    std::vector<std::optional<std::string>> row(header.size());
    for (const auto& item : root[r].items()) {
      const auto& v = item.value();
      std::optional<std::string> token;
      if (v.is_null()) {
        token = std::nullopt;
      } else if (v.is_string()) {
        token = v.get<std::string>();
      } else if (v.is_number()) {
        token = CategoryKey(Value{v.get<double>()});
      } else if (v.is_boolean()) {
        token = v.get<bool>() ? "true" : "false";
      } else {
        throw ParseError("record " + std::to_string(r) + " field \"" + item.key() +
                             "\" is not a flat value",
                         1, 1);
      }
      row[index[item.key()]] = std::move(token);
    }
    rows.push_back(std::move(row));
  }
  return DataTable::FromTokens(std::move(header), rows, options);
}

}  // namespace

DataTable LoadData(std::string_view text, DataFormat format, const LoadOptions& options) {
  return format == DataFormat::kDelimited ? LoadDelimited(text, options)
                                          : LoadStructured(text, options);
}

FieldMeta CategoricalView(const DataTable& table, std::string_view field, FieldType type,
                          std::span<const std::string> order) {
  FieldMeta view;
  view.name = std::string(field);
  view.inferred_type = IsNumeric(type) ? FieldType::kNominal : type;
  auto index = table.FieldIndex(field);
  if (!index) return view;
  view.null_count = table.fields()[*index].null_count;

  std::vector<std::string> seen_order;
  std::unordered_map<std::string, bool> seen;
  for (const Value& v : table.column(*index)) {
    if (IsNull(v)) continue;
    std::string key = CategoryKey(v);
    if (seen.emplace(key, true).second) seen_order.push_back(std::move(key));
  }
  for (const auto& category : order) {
    if (seen.contains(category) &&
        std::find(view.categories.begin(), view.categories.end(), category) ==
            view.categories.end()) {
      view.categories.push_back(category);
    }
  }
  for (auto& category : seen_order) {
    if (std::find(view.categories.begin(), view.categories.end(), category) ==
        view.categories.end()) {
      view.categories.push_back(std::move(category));
    }
  }
  return view;
}

std::vector<Interval> ComputeIntervals(NumericDomain domain, int target_count, bool temporal) {
  if (target_count < 1) throw Error("target interval count must be at least 1");
  if (!(domain.min <= domain.max)) throw Error("interval domain has min > max");

  if (domain.min == domain.max) {
    return {Interval{domain.min, domain.max, true, true, FormatBoundary(domain.min, temporal)}};
  }

  // Step = m * 10^k with m in {1, 2, 5}; `scale` keeps boundaries exact for
  // negative k by dividing instead of multiplying by a fraction.
  const double raw = (domain.max - domain.min) / target_count;
  int exponent = static_cast<int>(std::floor(std::log10(raw)));
  int mantissa = 0;
  for (int attempt = 0; attempt < 3 && mantissa == 0; ++attempt) {
    for (int m : {1, 2, 5, 10}) {
      double candidate = m * std::pow(10.0, exponent);
      if (candidate >= raw * (1 - 1e-12)) {
        mantissa = m;
        break;
      }
    }
    if (mantissa == 0) ++exponent;
  }
  if (mantissa == 10) {
    mantissa = 1;
    ++exponent;
  }
  if (temporal && exponent < 0) {
    mantissa = 1;
    exponent = 0;
  }
  auto boundary = [&](long long k) {
    if (exponent >= 0) return static_cast<double>(k) * mantissa * std::pow(10.0, exponent);
    return static_cast<double>(k) * mantissa / std::pow(10.0, -exponent);
  };
  const double step = boundary(1);

  auto first = static_cast<long long>(std::floor(domain.min / step + 1e-9));
  while (boundary(first) > domain.min) --first;
  while (boundary(first + 1) <= domain.min) ++first;
  auto last = static_cast<long long>(std::ceil(domain.max / step - 1e-9));
  while (boundary(last) < domain.max) ++last;
  while (last - 1 > first && boundary(last - 1) >= domain.max) --last;

  std::vector<Interval> intervals;
  for (long long k = first; k < last; ++k) {
    Interval interval;
    interval.lo = boundary(k);
    interval.hi = boundary(k + 1);
    interval.closed_low = true;
    interval.closed_high = (k + 1 == last);
    interval.label =
        FormatBoundary(interval.lo, temporal) + EnDash() + FormatBoundary(interval.hi, temporal);
    intervals.push_back(std::move(interval));
  }
  return intervals;
}

std::vector<Interval> ComputeIntervals(const FieldMeta& field, int target_count) {
  if (!IsNumeric(field.inferred_type)) {
    throw TypeMismatchError("field \"" + field.name + "\" is " +
                            std::string(ToString(field.inferred_type)) +
                            "; intervals need a quantitative or temporal field");
  }
  if (!field.numeric_domain) throw Error("field \"" + field.name + "\" has no values");
  return ComputeIntervals(*field.numeric_domain, target_count,
                          field.inferred_type == FieldType::kTemporal);
}

std::optional<std::size_t> FindInterval(std::span<const Interval> intervals, double v) {
  if (intervals.empty()) return std::nullopt;
  auto it = std::upper_bound(intervals.begin(), intervals.end(), v,
                             [](double value, const Interval& i) { return value < i.lo; });
  if (it == intervals.begin()) return std::nullopt;
  std::size_t index = static_cast<std::size_t>(it - intervals.begin()) - 1;
  if (!intervals[index].Contains(v)) return std::nullopt;
  return index;
}

bool Predicate::Matches(const DataTable& table, RowId row) const {
  for (const Constraint& c : constraints) {
    if (const auto* rc = std::get_if<RowConstraint>(&c.test)) {
      if (row != rc->row) return false;
      continue;
    }
    auto field = table.FieldIndex(c.field);
    if (!field) return false;
    const Value& v = table.value(row, *field);
    if (IsNull(v)) return false;
    if (const auto* ic = std::get_if<IntervalConstraint>(&c.test)) {
      const auto* d = std::get_if<double>(&v);
      if (!d) return false;
      bool low_ok = ic->closed_low ? *d >= ic->lo : *d > ic->lo;
      bool high_ok = ic->closed_high ? *d <= ic->hi : *d < ic->hi;
      if (!low_ok || !high_ok) return false;
    } else if (const auto* cc = std::get_if<CategoryConstraint>(&c.test)) {
      if (CategoryKey(v) != cc->category) return false;
    }
    // NotNullConstraint: already satisfied.
  }
  return true;
}

std::string Predicate::Describe() const {
  if (constraints.empty()) return "all rows";
  std::string out;
  for (const Constraint& c : constraints) {
    if (!out.empty()) out += " and ";
    if (const auto* ic = std::get_if<IntervalConstraint>(&c.test)) {
      out += c.field + " in " + (ic->closed_low ? "[" : "(") + CategoryKey(Value{ic->lo}) + ", " +
             CategoryKey(Value{ic->hi}) + (ic->closed_high ? "]" : ")");
    } else if (const auto* cc = std::get_if<CategoryConstraint>(&c.test)) {
      out += c.field + " = " + cc->category;
    } else if (const auto* rc = std::get_if<RowConstraint>(&c.test)) {
      out += "row = " + std::to_string(rc->row);
    } else {
      out += c.field + " is not null";
    }
  }
  return out;
}

Selection SelectAll(const DataTable& table) {
  Selection all;
  all.member_row_ids.resize(table.row_count());
  for (std::size_t r = 0; r < table.row_count(); ++r) all.member_row_ids[r] = static_cast<RowId>(r);
  return all;
}

Selection Select(const DataTable& table, Predicate predicate) {
  Selection out;
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    if (predicate.Matches(table, static_cast<RowId>(r))) {
      out.member_row_ids.push_back(static_cast<RowId>(r));
    }
  }
  out.predicate = std::move(predicate);
  return out;
}

Selection Refine(const DataTable& table, const Selection& base, Constraint constraint) {
  Selection out;
  Predicate single;
  single.constraints.push_back(constraint);
  if (const auto* rc = std::get_if<RowConstraint>(&constraint.test)) {
    // Members are sorted, so a single row is a binary search.
    const auto& rows = base.member_row_ids;
    if (std::binary_search(rows.begin(), rows.end(), rc->row)) out.member_row_ids.push_back(rc->row);
  } else {
    for (RowId r : base.member_row_ids) {
      if (single.Matches(table, r)) out.member_row_ids.push_back(r);
    }
  }
  out.predicate = base.predicate;
  out.predicate.constraints.push_back(std::move(constraint));
  return out;
}

Selection NonNull(const DataTable& table, const Selection& base,
                  std::span<const std::string> fields) {
  Selection out = base;
  for (const auto& field : fields) {
    bool already = std::any_of(out.predicate.constraints.begin(), out.predicate.constraints.end(),
                               [&](const Constraint& c) {
                                 return c.field == field &&
                                        std::holds_alternative<NotNullConstraint>(c.test);
                               });
    if (!already) out = Refine(table, out, Constraint{field, NotNullConstraint{}});
  }
  return out;
}

std::vector<std::pair<std::string, Selection>> GroupByCategory(const DataTable& table,
                                                               const FieldMeta& field,
                                                               const Selection* base) {
  if (IsNumeric(field.inferred_type)) {
    throw TypeMismatchError("field \"" + field.name + "\" is " +
                            std::string(ToString(field.inferred_type)) +
                            "; group it with intervals instead");
  }
  std::vector<std::pair<std::string, Selection>> groups;
  auto index = table.FieldIndex(field.name);
  std::unordered_map<std::string, std::size_t> slot;
  Selection all;
  if (!base) {
    all = SelectAll(table);
    base = &all;
  }
  for (const auto& category : field.categories) {
    slot.emplace(category, groups.size());
    Selection s;
    s.predicate = base->predicate;
    s.predicate.constraints.push_back(Constraint{field.name, CategoryConstraint{category}});
    groups.emplace_back(category, std::move(s));
  }
  if (!index) return groups;
  for (RowId r : base->member_row_ids) {
    const Value& v = table.value(r, *index);
    if (IsNull(v)) continue;
    auto it = slot.find(CategoryKey(v));
    if (it != slot.end()) groups[it->second].second.member_row_ids.push_back(r);
  }
  return groups;
}

std::vector<std::vector<Selection>> GridCells(const DataTable& table, std::string_view x_field,
                                              std::span<const Interval> x_intervals,
                                              std::string_view y_field,
                                              std::span<const Interval> y_intervals,
                                              const Selection* base) {
  Selection all;
  if (!base) {
    all = SelectAll(table);
    base = &all;
  }
  std::vector<std::vector<Selection>> cells(x_intervals.size(),
                                            std::vector<Selection>(y_intervals.size()));
  for (std::size_t c = 0; c < x_intervals.size(); ++c) {
    for (std::size_t r = 0; r < y_intervals.size(); ++r) {
      Predicate& p = cells[c][r].predicate;
      p = base->predicate;
      const Interval& xi = x_intervals[c];
      const Interval& yi = y_intervals[r];
      p.constraints.push_back(Constraint{std::string(x_field),
                                         IntervalConstraint{xi.lo, xi.hi, xi.closed_low, xi.closed_high}});
      p.constraints.push_back(Constraint{std::string(y_field),
                                         IntervalConstraint{yi.lo, yi.hi, yi.closed_low, yi.closed_high}});
    }
  }
  auto xf = table.FieldIndex(x_field);
  auto yf = table.FieldIndex(y_field);
  if (!xf || !yf) return cells;
  for (RowId r : base->member_row_ids) {
    auto x = table.Number(r, *xf);
    auto y = table.Number(r, *yf);
    if (!x || !y) continue;
    auto c = FindInterval(x_intervals, *x);
    auto rr = FindInterval(y_intervals, *y);
    if (c && rr) cells[*c][*rr].member_row_ids.push_back(r);
  }
  return cells;
}

Summary Summarize(const Selection& selection, const DataTable& table,
                  std::span<const std::string> fields_in_scope) {
  Summary summary;
  summary.count = selection.member_row_ids.size();
  for (const auto& name : fields_in_scope) {
    auto index = table.FieldIndex(name);
    if (!index) continue;
    const FieldMeta& meta = table.fields()[*index];
    if (IsNumeric(meta.inferred_type)) {
      FieldStats stats;
      double sum = 0;
      for (RowId r : selection.member_row_ids) {
        auto v = table.Number(r, *index);
        if (!v) continue;
        ++stats.count;
        sum += *v;
        stats.min = stats.min ? std::min(*stats.min, *v) : *v;
        stats.max = stats.max ? std::max(*stats.max, *v) : *v;
      }
      if (stats.count > 0) {
        stats.sum = sum;
        stats.mean = std::clamp(sum / static_cast<double>(stats.count), *stats.min, *stats.max);
      }
      summary.numeric[name] = stats;
    } else {
      std::vector<std::pair<std::string, std::size_t>> counts;
      std::unordered_map<std::string, std::size_t> slot;
      for (const auto& category : meta.categories) {
        slot.emplace(category, counts.size());
        counts.emplace_back(category, 0);
      }
      for (RowId r : selection.member_row_ids) {
        const Value& v = table.value(r, *index);
        if (IsNull(v)) continue;
        auto key = CategoryKey(v);
        auto it = slot.find(key);
        if (it == slot.end()) {
          it = slot.emplace(key, counts.size()).first;
          counts.emplace_back(key, 0);
        }
        ++counts[it->second].second;
      }
      summary.categories[name] = std::move(counts);
    }
  }
  return summary;
}

}  // namespace chartnav
