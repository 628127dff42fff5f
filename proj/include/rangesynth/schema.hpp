#ifndef RANGESYNTH_SCHEMA_HPP
#define RANGESYNTH_SCHEMA_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "rangesynth/common.hpp"
#include "rangesynth/snapping.hpp"
#include "rangesynth/value.hpp"

namespace rangesynth {

enum class ColumnKind { Text, Integer, Real, Boolean, Datetime };

inline const char* kind_name(ColumnKind k) {
  switch (k) {
    case ColumnKind::Text: return "text";
    case ColumnKind::Integer: return "integer";
    case ColumnKind::Real: return "real";
    case ColumnKind::Boolean: return "boolean";
    case ColumnKind::Datetime: return "datetime";
  }
  return "?";
}

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ColumnMeta {
  std::string name;
  ColumnKind kind = ColumnKind::Text;
  bool pid_role = false;
  // Distinct text values in ascending lexicographic order; a value's casting
  // integer is its index here.
  std::vector<std::string> casting_table;

  int casting_index(const std::string& s) const {
    auto it = std::lower_bound(casting_table.begin(), casting_table.end(), s);
    if (it == casting_table.end() || *it != s)
      throw SchemaError("value not in casting table: " + s);
    return static_cast<int>(it - casting_table.begin());
  }
};

struct Table {
  std::vector<ColumnMeta> columns;
  std::vector<std::vector<Value>> rows;
  std::vector<std::string> pid_columns;

  int column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i].name == name) return static_cast<int>(i);
    throw SchemaError("no such column: " + name);
  }
  bool has_column(const std::string& name) const {
    for (const auto& c : columns)
      if (c.name == name) return true;
    return false;
  }
};

namespace detail {

inline bool parse_int(const std::string& s, std::int64_t& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  long long v = std::strtoll(s.c_str(), &end, 10);
  if (errno || end != s.c_str() + s.size()) return false;
  out = v;
  return true;
}

inline bool parse_real(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(s.c_str(), &end);
  if (errno || end != s.c_str() + s.size() || !std::isfinite(v)) return false;
  out = v;
  return true;
}

inline bool parse_bool(const std::string& s, bool& out) {
  std::string t;
  for (char c : s) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (t == "true") return out = true, true;
  if (t == "false") return out = false, true;
  return false;
}

}  // namespace detail

// Narrowest kind that parses every non-empty cell of the column; mixed or
// unparseable content degrades to text. Empty cells are null and don't vote.
inline std::vector<ColumnMeta> infer_column_kinds(
    const std::vector<std::string>& names,
    const std::vector<std::vector<std::string>>& raw_rows) {
  if (names.empty()) throw SchemaError("zero columns");
  std::vector<ColumnMeta> metas(names.size());
  for (std::size_t c = 0; c < names.size(); ++c) {
    metas[c].name = names[c];
    bool can_int = true, can_real = true, can_bool = true, can_dt = true, any = false;
    for (const auto& row : raw_rows) {
      const std::string& cell = row.at(c);
      if (cell.empty()) continue;
      any = true;
      std::int64_t i;
      double d;
      bool b;
      if (can_int && !detail::parse_int(cell, i)) can_int = false;
      if (can_real && !detail::parse_real(cell, d)) can_real = false;
      if (can_bool && !detail::parse_bool(cell, b)) can_bool = false;
      if (can_dt && !parse_datetime(cell)) can_dt = false;
      if (!can_int && !can_real && !can_bool && !can_dt) break;
    }
    if (!any)
      metas[c].kind = ColumnKind::Text;
    else if (can_bool)
      metas[c].kind = ColumnKind::Boolean;
    else if (can_int)
      metas[c].kind = ColumnKind::Integer;
    else if (can_real)
      metas[c].kind = ColumnKind::Real;
    else if (can_dt)
      metas[c].kind = ColumnKind::Datetime;
    else
      metas[c].kind = ColumnKind::Text;
  }
  return metas;
}

inline Value parse_cell(const std::string& cell, const ColumnMeta& m) {
  if (cell.empty()) return std::monostate{};
  switch (m.kind) {
    case ColumnKind::Integer: {
      std::int64_t v;
      if (!detail::parse_int(cell, v)) throw SchemaError("bad integer cell: " + cell);
      return v;
    }
    case ColumnKind::Real: {
      double v;
      if (!detail::parse_real(cell, v)) throw SchemaError("bad real cell: " + cell);
      return v;
    }
    case ColumnKind::Boolean: {
      bool v;
      if (!detail::parse_bool(cell, v)) throw SchemaError("bad boolean cell: " + cell);
      return v;
    }
    case ColumnKind::Datetime: {
      auto v = parse_datetime(cell);
      if (!v) throw SchemaError("bad datetime cell: " + cell);
      return *v;
    }
    case ColumnKind::Text: return cell;
  }
  throw SchemaError("unreachable");
}

inline void build_casting_table(ColumnMeta& m, const std::vector<Value>& column) {
  if (m.kind != ColumnKind::Text) return;
  std::set<std::string> distinct;
  for (const auto& v : column)
    if (const auto* s = std::get_if<std::string>(&v)) distinct.insert(*s);
  m.casting_table.assign(distinct.begin(), distinct.end());
}

inline double cast_to_real(const Value& v, const ColumnMeta& m, double null_code) {
  if (is_null(v)) return null_code;
  switch (m.kind) {
    case ColumnKind::Integer: return static_cast<double>(std::get<std::int64_t>(v));
    case ColumnKind::Real: return std::get<double>(v);
    case ColumnKind::Boolean: return std::get<bool>(v) ? 1.0 : 0.0;
    case ColumnKind::Datetime: return static_cast<double>(std::get<DateTime>(v).secs);
    case ColumnKind::Text: return static_cast<double>(m.casting_index(std::get<std::string>(v)));
  }
  throw SchemaError("unreachable");
}

// Longest common prefix of the bucket's strings plus "*" and a fresh random
// 3-digit suffix.
inline std::string text_generalize(const std::vector<std::string>& strings, Rng& rng) {
  std::string prefix = strings.empty() ? std::string() : strings.front();
  for (const auto& s : strings) {
    std::size_t n = 0;
    while (n < prefix.size() && n < s.size() && prefix[n] == s[n]) ++n;
    prefix.resize(n);
  }
  char suffix[8];
  std::snprintf(suffix, sizeof suffix, "*%03d", static_cast<int>(rng.below(1000)));
  return prefix + suffix;
}

// Maps a sampled real back to the column's type. The range is the source
// bucket's range for this dimension; for text intervals the covered slice of
// the casting table decides the generalized label.
inline Value cast_back(double x, const ColumnMeta& m, const SnappedRange& r, double null_code,
                       Rng& rng) {
  if (!r.contains(x) && x != null_code)
    throw std::logic_error("cast_back: value outside range and not the null code");
  auto nearest_in = [&](double v) {
    // nearest integer, ties half-up, clamped into the range
    double n = std::floor(v + 0.5);
    if (r.is_singularity()) return r.value();
    double lo = std::ceil(r.lo);
    double hi = std::ceil(r.hi()) - 1.0;
    return std::min(std::max(n, lo), hi);
  };
  switch (m.kind) {
    case ColumnKind::Real:
      if (x == null_code) return std::monostate{};
      return x;
    case ColumnKind::Integer: {
      double n = nearest_in(x);
      if (n == null_code) return std::monostate{};
      return static_cast<std::int64_t>(n);
    }
    case ColumnKind::Datetime: {
      double n = r.is_singularity() ? r.value() : std::floor(x + 0.5);
      if (n == null_code) return std::monostate{};
      return DateTime{static_cast<std::int64_t>(n)};
    }
    case ColumnKind::Boolean: {
      // cast points are exactly 0.0, 1.0 and the null code
      double best = 0.0, bestd = std::abs(x - 0.0);
      for (double cand : {1.0, null_code}) {
        double d = std::abs(x - cand);
        if (d < bestd) best = cand, bestd = d;
      }
      if (best == null_code) return std::monostate{};
      return best == 1.0;
    }
    case ColumnKind::Text: {
      double n = r.is_singularity() ? r.value() : std::floor(x + 0.5);
      if (n == null_code) return std::monostate{};
      if (r.is_singularity()) {
        int idx = static_cast<int>(n);
        if (idx < 0 || idx >= static_cast<int>(m.casting_table.size()))
          throw std::logic_error("cast_back: text singularity outside casting table");
        return m.casting_table[idx];
      }
      // Distinct strings covered by the interval.
      int first = static_cast<int>(std::ceil(r.lo));
      int last = static_cast<int>(std::ceil(r.hi())) - 1;
      first = std::max(first, 0);
      last = std::min(last, static_cast<int>(m.casting_table.size()) - 1);
      std::vector<std::string> covered;
      for (int i = first; i <= last; ++i) covered.push_back(m.casting_table[i]);
      if (covered.empty()) {
        int idx = std::min(std::max(static_cast<int>(nearest_in(x)), 0),
                           static_cast<int>(m.casting_table.size()) - 1);
        covered.push_back(m.casting_table[idx]);
      }
      return text_generalize(covered, rng);
    }
  }
  throw SchemaError("unreachable");
}

}  // namespace rangesynth

#endif
