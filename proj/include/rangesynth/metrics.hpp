#ifndef RANGESYNTH_METRICS_HPP
#define RANGESYNTH_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "rangesynth/schema.hpp"

namespace rangesynth {

enum class QualityKind {
  MarginalContinuous,
  MarginalCategorical,
  PairContinuous,
  PairCategorical,
};

struct QualityScore {
  double value = 0.0;  // 1.0 is indistinguishable under the statistic
  QualityKind kind = QualityKind::MarginalContinuous;
};

// Integer, real and datetime columns score as continuous; text and boolean as
// categorical.
inline bool is_continuous_kind(ColumnKind k) {
  return k == ColumnKind::Integer || k == ColumnKind::Real || k == ColumnKind::Datetime;
}

namespace detail {

inline std::vector<double> numeric_column(const std::vector<Value>& col, const ColumnMeta& m) {
  std::vector<double> out;
  for (const auto& v : col)
    if (!is_null(v)) out.push_back(cast_to_real(v, m, 0.0));
  return out;
}

// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

inline std::map<std::string, double> relative_frequencies(const std::vector<Value>& col) {
  std::map<std::string, double> freq;
  for (const auto& v : col) freq[is_null(v) ? "\x01null" : value_to_string(v)] += 1.0;
  for (auto& [k, c] : freq) c /= static_cast<double>(col.size());
  return freq;
}

inline double total_variation_distance(const std::map<std::string, double>& a,
                                       const std::map<std::string, double>& b) {
  double sum = 0.0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      sum += ia->second;
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      sum += ib->second;
      ++ib;
    } else {
      sum += std::abs(ia->second - ib->second);
      ++ia;
      ++ib;
    }
  }
  return sum / 2.0;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

// Decile edges of the original column; the fixed reference grid for binning
// continuous members of a contingency table.
inline std::vector<double> decile_edges(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::vector<double> edges;
  for (int q = 1; q < 10; ++q) {
    std::size_t idx = std::min(v.size() - 1, q * v.size() / 10);
    double e = v[idx];
    if (edges.empty() || e > edges.back()) edges.push_back(e);
  }
  return edges;
}

inline std::string bin_label(const Value& v, const ColumnMeta& m, bool continuous,
                             const std::vector<double>& edges) {
  if (is_null(v)) return "\x01null";
  if (!continuous) return value_to_string(v);
  double x = cast_to_real(v, m, 0.0);
  std::size_t b = 0;
  while (b < edges.size() && x >= edges[b]) ++b;
  return std::to_string(b);
}

}  // namespace detail

// Marginal quality: 1 - KS statistic for continuous columns, 1 - total
// variation distance of category frequencies for categorical ones.
inline QualityScore marginal_quality(const std::vector<Value>& orig, const std::vector<Value>& syn,
                                     const ColumnMeta& m) {
  if (orig.empty() || syn.empty()) throw std::invalid_argument("marginal_quality: empty column");
  if (is_continuous_kind(m.kind)) {
    double d = detail::ks_statistic(detail::numeric_column(orig, m), detail::numeric_column(syn, m));
    return {1.0 - d, QualityKind::MarginalContinuous};
  }
  double tvd = detail::total_variation_distance(detail::relative_frequencies(orig),
                                                detail::relative_frequencies(syn));
  return {1.0 - tvd, QualityKind::MarginalCategorical};
}

// Pair quality: correlation similarity 1 - |rho_orig - rho_syn| / 2 for two
// continuous columns; otherwise contingency similarity over the joint table,
// continuous members binned by the original's deciles.
inline QualityScore pair_quality(const std::vector<Value>& orig_a, const std::vector<Value>& orig_b,
                                 const std::vector<Value>& syn_a, const std::vector<Value>& syn_b,
                                 const ColumnMeta& ma, const ColumnMeta& mb) {
  bool cont = is_continuous_kind(ma.kind) && is_continuous_kind(mb.kind);
  if (cont) {
    auto oa = detail::numeric_column(orig_a, ma);
    auto ob = detail::numeric_column(orig_b, mb);
    auto sa = detail::numeric_column(syn_a, ma);
    auto sb = detail::numeric_column(syn_b, mb);
    // drop rows where either side is null so the pairs stay aligned
    std::vector<double> oa2, ob2, sa2, sb2;
    for (std::size_t i = 0; i < orig_a.size(); ++i)
      if (!is_null(orig_a[i]) && !is_null(orig_b[i])) {
        oa2.push_back(cast_to_real(orig_a[i], ma, 0.0));
        ob2.push_back(cast_to_real(orig_b[i], mb, 0.0));
      }
    for (std::size_t i = 0; i < syn_a.size(); ++i)
      if (!is_null(syn_a[i]) && !is_null(syn_b[i])) {
        sa2.push_back(cast_to_real(syn_a[i], ma, 0.0));
        sb2.push_back(cast_to_real(syn_b[i], mb, 0.0));
      }
    double ro = oa2.size() > 1 ? detail::pearson(oa2, ob2) : std::numeric_limits<double>::quiet_NaN();
    double rs = sa2.size() > 1 ? detail::pearson(sa2, sb2) : std::numeric_limits<double>::quiet_NaN();
    if (!std::isnan(ro) && !std::isnan(rs))
      return {1.0 - std::abs(ro - rs) / 2.0, QualityKind::PairContinuous};
    // constant column: correlation undefined, fall through to contingency
  }
  std::vector<double> edges_a, edges_b;
  if (is_continuous_kind(ma.kind)) edges_a = detail::decile_edges(detail::numeric_column(orig_a, ma));
  if (is_continuous_kind(mb.kind)) edges_b = detail::decile_edges(detail::numeric_column(orig_b, mb));
  auto joint = [&](const std::vector<Value>& a, const std::vector<Value>& b) {
    std::map<std::string, double> freq;
    for (std::size_t i = 0; i < a.size(); ++i)
      freq[detail::bin_label(a[i], ma, is_continuous_kind(ma.kind), edges_a) + "\x02" +
           detail::bin_label(b[i], mb, is_continuous_kind(mb.kind), edges_b)] += 1.0;
    for (auto& [k, c] : freq) c /= static_cast<double>(a.size());
    return freq;
  };
  double tvd = detail::total_variation_distance(joint(orig_a, orig_b), joint(syn_a, syn_b));
  return {1.0 - tvd, QualityKind::PairCategorical};
}

// (1 - QS_low) / (1 - QS_high); how many times closer the better score is to
// perfect. Infinite when the better score is exactly 1.
inline double improvement_factor(double qs_low, double qs_high) {
  if (qs_high < qs_low) throw std::invalid_argument("improvement_factor: qs_high < qs_low");
  if (qs_high >= 1.0) return std::numeric_limits<double>::infinity();
  return (1.0 - qs_low) / (1.0 - qs_high);
}

// (S_orig - S_syn) / max(S_orig, S_syn); negative when the synthetic data
// trains the better model.
inline double ml_penalty(double s_orig, double s_syn) {
  double m = std::max(s_orig, s_syn);
  if (m == 0.0) return 0.0;
  return (s_orig - s_syn) / m;
}

inline double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of empty set");
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

}  // namespace rangesynth

#endif
