#ifndef RANGESYNTH_PRIVACY_HPP
#define RANGESYNTH_PRIVACY_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rangesynth/common.hpp"
#include "rangesynth/metrics.hpp"
#include "rangesynth/schema.hpp"

namespace rangesynth {

struct AttackConfig {
  int n_attacks = 500;
  double confidence_cut = 0.2;
  double control_fraction = 0.5;
  // a continuous secret counts as correctly inferred within this fraction of
  // the original column's value range
  double continuous_match_tolerance = 0.05;
};

struct ColumnAttackResult {
  std::string secret_column;
  int attacks = 0;
  double p_test = 0.0;
  double p_control = 0.0;
  double precision_improvement = 0.0;
  double half_width = 1.0;
  bool retained = false;
};

struct AttackReport {
  std::vector<ColumnAttackResult> columns;
  int total_attacks = 0;
  int retained_attacks = 0;
};

// Disjoint random partition; the test half is what gets synthesized.
inline std::pair<Table, Table> split_test_control(const Table& t, double fraction, Rng& rng) {
  if (t.rows.size() < 2) throw SchemaError("split_test_control: need at least 2 rows");
  if (!(fraction > 0.0 && fraction < 1.0))
    throw SchemaError("split_test_control: fraction must be in (0,1)");
  std::vector<std::size_t> order(t.rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);
  std::size_t n_control = static_cast<std::size_t>(
      std::floor(static_cast<double>(t.rows.size()) * fraction + 0.5));
  n_control = std::min(std::max<std::size_t>(n_control, 1), t.rows.size() - 1);
  Table test, control;
  test.columns = control.columns = t.columns;
  test.pid_columns = control.pid_columns = t.pid_columns;
  for (std::size_t i = 0; i < order.size(); ++i)
    (i < n_control ? control : test).rows.push_back(t.rows[order[i]]);
  return {std::move(test), std::move(control)};
}

namespace detail {

struct GowerContext {
  std::vector<double> ranges;  // per column; 0 for categorical
};

inline GowerContext gower_context(const Table& t) {
  GowerContext ctx;
  ctx.ranges.assign(t.columns.size(), 0.0);
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (!is_continuous_kind(t.columns[c].kind)) continue;
    double mn = 0, mx = 0;
    bool any = false;
    for (const auto& row : t.rows) {
      if (is_null(row[c])) continue;
      double x = cast_to_real(row[c], t.columns[c], 0.0);
      if (!any) {
        mn = mx = x;
        any = true;
      } else {
        mn = std::min(mn, x);
        mx = std::max(mx, x);
      }
    }
    ctx.ranges[c] = any ? mx - mn : 0.0;
  }
  return ctx;
}

// Gower distance over the known columns: numeric |delta| / range, categorical
// 0/1 mismatch, nulls match nulls.
inline double gower_distance(const std::vector<Value>& a, const std::vector<Value>& b,
                             const std::vector<int>& cols, const Table& schema,
                             const GowerContext& ctx) {
  double sum = 0.0;
  for (int c : cols) {
    const auto& va = a[static_cast<std::size_t>(c)];
    const auto& vb = b[static_cast<std::size_t>(c)];
    if (is_null(va) || is_null(vb)) {
      sum += (is_null(va) && is_null(vb)) ? 0.0 : 1.0;
      continue;
    }
    const ColumnMeta& m = schema.columns[static_cast<std::size_t>(c)];
    if (is_continuous_kind(m.kind) && ctx.ranges[static_cast<std::size_t>(c)] > 0.0) {
      double d = std::abs(cast_to_real(va, m, 0.0) - cast_to_real(vb, m, 0.0)) /
                 ctx.ranges[static_cast<std::size_t>(c)];
      sum += std::min(d, 1.0);
    } else {
      sum += value_to_string(va) == value_to_string(vb) ? 0.0 : 1.0;
    }
  }
  return sum / static_cast<double>(cols.size());
}

}  // namespace detail

// Nearest synthetic record under Gower distance over the known columns; its
// secret value is the prediction. Ties go to the lowest row index.
inline Value infer_secret(const Table& syn, const std::vector<Value>& victim,
                          const std::vector<int>& known_cols, int secret_col,
                          const detail::GowerContext& ctx) {
  if (syn.rows.empty()) throw SchemaError("infer_secret: empty synthetic table");
  if (known_cols.empty()) throw SchemaError("infer_secret: no known columns");
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < syn.rows.size(); ++i) {
    double d = detail::gower_distance(victim, syn.rows[i], known_cols, syn, ctx);
    if (d < best) {
      best = d;
      best_i = i;
    }
  }
  return syn.rows[best_i][static_cast<std::size_t>(secret_col)];
}

// PI = (p_test - p_control) / (1 - p_control).
inline double precision_improvement(double p_test, double p_control) {
  if (p_control >= 1.0) throw std::domain_error("precision_improvement: p_control must be < 1");
  return (p_test - p_control) / (1.0 - p_control);
}

// Wilson score interval half-width at 95% confidence.
inline double wilson_half_width(double p, int n) {
  if (n <= 0) return 1.0;
  constexpr double z = 1.959963984540054;
  double nn = static_cast<double>(n);
  double denom = 1.0 + z * z / nn;
  return (z / denom) * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn));
}

using Synthesizer = std::function<Table(const Table&)>;

// Anonymeter-style inference attack: split, synthesize the test half, attack
// random victims from both halves with one random secret column each, then
// compare test precision against the control baseline per column.
inline AttackReport run_suite(const Table& orig, const Synthesizer& synthesize_fn,
                              const AttackConfig& cfg, std::uint64_t seed) {
  if (orig.columns.size() < 2) throw SchemaError("run_suite: need at least 2 columns");
  if (cfg.n_attacks < 1) throw SchemaError("run_suite: n_attacks must be >= 1");
  Rng rng(seed);
  auto [test, control] = split_test_control(orig, cfg.control_fraction, rng);
  Table syn = synthesize_fn(test);

  detail::GowerContext ctx = detail::gower_context(orig);
  std::vector<double> col_range = ctx.ranges;

  struct Tally {
    int test_ok = 0, test_n = 0, control_ok = 0, control_n = 0;
  };
  std::map<std::string, Tally> tallies;

  std::vector<int> attackable;
  for (std::size_t c = 0; c < orig.columns.size(); ++c)
    if (syn.has_column(orig.columns[c].name)) attackable.push_back(static_cast<int>(c));
  if (attackable.size() < 2) throw SchemaError("run_suite: need at least 2 synthesized columns");

  auto matches = [&](const Value& predicted, const Value& truth, int col) {
    if (is_null(predicted) || is_null(truth)) return is_null(predicted) && is_null(truth);
    const ColumnMeta& m = orig.columns[static_cast<std::size_t>(col)];
    if (is_continuous_kind(m.kind) && col_range[static_cast<std::size_t>(col)] > 0.0) {
      double d = std::abs(cast_to_real(predicted, m, 0.0) - cast_to_real(truth, m, 0.0));
      return d <= cfg.continuous_match_tolerance * col_range[static_cast<std::size_t>(col)];
    }
    return value_to_string(predicted) == value_to_string(truth);
  };

  // column indices within the synthetic table can differ from the original
  auto syn_col = [&](int orig_col) { return syn.column_index(orig.columns[static_cast<std::size_t>(orig_col)].name); };

  for (int a = 0; a < cfg.n_attacks; ++a) {
    int secret = attackable[static_cast<std::size_t>(rng.below(attackable.size()))];
    std::vector<int> known;
    for (int c : attackable)
      if (c != secret) known.push_back(syn_col(c));
    int secret_syn = syn_col(secret);

    for (int side = 0; side < 2; ++side) {
      const Table& pool = side == 0 ? test : control;
      const std::vector<Value>& victim =
          pool.rows[static_cast<std::size_t>(rng.below(pool.rows.size()))];
      // project the victim onto the synthetic column order
      std::vector<Value> victim_syn(syn.columns.size());
      for (std::size_t c = 0; c < syn.columns.size(); ++c)
        victim_syn[c] = victim[static_cast<std::size_t>(orig.column_index(syn.columns[c].name))];
      detail::GowerContext syn_ctx;
      syn_ctx.ranges.assign(syn.columns.size(), 0.0);
      for (std::size_t c = 0; c < syn.columns.size(); ++c)
        syn_ctx.ranges[c] = col_range[static_cast<std::size_t>(orig.column_index(syn.columns[c].name))];
      Value predicted = infer_secret(syn, victim_syn, known, secret_syn, syn_ctx);
      bool ok = matches(predicted, victim[static_cast<std::size_t>(secret)], secret);
      Tally& t = tallies[orig.columns[static_cast<std::size_t>(secret)].name];
      if (side == 0) {
        ++t.test_n;
        t.test_ok += ok;
      } else {
        ++t.control_n;
        t.control_ok += ok;
      }
    }
  }

  AttackReport report;
  report.total_attacks = cfg.n_attacks;
  for (const auto& [name, t] : tallies) {
    ColumnAttackResult r;
    r.secret_column = name;
    r.attacks = t.test_n;
    r.p_test = t.test_n ? static_cast<double>(t.test_ok) / t.test_n : 0.0;
    r.p_control = t.control_n ? static_cast<double>(t.control_ok) / t.control_n : 0.0;
    r.half_width = std::max(wilson_half_width(r.p_test, t.test_n),
                            wilson_half_width(r.p_control, t.control_n));
    if (r.p_control < 1.0 && r.half_width <= cfg.confidence_cut) {
      r.precision_improvement = precision_improvement(r.p_test, r.p_control);
      r.retained = true;
      report.retained_attacks += t.test_n;
    }
    report.columns.push_back(std::move(r));
  }
  return report;
}

}  // namespace rangesynth

#endif
