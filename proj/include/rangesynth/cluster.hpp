#ifndef RANGESYNTH_CLUSTER_HPP
#define RANGESYNTH_CLUSTER_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "rangesynth/synthesis.hpp"

namespace rangesynth {

struct RankedFeature {
  std::string column;
  double score = 0.0;  // normalized mutual information with the target
};

namespace detail {

// Bin a column by the leaves of its 1-dim snapped tree.
inline std::vector<int> tree_bins(const Dataset& ds, const Forest& forest, int column) {
  const Tree* tree = forest.tree_for({column});
  std::vector<int> bins(ds.row_count(), -1);
  std::map<const TreeNode*, int> ids;
  for (std::size_t r = 0; r < ds.row_count(); ++r) {
    const TreeNode* node = tree->root.get();
    double x = ds.values[column][r];
    while (!node->leaf) {
      const TreeNode* child = node->children[x >= node->ranges[0].midpoint() ? 1 : 0].get();
      if (!child) break;
      node = child;
    }
    auto [it, inserted] = ids.emplace(node, static_cast<int>(ids.size()));
    bins[r] = it->second;
  }
  return bins;
}

inline double entropy(const std::unordered_map<int, int>& counts, double n) {
  double h = 0.0;
  for (auto [k, c] : counts) {
    double p = c / n;
    h -= p * std::log(p);
  }
  return h;
}

inline double normalized_mutual_information(const std::vector<int>& xs,
                                            const std::vector<int>& ys) {
  double n = static_cast<double>(xs.size());
  std::unordered_map<int, int> cx, cy;
  std::map<std::pair<int, int>, int> cxy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    ++cx[xs[i]];
    ++cy[ys[i]];
    ++cxy[{xs[i], ys[i]}];
  }
  double hx = entropy(cx, n), hy = entropy(cy, n);
  if (hx == 0.0 || hy == 0.0) return 0.0;
  double mi = 0.0;
  for (auto& [xy, c] : cxy) {
    double pxy = c / n;
    double px = cx[xy.first] / n;
    double py = cy[xy.second] / n;
    mi += pxy * std::log(pxy / (px * py));
  }
  return std::max(0.0, mi) / std::sqrt(hx * hy);
}

}  // namespace detail

// Ranks candidate feature columns by binned normalized mutual information
// with the target, most important first. Bins come from each column's 1-dim
// snapped tree leaves.
inline std::vector<RankedFeature> rank_features(const Table& in,
                                                const std::vector<std::string>& candidates,
                                                const std::string& target,
                                                const SynthesisOptions& opt) {
  std::vector<std::string> cols = candidates;
  cols.push_back(target);
  Dataset ds = make_dataset(in, cols, opt.table_name);
  Forest forest(ds, opt.build, opt.anon);
  std::vector<std::vector<int>> singles;
  for (std::size_t i = 0; i < cols.size(); ++i) singles.push_back({static_cast<int>(i)});
  forest.build(singles, opt.threads);

  std::vector<int> target_bins = detail::tree_bins(ds, forest, static_cast<int>(cols.size()) - 1);
  {
    std::unordered_map<int, int> distinct;
    for (int b : target_bins) ++distinct[b];
    if (distinct.size() <= 1) throw SchemaError("constant target column: " + target);
  }

  std::vector<RankedFeature> ranked;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    std::vector<int> bins = detail::tree_bins(ds, forest, static_cast<int>(i));
    ranked.push_back({candidates[i], detail::normalized_mutual_information(bins, target_bins)});
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankedFeature& a, const RankedFeature& b) { return a.score > b.score; });
  return ranked;
}

struct SubTableSpec {
  std::vector<std::string> columns;  // includes the target, target last
};

struct StitchPlan {
  std::string common_column;  // the target
  std::vector<SubTableSpec> sub_tables;
  std::vector<std::string> leftover_columns;  // synthesized individually
};

// Consecutive windows of C-1 ranked features, target appended to each.
// Features scoring under the relevance threshold become leftover columns.
inline StitchPlan plan_subtables(const std::vector<RankedFeature>& ranking,
                                 const std::string& target, int max_columns = 5,
                                 double relevance_threshold = 0.01) {
  if (max_columns < 2) throw SchemaError("plan_subtables: C must be >= 2");
  StitchPlan plan;
  plan.common_column = target;
  std::vector<std::string> features;
  for (const auto& rf : ranking) {
    if (rf.score >= relevance_threshold)
      features.push_back(rf.column);
    else
      plan.leftover_columns.push_back(rf.column);
  }
  std::size_t window = static_cast<std::size_t>(max_columns - 1);
  for (std::size_t i = 0; i < features.size(); i += window) {
    SubTableSpec spec;
    for (std::size_t j = i; j < std::min(i + window, features.size()); ++j)
      spec.columns.push_back(features[j]);
    spec.columns.push_back(target);
    plan.sub_tables.push_back(std::move(spec));
  }
  return plan;
}

namespace detail {

inline void resize_rows(Table& t, std::size_t n, Rng& rng) {
  if (t.rows.size() > n) {
    rng.shuffle(t.rows);
    t.rows.resize(n);
  } else {
    while (t.rows.size() < n && !t.rows.empty())
      t.rows.push_back(t.rows[static_cast<std::size_t>(rng.below(t.rows.size()))]);
  }
}

inline void sort_on(Table& t, int col) {
  std::stable_sort(t.rows.begin(), t.rows.end(),
                   [col](const std::vector<Value>& a, const std::vector<Value>& b) {
                     return value_less(a[static_cast<std::size_t>(col)],
                                       b[static_cast<std::size_t>(col)]);
                   });
}

}  // namespace detail

// Positional join of two syntheses on the common column: average the row
// counts, resize, shuffle, sort both on the common column, join in order.
// The common value is taken from the left operand.
inline Table stitch(Table left, Table right, const std::string& common, Rng& rng) {
  int lc = left.column_index(common);
  int rc = right.column_index(common);
  std::size_t n = static_cast<std::size_t>(
      std::floor((static_cast<double>(left.rows.size()) + static_cast<double>(right.rows.size())) / 2.0 +
                 0.5));
  detail::resize_rows(left, n, rng);
  detail::resize_rows(right, n, rng);
  rng.shuffle(left.rows);
  rng.shuffle(right.rows);
  detail::sort_on(left, lc);
  detail::sort_on(right, rc);

  Table out;
  out.columns = left.columns;
  for (std::size_t c = 0; c < right.columns.size(); ++c)
    if (static_cast<int>(c) != rc) out.columns.push_back(right.columns[c]);
  out.rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Value> row = left.rows[i];
    for (std::size_t c = 0; c < right.columns.size(); ++c)
      if (static_cast<int>(c) != rc) row.push_back(right.rows[i][c]);
    out.rows.push_back(std::move(row));
  }
  return out;
}

// Resize each individually synthesized single column to the stitched row
// count, shuffle, append positionally.
inline Table attach_leftovers(Table stitched, std::vector<Table> singles, Rng& rng) {
  std::size_t n = stitched.rows.size();
  for (auto& single : singles) {
    detail::resize_rows(single, n, rng);
    rng.shuffle(single.rows);
    for (const auto& col : single.columns) stitched.columns.push_back(col);
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& v : single.rows[i]) stitched.rows[i].push_back(v);
  }
  return stitched;
}

inline Table reorder_columns(const Table& t, const std::vector<std::string>& order) {
  Table out;
  std::vector<int> idx;
  for (const auto& name : order) {
    idx.push_back(t.column_index(name));
    out.columns.push_back(t.columns[static_cast<std::size_t>(idx.back())]);
  }
  out.rows.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    std::vector<Value> r;
    r.reserve(idx.size());
    for (int i : idx) r.push_back(row[static_cast<std::size_t>(i)]);
    out.rows.push_back(std::move(r));
  }
  return out;
}

struct PipelineReport {
  StitchPlan plan;
  SynthesisStats stats;
  bool used_subtables = false;
};

// Full synthesis pipeline. With a target (or more columns than max_dim) the
// table is decomposed into target-anchored sub-tables, each synthesized and
// stitched back; otherwise one direct synthesis covers all columns.
inline Table synthesize(const Table& in, const std::vector<std::string>& columns,
                        const std::optional<std::string>& target, const SynthesisOptions& opt,
                        PipelineReport* report = nullptr,
                        const std::vector<RankedFeature>* ranking_override = nullptr) {
  SynthesisStats stats;
  bool direct = !target && columns.size() <= static_cast<std::size_t>(opt.max_dim);
  Table result;
  if (direct) {
    result = synthesize_columns(in, columns, opt, &stats);
  } else {
    // No target in descriptive mode: anchor sub-tables on the first column.
    std::string anchor = target ? *target : columns.front();
    std::vector<std::string> candidates;
    for (const auto& c : columns)
      if (c != anchor) candidates.push_back(c);

    std::vector<RankedFeature> ranking =
        ranking_override ? *ranking_override : rank_features(in, candidates, anchor, opt);
    StitchPlan plan = plan_subtables(ranking, anchor, 5, 0.01);

    Rng rng = seeded_rng(opt.anon.salt, "stitch");
    std::optional<Table> acc;
    for (const auto& spec : plan.sub_tables) {
      Table part = synthesize_columns(in, spec.columns, opt, &stats);
      acc = acc ? stitch(std::move(*acc), std::move(part), anchor, rng) : std::move(part);
    }
    if (!acc) acc = synthesize_columns(in, {anchor}, opt, &stats);

    std::vector<Table> singles;
    for (const auto& col : plan.leftover_columns)
      singles.push_back(synthesize_columns(in, {col}, opt, &stats));
    result = attach_leftovers(std::move(*acc), std::move(singles), rng);
    result = reorder_columns(result, columns);
    if (report) {
      report->plan = std::move(plan);
      report->used_subtables = true;
    }
  }
  if (report) report->stats = stats;
  return result;
}

}  // namespace rangesynth

#endif
