#ifndef RANGESYNTH_HARVEST_HPP
#define RANGESYNTH_HARVEST_HPP

#include <algorithm>
#include <vector>

#include "rangesynth/anon.hpp"
#include "rangesynth/forest.hpp"

namespace rangesynth {

struct RefinedBucket {
  std::vector<SnappedRange> ranges;
  long long count = 0;
};

inline bool bucket_range_less(const RefinedBucket& a, const RefinedBucket& b) {
  return a.ranges < b.ranges;
}

namespace detail {

struct HalfOption {
  SnappedRange range;
  double fraction;
};

// Distribution of a leaf's rows over the two halves of one dimension, read
// from the 1-dim tree at the same range. Suppressed or missing children get
// fraction zero; with no unsuppressed children the whole range stays as is.
inline std::vector<HalfOption> dim_options(const Forest& forest, int column,
                                           const SnappedRange& leaf_range,
                                           const AnonParams& ap) {
  const Tree* one_dim = forest.tree_for({column});
  const TreeNode* node = one_dim ? one_dim->find_node({leaf_range}) : nullptr;
  if (!node || node->leaf) return {{leaf_range, 1.0}};

  auto [lo_half, hi_half] = halves(leaf_range);
  SnappedRange half_ranges[2] = {lo_half, hi_half};
  double counts[2] = {0.0, 0.0};
  SnappedRange release[2] = {lo_half, hi_half};
  for (int h = 0; h < 2; ++h) {
    const TreeNode* child = node->children[h].get();
    if (!child || child->true_count == 0) continue;
    bool supp = child->leaf ? suppress(child->contribs, child->seed, ap) : false;
    if (supp) continue;
    counts[h] = static_cast<double>(child->true_count);
    release[h] = child->released_ranges()[0];  // singular children release the value
  }
  double total = counts[0] + counts[1];
  if (total == 0.0) return {{leaf_range, 1.0}};
  std::vector<HalfOption> out;
  for (int h = 0; h < 2; ++h)
    out.push_back({counts[h] > 0.0 ? release[h] : half_ranges[h], counts[h] / total});
  return out;
}

// Largest-remainder integerization of count over the product distribution;
// ties broken by lexicographic combination order so the result is exact and
// deterministic.
inline std::vector<RefinedBucket> allocate(const std::vector<std::vector<HalfOption>>& options,
                                           long long count) {
  std::size_t combos = 1;
  for (const auto& opts : options) combos *= opts.size();
  std::vector<RefinedBucket> raw(combos);
  std::vector<double> weights(combos);
  for (std::size_t c = 0; c < combos; ++c) {
    double w = 1.0;
    std::size_t rem = c;
    std::vector<SnappedRange> ranges(options.size());
    // dimension 0 is the most significant digit
    for (std::size_t d = options.size(); d-- > 0;) {
      const auto& opts = options[d];
      std::size_t pick = rem % opts.size();
      rem /= opts.size();
      ranges[d] = opts[pick].range;
      w *= opts[pick].fraction;
    }
    raw[c].ranges = std::move(ranges);
    weights[c] = w;
  }
  long long assigned = 0;
  std::vector<std::pair<double, std::size_t>> remainders;
  for (std::size_t c = 0; c < combos; ++c) {
    double exact = static_cast<double>(count) * weights[c];
    long long base = static_cast<long long>(std::floor(exact));
    raw[c].count = base;
    assigned += base;
    remainders.emplace_back(exact - static_cast<double>(base), c);
  }
  std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (long long i = 0; i < count - assigned; ++i) ++raw[remainders[static_cast<std::size_t>(i)].second].count;

  std::vector<RefinedBucket> out;
  for (auto& b : raw)
    if (b.count > 0) out.push_back(std::move(b));
  return out;
}

}  // namespace detail

// Converts one unsuppressed leaf into refined buckets one halving finer,
// borrowing each dimension's distribution from the 1-dim trees. The refined
// counts sum exactly to the leaf's noisy count.
inline std::vector<RefinedBucket> refine_leaf(const Forest& forest, const Tree& tree,
                                              const TreeNode& leaf) {
  const AnonParams& ap = forest.anon_params();
  FlattenResult fl = flatten(leaf.contribs, leaf.seed, ap);
  std::uint64_t pid_digest = pid_set_digest(ap.salt, leaf.contribs);
  long long noisy = noisy_count(fl.flattened_total, fl.top_group_mean, leaf.seed, pid_digest, ap);
  if (noisy <= 0) return {};

  std::vector<SnappedRange> released = leaf.released_ranges();
  std::vector<std::vector<detail::HalfOption>> options;
  for (std::size_t d = 0; d < released.size(); ++d) {
    if (released[d].is_singularity())
      options.push_back({{released[d], 1.0}});
    else
      options.push_back(detail::dim_options(forest, tree.dims[d], leaf.ranges[d], ap));
  }
  return detail::allocate(options, noisy);
}

namespace detail {

struct WalkResult {
  std::vector<RefinedBucket> buckets;
  std::vector<int> leftover_rows;
};

inline void emit_merged(const Forest& forest, const Tree& tree, const TreeNode& node,
                        std::vector<int>& leftover, std::vector<RefinedBucket>& out) {
  if (leftover.empty()) return;
  const AnonParams& ap = forest.anon_params();
  PidContributions contribs = tree.contribs_of_rows(leftover);
  if (suppress(contribs, node.seed, ap)) return;  // keep bubbling up
  FlattenResult fl = flatten(contribs, node.seed, ap);
  long long noisy =
      noisy_count(fl.flattened_total, fl.top_group_mean, node.seed,
                  pid_set_digest(ap.salt, contribs), ap);
  if (noisy > 0) out.push_back({node.ranges, noisy});
  leftover.clear();
}

inline WalkResult walk(const Forest& forest, const Tree& tree, const TreeNode& node) {
  WalkResult res;
  const AnonParams& ap = forest.anon_params();
  if (node.leaf) {
    if (suppress(node.contribs, node.seed, ap))
      res.leftover_rows = node.rows;  // precision loss, not data loss
    else
      res.buckets = refine_leaf(forest, tree, node);
    return res;
  }
  for (const auto& child : node.children) {
    if (!child || child->true_count == 0) continue;
    WalkResult sub = walk(forest, tree, *child);
    res.buckets.insert(res.buckets.end(), std::make_move_iterator(sub.buckets.begin()),
                       std::make_move_iterator(sub.buckets.end()));
    res.leftover_rows.insert(res.leftover_rows.end(), sub.leftover_rows.begin(),
                             sub.leftover_rows.end());
  }
  emit_merged(forest, tree, node, res.leftover_rows, res.buckets);
  return res;
}

}  // namespace detail

// Harvests the tree over the given columns into refined buckets. Suppressed
// leaves merge into the deepest unsuppressed ancestor's bucket; rows shed by
// root trimming merge at the root.
inline std::vector<RefinedBucket> harvest(const Forest& forest, std::vector<int> dims) {
  std::sort(dims.begin(), dims.end());
  const Tree* tree = forest.tree_for(dims);
  if (!tree) throw SchemaError("harvest: no tree for requested columns");
  detail::WalkResult res = detail::walk(forest, *tree, *tree->root);
  res.leftover_rows.insert(res.leftover_rows.end(), tree->overflow_rows.begin(),
                           tree->overflow_rows.end());
  if (!res.leftover_rows.empty()) {
    // last chance at the root; still-suppressed remnants are dropped
    PidContributions contribs = tree->contribs_of_rows(res.leftover_rows);
    const AnonParams& ap = forest.anon_params();
    std::uint64_t seed = sub_seed(tree->root->seed, "root.merge");
    if (!suppress(contribs, seed, ap)) {
      FlattenResult fl = flatten(contribs, seed, ap);
      long long noisy = noisy_count(fl.flattened_total, fl.top_group_mean, seed,
                                    pid_set_digest(ap.salt, contribs), ap);
      if (noisy > 0) res.buckets.push_back({tree->root->ranges, noisy});
    }
  }
  std::sort(res.buckets.begin(), res.buckets.end(), bucket_range_less);
  return res.buckets;
}

}  // namespace rangesynth

#endif
