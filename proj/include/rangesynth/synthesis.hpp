#ifndef RANGESYNTH_SYNTHESIS_HPP
#define RANGESYNTH_SYNTHESIS_HPP

#include <numeric>
#include <string>
#include <vector>

#include "rangesynth/forest.hpp"
#include "rangesynth/harvest.hpp"
#include "rangesynth/microdata.hpp"

namespace rangesynth {

struct SynthesisOptions {
  AnonParams anon;
  BuildParams build;
  std::string table_name = "table";
  int threads = 1;
  int max_dim = 3;  // widest direct synthesis before routing through sub-tables
};

struct SynthesisStats {
  std::size_t trees = 0;
  std::size_t buckets = 0;
  long long output_rows = 0;
  std::size_t suppressed_leaves = 0;
  std::size_t total_leaves = 0;
};

namespace detail {

inline void count_leaves(const Tree& tree, const TreeNode& node, const AnonParams& ap,
                         std::size_t& suppressed, std::size_t& total) {
  if (node.leaf) {
    ++total;
    if (suppress(node.contribs, node.seed, ap)) ++suppressed;
    return;
  }
  for (const auto& c : node.children)
    if (c && c->true_count > 0) count_leaves(tree, *c, ap, suppressed, total);
}

}  // namespace detail

// Direct synthesis of one column set: forest over every subset of the
// columns, harvest at full dimensionality, microdata from the buckets.
inline Table synthesize_columns(const Table& in, const std::vector<std::string>& columns,
                                const SynthesisOptions& opt, SynthesisStats* stats = nullptr) {
  Dataset ds = make_dataset(in, columns, opt.table_name);
  std::size_t k = columns.size();
  std::vector<std::vector<int>> subsets;
  for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
    std::vector<int> s;
    for (std::size_t i = 0; i < k; ++i)
      if (mask & (std::size_t{1} << i)) s.push_back(static_cast<int>(i));
    subsets.push_back(std::move(s));
  }
  Forest forest(ds, opt.build, opt.anon);
  forest.build(subsets, opt.threads);

  std::vector<int> all(k);
  std::iota(all.begin(), all.end(), 0);
  std::vector<RefinedBucket> buckets = harvest(forest, all);
  Table out = generate_microdata(buckets, ds, opt.anon.salt);

  if (stats) {
    stats->trees += forest.trees().size();
    stats->buckets += buckets.size();
    stats->output_rows += static_cast<long long>(out.rows.size());
    for (const auto& [dims, tree] : forest.trees())
      detail::count_leaves(*tree, *tree->root, opt.anon, stats->suppressed_leaves,
                           stats->total_leaves);
  }
  return out;
}

}  // namespace rangesynth

#endif
