#ifndef RANGESYNTH_FOREST_HPP
#define RANGESYNTH_FOREST_HPP

#include <algorithm>
#include <atomic>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "rangesynth/anon.hpp"
#include "rangesynth/common.hpp"
#include "rangesynth/schema.hpp"
#include "rangesynth/snapping.hpp"

namespace rangesynth {

struct BuildParams {
  int depth_limit = 15;
  double min_branch_fraction = 1.0 / 10000.0;  // of total row count N
  int subnode_min_nonsingularity = 15;
  int subnode_min_singularity = 5;
};

// Cast view of the table: one real value per cell, PID hashes per row.
struct Dataset {
  std::string table_name = "table";
  std::vector<std::string> column_names;
  std::vector<ColumnMeta> metas;
  std::vector<std::vector<double>> values;  // [column][row]
  std::vector<double> null_codes;
  std::vector<SnappedRange> roots;  // per column: extended when nulls present
  std::vector<std::vector<std::uint64_t>> row_pids;  // [row][entity type]
  std::size_t entity_types = 1;

  std::size_t row_count() const { return values.empty() ? 0 : values[0].size(); }
};

// Builds the cast matrix for the named columns. Each column's root is the
// smallest snapped range over its cast values, doubled to admit the null code
// when the column contains nulls.
inline Dataset make_dataset(const Table& t, const std::vector<std::string>& columns,
                            const std::string& table_name = "table") {
  Dataset ds;
  ds.table_name = table_name;
  ds.column_names = columns;
  if (t.rows.empty()) throw SchemaError("empty table");
  for (const auto& name : columns) {
    int ci = t.column_index(name);
    const ColumnMeta& meta = t.columns[ci];
    ds.metas.push_back(meta);

    // First pass: min/max of non-null cast values (null code not needed yet).
    double mn = 0, mx = 0;
    bool any = false, any_null = false;
    for (const auto& row : t.rows) {
      if (is_null(row[ci])) {
        any_null = true;
        continue;
      }
      double x = cast_to_real(row[ci], meta, 0.0);
      if (!any) {
        mn = mx = x;
        any = true;
      } else {
        mn = std::min(mn, x);
        mx = std::max(mx, x);
      }
    }
    SnappedRange data_root = any ? snap_covering(mn, mx) : SnappedRange{0.0, 1.0};
    NullPlacement np = null_code_for_column(data_root);
    ds.null_codes.push_back(np.null_code);
    ds.roots.push_back(any_null ? np.extended_root : data_root);

    std::vector<double> col;
    col.reserve(t.rows.size());
    for (const auto& row : t.rows)
      col.push_back(cast_to_real(row[ci], meta, np.null_code));
    ds.values.push_back(std::move(col));
  }

  ds.entity_types = t.pid_columns.empty() ? 1 : t.pid_columns.size();
  ds.row_pids.resize(t.rows.size());
  if (t.pid_columns.empty()) {
    // survey-style data: one synthetic PID per row
    for (std::size_t r = 0; r < t.rows.size(); ++r) ds.row_pids[r] = {static_cast<std::uint64_t>(r)};
  } else {
    std::vector<int> pid_idx;
    for (const auto& name : t.pid_columns) pid_idx.push_back(t.column_index(name));
    for (std::size_t r = 0; r < t.rows.size(); ++r)
      for (int ci : pid_idx)
        ds.row_pids[r].push_back(hash_str(value_to_string(t.rows[r][ci])));
  }
  return ds;
}

struct TreeNode {
  std::vector<SnappedRange> ranges;
  int depth = 0;
  std::uint64_t seed = 0;
  long long true_count = 0;
  bool leaf = true;
  std::vector<int> rows;          // leaves only
  PidContributions contribs;      // leaves only (branches drop theirs on split)
  std::vector<bool> dim_singular;
  std::vector<double> sing_values;
  std::vector<std::unique_ptr<TreeNode>> children;   // 2^n slots when branch
  std::vector<const TreeNode*> subnodes;             // n links, may be null

  explicit TreeNode(std::size_t dims, std::size_t entity_types)
      : contribs(entity_types), dim_singular(dims, true), sing_values(dims, 0.0) {}

  bool singular() const {
    if (true_count == 0) return false;
    for (bool s : dim_singular)
      if (!s) return false;
    return true;
  }

  // Released per-dimension ranges: singular dimensions collapse to the value.
  std::vector<SnappedRange> released_ranges() const {
    std::vector<SnappedRange> out = ranges;
    for (std::size_t d = 0; d < out.size(); ++d)
      if (dim_singular[d] && true_count > 0) out[d] = singularity(sing_values[d]);
    return out;
  }
};

class Tree {
public:
  std::vector<int> dims;  // column indices into the dataset, ascending
  std::unique_ptr<TreeNode> root;
  std::vector<int> overflow_rows;  // rows shed by root trimming

  Tree(const Dataset& ds, std::vector<int> dims_, std::vector<const Tree*> lower,
       std::vector<SnappedRange> root_ranges, const BuildParams& bp, const AnonParams& ap)
      : dims(std::move(dims_)), ds_(&ds), lower_(std::move(lower)), bp_(bp), ap_(ap) {
    n_ = dims.size();
    min_branch_rows_ = std::max(1.0, static_cast<double>(ds.row_count()) * bp.min_branch_fraction);
    for (int d : dims) col_names_.push_back(ds.column_names[d]);
    root = make_node(std::move(root_ranges), 0);
    if (!lower_.empty())
      for (std::size_t i = 0; i < n_; ++i)
        root->subnodes[i] = lower_[i] ? lower_[i]->root.get() : nullptr;
  }

  void build() {
    for (std::size_t r = 0; r < ds_->row_count(); ++r) insert(static_cast<int>(r));
  }

  // While exactly one root child would be suppressed, promote the other child
  // to root. The suppressed side's rows are kept as overflow and merge into
  // the root bucket at harvest time. 1-dim trees only.
  void trim_root() {
    while (!root->leaf) {
      const TreeNode* c0 = root->children[0].get();
      const TreeNode* c1 = root->children[1].get();
      bool s0 = would_suppress(c0);
      bool s1 = would_suppress(c1);
      if (s0 == s1) break;
      std::unique_ptr<TreeNode> keep = std::move(root->children[s0 ? 1 : 0]);
      std::unique_ptr<TreeNode> drop = std::move(root->children[s0 ? 0 : 1]);
      if (drop) collect_rows(*drop, overflow_rows);
      root = std::move(keep);
    }
  }

  const Dataset& dataset() const { return *ds_; }
  const AnonParams& anon_params() const { return ap_; }

  // Deepest node whose ranges equal a descent to the given per-dim ranges;
  // null when the tree never branched that far.
  const TreeNode* find_node(const std::vector<SnappedRange>& ranges) const {
    const TreeNode* node = root.get();
    for (;;) {
      if (node->ranges == ranges) return node;
      if (node->leaf) return nullptr;
      std::size_t idx = 0;
      for (std::size_t i = 0; i < n_; ++i) {
        double probe = ranges[i].is_singularity() ? ranges[i].value() : ranges[i].midpoint();
        if (probe >= node->ranges[i].midpoint()) idx |= std::size_t{1} << i;
      }
      node = node->children[idx].get();
      if (!node) return nullptr;
    }
  }

  static void collect_rows(const TreeNode& node, std::vector<int>& out) {
    if (node.leaf) {
      out.insert(out.end(), node.rows.begin(), node.rows.end());
      return;
    }
    for (const auto& c : node.children)
      if (c) collect_rows(*c, out);
  }

  PidContributions contribs_of_rows(const std::vector<int>& rows) const {
    PidContributions c(ds_->entity_types);
    for (int r : rows) c.add_row(ds_->row_pids[r]);
    return c;
  }

  bool would_suppress(const TreeNode* node) const {
    if (!node || node->true_count == 0) return true;
    std::vector<int> rows;
    collect_rows(*node, rows);
    return suppress(contribs_of_rows(rows), node->seed, ap_);
  }

private:
  const Dataset* ds_;
  std::vector<const Tree*> lower_;
  BuildParams bp_;
  AnonParams ap_;
  std::size_t n_ = 0;
  double min_branch_rows_ = 1.0;
  std::vector<std::string> col_names_;

  double value(int row, std::size_t dim) const { return ds_->values[dims[dim]][row]; }

  std::unique_ptr<TreeNode> make_node(std::vector<SnappedRange> ranges, int depth) {
    auto node = std::make_unique<TreeNode>(n_, ds_->entity_types);
    node->seed = bucket_seed(ap_.salt, ds_->table_name, col_names_, ranges);
    node->ranges = std::move(ranges);
    node->depth = depth;
    node->subnodes.assign(lower_.empty() ? 0 : n_, nullptr);
    return node;
  }

  std::size_t child_index(const TreeNode& node, int row) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n_; ++i)
      if (value(row, i) >= node.ranges[i].midpoint()) idx |= std::size_t{1} << i;
    return idx;
  }

  void note_row(TreeNode& node, int row) {
    ++node.true_count;
    for (std::size_t i = 0; i < n_; ++i) {
      double x = value(row, i);
      if (node.true_count == 1)
        node.sing_values[i] = x;
      else if (node.dim_singular[i] && node.sing_values[i] != x)
        node.dim_singular[i] = false;
    }
  }

  TreeNode& child_for(TreeNode& node, std::size_t idx) {
    auto& slot = node.children[idx];
    if (!slot) {
      std::vector<SnappedRange> cr(n_);
      for (std::size_t i = 0; i < n_; ++i) {
        auto [lo, hi] = halves(node.ranges[i]);
        cr[i] = (idx >> i) & 1 ? hi : lo;
      }
      slot = make_node(std::move(cr), node.depth + 1);
      if (!lower_.empty())
        for (std::size_t i = 0; i < n_; ++i) {
          const TreeNode* sub = node.subnodes[i];
          if (sub && !sub->leaf) {
            // drop bit i from the child index to get the subnode's child index
            std::size_t low = idx & ((std::size_t{1} << i) - 1);
            std::size_t high = (idx >> (i + 1)) << i;
            slot->subnodes[i] = sub->children[low | high].get();
          }
        }
    }
    return *slot;
  }

  void insert(int row) {
    TreeNode* node = root.get();
    for (;;) {
      note_row(*node, row);
      if (node->leaf) {
        node->rows.push_back(row);
        node->contribs.add_row(ds_->row_pids[row]);
        maybe_split(*node);
        return;
      }
      std::size_t idx = child_index(*node, row);
      TreeNode& child = child_for(*node, idx);
      if (child.true_count == 0) {
        // fresh child leaf: add the row and stop
        note_row(child, row);
        child.rows.push_back(row);
        child.contribs.add_row(ds_->row_pids[row]);
        return;
      }
      node = &child;
    }
  }

  void maybe_split(TreeNode& leaf) {
    if (leaf.singular()) return;
    // cannot halve ranges past double resolution
    for (const auto& r : leaf.ranges)
      if (r.size / 2.0 == 0.0 || r.lo + r.size / 2.0 == r.lo) return;
    if (leaf.depth > bp_.depth_limit &&
        static_cast<double>(leaf.rows.size()) < min_branch_rows_)
      return;
    if (!lower_.empty()) {
      for (std::size_t i = 0; i < n_; ++i) {
        const TreeNode* sub = leaf.subnodes[i];
        long long cnt = sub ? sub->true_count : 0;
        int threshold = (sub && sub->singular()) ? bp_.subnode_min_singularity
                                                 : bp_.subnode_min_nonsingularity;
        if (cnt < threshold) return;
      }
    }
    if (suppress(leaf.contribs, leaf.seed, ap_)) return;

    leaf.leaf = false;
    leaf.children.resize(std::size_t{1} << n_);
    std::vector<int> rows = std::move(leaf.rows);
    leaf.rows.clear();
    leaf.contribs = PidContributions(ds_->entity_types);
    for (int r : rows) {
      TreeNode& child = child_for(leaf, child_index(leaf, r));
      note_row(child, r);
      child.rows.push_back(r);
      child.contribs.add_row(ds_->row_pids[r]);
    }
  }
};

// Trees for every requested column combination, built in dimension order so
// that subnode links always point into finished lower trees. Trees within one
// dimension level are independent and build in parallel.
class Forest {
public:
  Forest(const Dataset& ds, BuildParams bp, AnonParams ap)
      : ds_(&ds), bp_(bp), ap_(ap) {}

  void build(const std::vector<std::vector<int>>& subsets, int threads = 1) {
    std::vector<std::vector<int>> ordered;
    for (auto s : subsets) {
      std::sort(s.begin(), s.end());
      ordered.push_back(std::move(s));
    }
    std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
      if (a.size() != b.size()) return a.size() < b.size();
      return a < b;
    });
    ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());

    // closure check: every sub-subset one dimension down must be present
    std::vector<std::string> missing;
    for (const auto& s : ordered) {
      if (s.size() < 2) continue;
      for (std::size_t i = 0; i < s.size(); ++i) {
        std::vector<int> sub = s;
        sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(i));
        if (std::find(ordered.begin(), ordered.end(), sub) == ordered.end())
          missing.push_back(subset_name(sub));
      }
    }
    if (!missing.empty()) {
      std::string msg = "column subset family not closed; missing:";
      for (const auto& m : missing) msg += " " + m;
      throw SchemaError(msg);
    }

    std::size_t max_level = 0;
    for (const auto& s : ordered) max_level = std::max(max_level, s.size());
    for (std::size_t level = 1; level <= max_level; ++level) {
      std::vector<const std::vector<int>*> todo;
      for (const auto& s : ordered)
        if (s.size() == level) todo.push_back(&s);
      if (!todo.empty()) build_level(todo, threads);
    }
  }

  const Tree* tree_for(std::vector<int> dims) const {
    std::sort(dims.begin(), dims.end());
    auto it = trees_.find(dims);
    return it == trees_.end() ? nullptr : it->second.get();
  }

  const std::map<std::vector<int>, std::unique_ptr<Tree>>& trees() const { return trees_; }
  const Dataset& dataset() const { return *ds_; }
  const AnonParams& anon_params() const { return ap_; }

private:
  const Dataset* ds_;
  BuildParams bp_;
  AnonParams ap_;
  std::map<std::vector<int>, std::unique_ptr<Tree>> trees_;

  std::string subset_name(const std::vector<int>& s) const {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i)
      out += (i ? "," : "") + ds_->column_names[s[i]];
    return out + "}";
  }

  std::unique_ptr<Tree> build_one(const std::vector<int>& dims) {
    std::vector<const Tree*> lower;
    std::vector<SnappedRange> root_ranges;
    if (dims.size() == 1) {
      root_ranges.push_back(ds_->roots[dims[0]]);
    } else {
      for (std::size_t i = 0; i < dims.size(); ++i) {
        std::vector<int> sub = dims;
        sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(i));
        lower.push_back(tree_for(sub));
      }
      for (int d : dims) root_ranges.push_back(tree_for({d})->root->ranges[0]);
    }
    auto tree = std::make_unique<Tree>(*ds_, dims, std::move(lower), std::move(root_ranges),
                                       bp_, ap_);
    tree->build();
    if (dims.size() == 1) tree->trim_root();
    return tree;
  }

  void build_level(const std::vector<const std::vector<int>*>& todo, int threads) {
    std::vector<std::unique_ptr<Tree>> built(todo.size());
    int workers = std::max(1, std::min<int>(threads, static_cast<int>(todo.size())));
    if (workers == 1) {
      for (std::size_t i = 0; i < todo.size(); ++i) built[i] = build_one(*todo[i]);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
          for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= todo.size()) return;
            built[i] = build_one(*todo[i]);
          }
        });
      for (auto& th : pool) th.join();
    }
    for (std::size_t i = 0; i < todo.size(); ++i) trees_[*todo[i]] = std::move(built[i]);
  }
};

}  // namespace rangesynth

#endif
