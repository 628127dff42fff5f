#ifndef RANGESYNTH_ANON_HPP
#define RANGESYNTH_ANON_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "rangesynth/common.hpp"
#include "rangesynth/snapping.hpp"

namespace rangesynth {

struct AnonParams {
  std::string salt;
  double base_noise_sd = 1.0;
  double supp_mean = 5.0;
  double supp_sd = 1.0;
  int supp_floor = 3;
  int top_group_lo = 3, top_group_hi = 5;  // top contributors averaged for noise scale
  int flatten_lo = 1, flatten_hi = 2;      // extreme contributors flattened
};

// Per protected-entity type: rows contributed by each distinct PID.
struct PidContributions {
  std::vector<std::unordered_map<std::uint64_t, int>> per_entity;

  explicit PidContributions(std::size_t entity_types = 1) : per_entity(entity_types) {}

  void add_row(const std::vector<std::uint64_t>& pids) {
    for (std::size_t e = 0; e < per_entity.size(); ++e) ++per_entity[e][pids[e]];
  }
  void merge(const PidContributions& other) {
    for (std::size_t e = 0; e < per_entity.size(); ++e)
      for (auto [pid, cnt] : other.per_entity[e]) per_entity[e][pid] += cnt;
  }
  int total_rows() const {
    int n = 0;
    if (!per_entity.empty())
      for (auto [pid, cnt] : per_entity[0]) n += cnt;
    return n;
  }
  std::size_t min_distinct_pids() const {
    std::size_t m = SIZE_MAX;
    for (const auto& ent : per_entity) m = std::min(m, ent.size());
    return per_entity.empty() ? 0 : m;
  }
};

// Sticky seed of a bucket: digest of salt, table name, column names and the
// per-dimension snapped ranges. Identical bucket identity gives an identical
// seed across runs and across syntheses.
inline std::uint64_t bucket_seed(const std::string& salt, const std::string& table_name,
                                 const std::vector<std::string>& columns,
                                 const std::vector<SnappedRange>& ranges) {
  Digest d;
  d.str(salt).str(table_name);
  d.u64(columns.size());
  for (const auto& c : columns) d.str(c);
  d.u64(ranges.size());
  for (const auto& r : ranges) d.real(r.lo).real(r.size);
  return d.finish();
}

// Independent sub-stream for one purpose within a bucket.
inline std::uint64_t sub_seed(std::uint64_t seed, std::string_view purpose) {
  return Digest().u64(seed).str(purpose).finish();
}

inline double sticky_gaussian(std::uint64_t seed, double mean, double sd) {
  Rng rng(seed);
  return rng.gaussian(mean, sd);
}

// Sticky integer draw: gaussian centered on the bounds' midpoint, rounded and
// clamped into [lo, hi].
inline int sticky_int_in(std::uint64_t seed, int lo, int hi) {
  double mid = (lo + hi) / 2.0;
  double g = sticky_gaussian(seed, mid, 1.0);
  int v = static_cast<int>(std::floor(g + 0.5));
  return std::min(std::max(v, lo), hi);
}

// Digest over the bucket's distinct PIDs (all entity types), order-free.
inline std::uint64_t pid_set_digest(const std::string& salt, const PidContributions& contribs) {
  std::vector<std::uint64_t> pids;
  for (const auto& ent : contribs.per_entity)
    for (auto [pid, cnt] : ent) pids.push_back(mix64(pid));
  std::sort(pids.begin(), pids.end());
  Digest d;
  d.str(salt);
  for (auto p : pids) d.u64(p);
  return d.finish();
}

struct FlattenResult {
  double flattened_total = 0.0;
  double top_group_mean = 0.0;
};

namespace detail {

inline FlattenResult flatten_one(const std::unordered_map<std::uint64_t, int>& contrib,
                                 std::uint64_t seed, const AnonParams& p) {
  std::vector<std::pair<int, std::uint64_t>> sorted;  // (count, pid digest)
  sorted.reserve(contrib.size());
  double total = 0.0;
  for (auto [pid, cnt] : contrib) {
    sorted.emplace_back(cnt, mix64(pid));
    total += cnt;
  }
  // descending count; ties broken by pid digest so the order is deterministic
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });

  int n_e = sticky_int_in(sub_seed(seed, "flatten.extreme"), p.flatten_lo, p.flatten_hi);
  int n_t = sticky_int_in(sub_seed(seed, "flatten.top"), p.top_group_lo, p.top_group_hi);

  std::size_t extremes = std::min<std::size_t>(n_e, sorted.size());
  std::size_t top_begin = extremes;
  std::size_t top_end = std::min(top_begin + static_cast<std::size_t>(n_t), sorted.size());

  double tgm;
  if (top_end > top_begin) {
    double sum = 0.0;
    for (std::size_t i = top_begin; i < top_end; ++i) sum += sorted[i].first;
    tgm = sum / static_cast<double>(top_end - top_begin);
  } else {
    // too few PIDs to form a top group; fall back to the mean contribution
    tgm = sorted.empty() ? 0.0 : total / static_cast<double>(sorted.size());
  }

  double flattened = total;
  for (std::size_t i = 0; i < extremes; ++i)
    if (sorted[i].first > tgm) flattened -= sorted[i].first - tgm;
  return {flattened, tgm};
}

}  // namespace detail

// Flattening per entity type; with several types the most conservative result
// wins (smallest flattened total, largest noise scale).
inline FlattenResult flatten(const PidContributions& contribs, std::uint64_t seed,
                             const AnonParams& p) {
  FlattenResult out;
  bool first = true;
  for (const auto& ent : contribs.per_entity) {
    FlattenResult r = detail::flatten_one(ent, seed, p);
    if (first) {
      out = r;
      first = false;
    } else {
      out.flattened_total = std::min(out.flattened_total, r.flattened_total);
      out.top_group_mean = std::max(out.top_group_mean, r.top_group_mean);
    }
  }
  return out;
}

// Two sticky proportional-noise layers: one keyed by the bucket identity, one
// by the PID set. Equal sd, proportional to the flattened top-group mean.
inline long long noisy_count(double flattened_total, double top_group_mean, std::uint64_t seed,
                             std::uint64_t pid_digest, const AnonParams& p) {
  double sd = p.base_noise_sd * std::max(1.0, top_group_mean);
  double g1 = sticky_gaussian(sub_seed(seed, "noise"), 0.0, sd);
  double g2 = sticky_gaussian(sub_seed(pid_digest, "noise"), 0.0, sd);
  long long n = std::llround(flattened_total + g1 + g2);
  return n < 0 ? 0 : n;
}

// Sticky noisy low-count threshold; buckets whose distinct-PID count falls
// below it (for any entity type) are suppressed. A single distinct PID is
// always suppressed.
inline bool suppress(const PidContributions& contribs, std::uint64_t seed, const AnonParams& p) {
  double t = std::max(static_cast<double>(p.supp_floor),
                      sticky_gaussian(sub_seed(seed, "suppress"), p.supp_mean, p.supp_sd));
  for (const auto& ent : contribs.per_entity) {
    if (ent.size() <= 1) return true;
    if (static_cast<double>(ent.size()) < t) return true;
  }
  return contribs.per_entity.empty();
}

}  // namespace rangesynth

#endif
