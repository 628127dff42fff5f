#ifndef RANGESYNTH_SNAPPING_HPP
#define RANGESYNTH_SNAPPING_HPP

#include <cmath>
#include <compare>
#include <stdexcept>
#include <utility>

namespace rangesynth {

// Half-open interval [lo, lo+size) whose size is a power of two and whose
// offset is an integer multiple of the size, or a single exact value when
// size == 0.
struct SnappedRange {
  double lo = 0.0;
  double size = 0.0;

  bool is_singularity() const { return size == 0.0; }
  double hi() const { return lo + size; }
  double value() const { return lo; }
  double midpoint() const { return lo + size / 2.0; }

  bool contains(double x) const {
    return is_singularity() ? x == lo : (x >= lo && x < hi());
  }

  friend bool operator==(const SnappedRange&, const SnappedRange&) = default;
  friend auto operator<=>(const SnappedRange&, const SnappedRange&) = default;
};

inline SnappedRange singularity(double v) { return {v, 0.0}; }

// Smallest snapped range covering both endpoints. Degenerate input
// (min == max) yields the size-1 range at floor(value).
inline SnappedRange snap_covering(double min_v, double max_v) {
  if (!std::isfinite(min_v) || !std::isfinite(max_v))
    throw std::invalid_argument("snap_covering: non-finite input");
  if (min_v > max_v) throw std::invalid_argument("snap_covering: min > max");
  if (min_v == max_v) return {std::floor(min_v), 1.0};

  if (min_v < 0.0 && max_v >= 0.0) {
    // No strictly aligned power-of-two range can span zero. The root becomes
    // [-s, s): its offset is aligned to half its size, and its halves are
    // strictly aligned again.
    double s = std::ldexp(1.0, static_cast<int>(std::floor(std::log2(std::max(-min_v, max_v)))));
    while (!(-s <= min_v && max_v < s)) s *= 2.0;
    return {-s, 2.0 * s};
  }

  int k = static_cast<int>(std::floor(std::log2(max_v - min_v)));
  for (;;) {
    double size = std::ldexp(1.0, k);
    double lo = std::floor(min_v / size) * size;
    if (max_v < lo + size) return {lo, size};
    ++k;
  }
}

inline std::pair<SnappedRange, SnappedRange> halves(const SnappedRange& r) {
  if (r.is_singularity()) throw std::invalid_argument("halves: singularity has no halves");
  double h = r.size / 2.0;
  return {{r.lo, h}, {r.lo + h, h}};
}

// The null code of a column is the first value beyond its data root; the
// extended root is the smallest snapped range covering both data and code.
struct NullPlacement {
  double null_code;
  SnappedRange extended_root;
};

inline NullPlacement null_code_for_column(const SnappedRange& data_root) {
  if (data_root.is_singularity())
    throw std::invalid_argument("null_code_for_column: degenerate root");
  double code = data_root.hi();
  // smallest snapped range covering the whole root plus the code
  return {code, snap_covering(data_root.lo, code)};
}

}  // namespace rangesynth

#endif
