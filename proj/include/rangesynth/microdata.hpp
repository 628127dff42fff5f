#ifndef RANGESYNTH_MICRODATA_HPP
#define RANGESYNTH_MICRODATA_HPP

#include <vector>

#include "rangesynth/common.hpp"
#include "rangesynth/harvest.hpp"
#include "rangesynth/schema.hpp"

namespace rangesynth {

// Seeded stream for one purpose; tag separation keeps microdata sampling
// independent of the noise layers.
inline Rng seeded_rng(const std::string& salt, std::string_view purpose) {
  return Rng(Digest().str(salt).str(purpose).finish());
}

namespace detail {

inline Rng bucket_rng(const std::string& salt, const RefinedBucket& b) {
  Digest d;
  d.str(salt).str("microdata");
  for (const auto& r : b.ranges) d.real(r.lo).real(r.size);
  return Rng(d.finish());
}

}  // namespace detail

// Materializes synthetic rows from harvested buckets: `count` rows per
// bucket, each dimension sampled uniformly from its range (singularities
// reproduce the exact value), then cast back to the column type. Rows are
// shuffled so bucket order leaves no trace in the output.
inline Table generate_microdata(const std::vector<RefinedBucket>& buckets, const Dataset& ds,
                                const std::string& salt) {
  Table out;
  for (std::size_t c = 0; c < ds.metas.size(); ++c) {
    ColumnMeta m = ds.metas[c];
    m.pid_role = false;
    out.columns.push_back(std::move(m));
  }
  for (const auto& b : buckets) {
    if (b.ranges.size() != ds.metas.size())
      throw std::logic_error("generate_microdata: bucket dimensionality mismatch");
    Rng rng = detail::bucket_rng(salt, b);
    for (long long i = 0; i < b.count; ++i) {
      std::vector<Value> row(ds.metas.size());
      for (std::size_t d = 0; d < ds.metas.size(); ++d) {
        const SnappedRange& r = b.ranges[d];
        double x = r.is_singularity() ? r.value() : rng.uniform(r.lo, r.hi());
        row[d] = cast_back(x, ds.metas[d], r, ds.null_codes[d], rng);
      }
      out.rows.push_back(std::move(row));
    }
  }
  Rng shuffle_rng = seeded_rng(salt, "microdata.shuffle");
  shuffle_rng.shuffle(out.rows);
  return out;
}

}  // namespace rangesynth

#endif
