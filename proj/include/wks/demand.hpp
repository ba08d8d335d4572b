#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wks/metric.hpp"
#include "wks/rational.hpp"

namespace wks {

// Sparse vector of integer request-demand counts, indexed by point.
// Zero entries are never stored.
struct DemandVector {
  std::map<PointId, std::int64_t> counts;

  std::int64_t operator[](PointId p) const {
    auto it = counts.find(p);
    return it == counts.end() ? 0 : it->second;
  }

  void add(PointId p, std::int64_t amount);
  void add(const DemandVector& other);

  // |v| = sum of all coordinates.
  std::int64_t norm() const;

  // Sum of coordinates for points in [range_lo, range_hi); the norm of the
  // projection of v onto that point range.
  std::int64_t norm_in_range(PointId range_lo, PointId range_hi) const;

  bool operator==(const DemandVector& other) const { return counts == other.counts; }

  // "{p:c, p:c, ...}" with entries in index order.
  std::string str() const;
};

// The d largest coordinates of v among candidate points [range_lo, range_hi),
// ties and zero-demand fill resolved by smaller index first. Result is sorted by
// (count desc, index asc). Throws metric_too_small if the range has < d points.
std::vector<PointId> top_d_in_range(const DemandVector& v, const Int& d, PointId range_lo,
                                    PointId range_hi);

// Same over the whole metric.
std::vector<PointId> top_d(const DemandVector& v, const Int& d, const Metric& metric);

}  // namespace wks
