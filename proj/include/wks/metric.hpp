#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wks/errors.hpp"

namespace wks {

// Points of a uniform metric are dense integer indices 0..n-1.
// All tie-breaking in the library is by index order.
using PointId = std::int64_t;

struct Metric {
  PointId n_points = 0;

  bool contains(PointId p) const { return p >= 0 && p < n_points; }
  void require(PointId p) const {
    if (!contains(p))
      throw invalid_input("point " + std::to_string(p) + " outside metric of size " +
                          std::to_string(n_points));
  }
};

// A configuration is a k-tuple of points; entry i is the position of server i+1
// (servers are 1-based in prose, 0-based in storage). Several servers may share a point.
using Configuration = std::vector<PointId>;

// A sorted duplicate-free set of points, used for phase anchors (the set H that a
// phase treats as already covered). Small (at most k-1 entries).
struct AnchorSet {
  std::vector<PointId> pts;

  static AnchorSet of(std::vector<PointId> points);
  bool contains(PointId p) const;
  AnchorSet with(PointId p) const;  // copy with one more point
  std::size_t size() const { return pts.size(); }
  bool empty() const { return pts.empty(); }
  bool operator==(const AnchorSet&) const = default;
  std::string str() const;  // "{1,3}"
};

using RequestSequence = std::vector<PointId>;

// Textual encodings (see README): requests are whitespace-separated indices,
// configurations comma-separated k-tuples.
RequestSequence parse_requests(const std::string& text);
std::string format_requests(const RequestSequence& reqs);

Configuration parse_configuration(const std::string& text);
std::string format_configuration(const Configuration& c);

}  // namespace wks
