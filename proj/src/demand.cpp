#include "wks/demand.hpp"

#include <algorithm>

namespace wks {

void DemandVector::add(PointId p, std::int64_t amount) {
  if (amount == 0) return;
  auto [it, inserted] = counts.try_emplace(p, amount);
  if (!inserted) {
    it->second += amount;
    if (it->second == 0) counts.erase(it);
  }
}

void DemandVector::add(const DemandVector& other) {
  for (const auto& [p, c] : other.counts) add(p, c);
}

std::int64_t DemandVector::norm() const {
  std::int64_t total = 0;
  for (const auto& [p, c] : counts) total += c;
  return total;
}

std::int64_t DemandVector::norm_in_range(PointId range_lo, PointId range_hi) const {
  std::int64_t total = 0;
  for (auto it = counts.lower_bound(range_lo); it != counts.end() && it->first < range_hi; ++it)
    total += it->second;
  return total;
}

std::string DemandVector::str() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [p, c] : counts) {
    if (!first) out += ",";
    first = false;
    out += std::to_string(p) + ":" + std::to_string(c);
  }
  return out + "}";
}

std::vector<PointId> top_d_in_range(const DemandVector& v, const Int& d, PointId range_lo,
                                    PointId range_hi) {
  if (d < 0) throw invalid_input("top_d: negative d");
  Int available = range_hi - range_lo;
  if (available < d)
    throw metric_too_small("critical set needs " + d.get_str() + " points but only " +
                           available.get_str() + " are available");
  // d <= number of points from here on, so it fits a size_t at desk scale.
  std::size_t want = static_cast<std::size_t>(d.get_ui());

  std::vector<std::pair<PointId, std::int64_t>> positive;
  for (const auto& [p, c] : v.counts)
    if (p >= range_lo && p < range_hi && c > 0) positive.emplace_back(p, c);
  std::sort(positive.begin(), positive.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  std::vector<PointId> out;
  out.reserve(want);
  for (const auto& [p, c] : positive) {
    if (out.size() == want) break;
    out.push_back(p);
  }
  // Fill with zero-demand points in index order (they compare below every positive
  // count and among themselves by index).
  for (PointId p = range_lo; p < range_hi && out.size() < want; ++p) {
    if (v[p] > 0) continue;  // already ranked (or skipped) above
    out.push_back(p);
  }
  return out;
}

std::vector<PointId> top_d(const DemandVector& v, const Int& d, const Metric& metric) {
  return top_d_in_range(v, d, 0, metric.n_points);
}

}  // namespace wks
