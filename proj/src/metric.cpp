#include "wks/metric.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace wks {

namespace {

PointId parse_point(const std::string& tok) {
  if (tok.empty()) throw invalid_input("empty point index");
  for (std::size_t i = 0; i < tok.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(tok[i])))
      throw invalid_input("bad point index: '" + tok + "'");
  try {
    return std::stoll(tok);
  } catch (const std::exception&) {
    throw invalid_input("point index out of range: '" + tok + "'");
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

AnchorSet AnchorSet::of(std::vector<PointId> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return AnchorSet{std::move(points)};
}

bool AnchorSet::contains(PointId p) const {
  return std::binary_search(pts.begin(), pts.end(), p);
}

AnchorSet AnchorSet::with(PointId p) const {
  if (contains(p)) return *this;
  auto copy = pts;
  copy.insert(std::upper_bound(copy.begin(), copy.end(), p), p);
  return AnchorSet{std::move(copy)};
}

std::string AnchorSet::str() const {
  std::string out = "{";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(pts[i]);
  }
  return out + "}";
}

RequestSequence parse_requests(const std::string& text) {
  RequestSequence reqs;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) reqs.push_back(parse_point(tok));
  return reqs;
}

std::string format_requests(const RequestSequence& reqs) {
  std::string out;
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(reqs[i]);
  }
  return out;
}

Configuration parse_configuration(const std::string& text) {
  Configuration c;
  for (const auto& tok : split(text, ',')) c.push_back(parse_point(tok));
  return c;
}

std::string format_configuration(const Configuration& c) {
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(c[i]);
  }
  return out;
}

}  // namespace wks
