#include "wks/gks.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "wks/errors.hpp"
#include "wks/parser_engine.hpp"
#include "wks/rng.hpp"

namespace wks {

// ---------------------------------------------------------------------------
// GksMetric.

void GksMetric::validate() const {
  if (sizes.empty()) throw invalid_input("GKS metric needs at least one space");
  for (std::int64_t s : sizes)
    if (s < 1) throw invalid_input("every GKS space needs at least one point");
}

PointId GksMetric::total() const {
  PointId t = 0;
  for (std::int64_t s : sizes) t += s;
  return t;
}

PointId GksMetric::offset(int space) const {
  if (space < 1 || space > k()) throw invalid_input("space index out of range");
  PointId o = 0;
  for (int i = 1; i < space; ++i) o += sizes[static_cast<std::size_t>(i - 1)];
  return o;
}

std::pair<PointId, PointId> GksMetric::range(int space) const {
  PointId lo = offset(space);
  return {lo, lo + sizes[static_cast<std::size_t>(space - 1)]};
}

int GksMetric::space_of(PointId global) const {
  PointId o = 0;
  for (int space = 1; space <= k(); ++space) {
    o += sizes[static_cast<std::size_t>(space - 1)];
    if (global < o) return space;
  }
  throw invalid_input("point " + std::to_string(global) + " outside the GKS metric");
}

std::int64_t GksMetric::index_of(PointId global) const {
  return global - offset(space_of(global));
}

PointId GksMetric::global(int space, std::int64_t index) const {
  if (index < 0 || index >= sizes[static_cast<std::size_t>(space - 1)])
    throw invalid_input("point index " + std::to_string(index) + " outside space " +
                        std::to_string(space));
  return offset(space) + index;
}

// ---------------------------------------------------------------------------
// Textual form.

std::string format_gks_request(const GksMetric& metric, const GksRequest& r) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i) out << ',';
    out << metric.index_of(r[i]);
  }
  out << ')';
  return out.str();
}

std::vector<GksRequest> parse_gks_requests(const std::string& text, const GksMetric& metric) {
  std::vector<GksRequest> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
      continue;
    }
    if (text[pos] != '(') throw invalid_input("expected '(' at position " + std::to_string(pos));
    std::size_t close = text.find(')', pos);
    if (close == std::string::npos) throw invalid_input("unterminated request tuple");
    std::string body = text.substr(pos + 1, close - pos - 1);
    GksRequest r;
    std::size_t start = 0;
    int space = 1;
    while (true) {
      std::size_t comma = body.find(',', start);
      std::string item =
          body.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (space > metric.k()) throw invalid_input("request tuple has too many components");
      try {
        r.push_back(metric.global(space, std::stoll(item)));
      } catch (const invalid_input&) {
        throw;
      } catch (const std::exception&) {
        throw invalid_input("bad tuple component '" + item + "'");
      }
      ++space;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (static_cast<int>(r.size()) != metric.k())
      throw invalid_input("request tuple has " + std::to_string(r.size()) + " components, need " +
                          std::to_string(metric.k()));
    out.push_back(std::move(r));
    pos = close + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// GksDomain.

GksDomain::GksDomain(GksMetric metric, WeightVector weights, Constants constants)
    : metric_(std::move(metric)), weights_(std::move(weights)), constants_(std::move(constants)) {
  metric_.validate();
  weights_.require_weight_constrained();
  if (metric_.k() != weights_.k())
    throw invalid_input("GKS metric space count disagrees with the number of weights");
}

bool GksDomain::satisfied(const AnchorSet& anchor, const Request& r) const {
  for (PointId component : r)
    if (anchor.contains(component)) return true;
  return false;
}

bool GksDomain::touches(PointId p, const Request& r) const {
  for (PointId component : r)
    if (component == p) return true;
  return false;
}

DemandVector GksDomain::leaf_demand(const Request& r) const {
  DemandVector v;
  for (PointId component : r) v.add(component, 1);
  return v;
}

std::pair<PointId, PointId> GksDomain::critical_range(int level) const {
  return metric_.range(level + 1);
}

void GksDomain::validate_request(const Request& r) const {
  if (static_cast<int>(r.size()) != k())
    throw invalid_input("request tuple size disagrees with the number of spaces");
  for (int space = 1; space <= k(); ++space) {
    auto [lo, hi] = metric_.range(space);
    PointId p = r[static_cast<std::size_t>(space - 1)];
    if (p < lo || p >= hi)
      throw invalid_input("request component " + std::to_string(p) + " outside space " +
                          std::to_string(space));
  }
}

void GksDomain::validate_anchor(int level, const AnchorSet& anchor) const {
  if (level < 1 || level > k()) throw invalid_input("level out of range");
  std::vector<int> seen(static_cast<std::size_t>(k()) + 1, 0);
  for (PointId p : anchor.pts) {
    if (p < 0 || p >= metric_.total())
      throw invalid_input("anchor point " + std::to_string(p) + " outside the GKS metric");
    int space = metric_.space_of(p);
    if (space <= level)
      throw invalid_input("anchor point " + std::to_string(p) +
                          " lies in a space at or below the level");
    if (++seen[static_cast<std::size_t>(space)] > 1)
      throw invalid_input("anchor holds two points of space " + std::to_string(space));
  }
}

bool GksDomain::covered(const Configuration& config, const Request& r) const {
  for (std::size_t i = 0; i < config.size() && i < r.size(); ++i)
    if (config[i] == r[i]) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Parsing and strategies.

namespace {

void validate_gks_config(const GksDomain& dom, const Configuration& c0) {
  if (static_cast<int>(c0.size()) != dom.k())
    throw invalid_input("configuration size disagrees with the number of spaces");
  for (int space = 1; space <= dom.k(); ++space) {
    auto [lo, hi] = dom.metric().range(space);
    PointId p = c0[static_cast<std::size_t>(space - 1)];
    if (p < lo || p >= hi)
      throw invalid_input("server " + std::to_string(space) + " placed outside its space");
  }
}

}  // namespace

PhaseParseResult gks_parse_phase(int level, const AnchorSet& anchor,
                                 const std::vector<GksRequest>& stream, const GksMetric& metric,
                                 const WeightVector& w, const Constants& constants) {
  GksDomain dom(metric, w, constants);
  return parse_phase_stream(dom, level, anchor, stream);
}

MultiphaseParseResult gks_parse_multiphase(int level, const AnchorSet& anchor,
                                           const std::vector<GksRequest>& stream,
                                           const GksMetric& metric, const WeightVector& w,
                                           const Constants& constants) {
  GksDomain dom(metric, w, constants);
  return parse_multiphase_stream(dom, level, anchor, stream);
}

RunResult gks_run_1_phase(const AnchorSet& anchor, const Configuration& c0,
                          const std::vector<GksRequest>& stream, const GksMetric& metric,
                          const WeightVector& w, const Constants& constants, std::uint64_t seed) {
  GksDomain dom(metric, w, constants);
  validate_gks_config(dom, c0);
  PhaseStrategy<GksDomain> strat(dom, 1, anchor, c0, Rng(seed));
  return run_strategy(dom, strat, stream);
}

RunResult gks_run_multiphase(int level, const AnchorSet& anchor, const Configuration& c0,
                             const std::vector<GksRequest>& stream, const GksMetric& metric,
                             const WeightVector& w, const Constants& constants,
                             std::uint64_t seed) {
  GksDomain dom(metric, w, constants);
  validate_gks_config(dom, c0);
  MultiphaseStrategy<GksDomain> strat(dom, level, anchor, c0, Rng(seed));
  return run_strategy(dom, strat, stream);
}

RunResult gks_run_phase(int level, const AnchorSet& anchor, const Configuration& c0,
                        const std::vector<GksRequest>& stream, const GksMetric& metric,
                        const WeightVector& w, const Constants& constants, std::uint64_t seed) {
  GksDomain dom(metric, w, constants);
  validate_gks_config(dom, c0);
  PhaseStrategy<GksDomain> strat(dom, level, anchor, c0, Rng(seed));
  return run_strategy(dom, strat, stream);
}

ServeReport gks_serve_online(const Configuration& c0, const std::vector<GksRequest>& stream,
                             const GksMetric& metric, const WeightVector& w,
                             const Constants& constants, std::uint64_t seed) {
  GksDomain dom(metric, w, constants);
  validate_gks_config(dom, c0);
  Rng rng(seed);
  ServeReport report;
  report.total_requests = stream.size();
  report.final_config = c0;

  Configuration current = c0;
  std::size_t pos = 0;
  int phase_index = 0;
  while (pos < stream.size()) {
    PhaseStrategy<GksDomain> strat(
        dom, dom.k(), AnchorSet{}, current,
        rng.fork(Rng::kForkTopPhase, static_cast<std::uint64_t>(phase_index)));
    std::vector<GksRequest> rest(stream.begin() + static_cast<std::ptrdiff_t>(pos), stream.end());
    RunResult run = run_strategy(dom, strat, rest);
    if (run.consumed == 0) throw invariant_violation("phase strategy consumed no requests");
    std::string tag = "t" + std::to_string(phase_index);
    for (TraceEntry& e : run.trace) {
      e.index += pos;
      e.path = e.path.empty() ? tag : tag + "/" + e.path;
      report.trace.push_back(std::move(e));
    }
    for (ExploitStats& st : run.exploit_stats) {
      st.path = st.path.empty() ? tag : tag + "/" + st.path;
      report.exploit_stats.push_back(std::move(st));
    }
    report.total_cost += run.cost;
    report.phase_costs.push_back(run.cost);
    report.phase_lengths.push_back(run.consumed);
    current = run.final_config;
    pos += run.consumed;
    if (run.status == RunStatus::Terminated) {
      ++report.completed_phases;
    } else {
      report.trailing_partial = true;
      break;
    }
    ++phase_index;
  }
  report.final_config = current;
  return report;
}

// ---------------------------------------------------------------------------
// Offline optimum.  Same normal-form argument as the weighted DP, per space:
// a move of the space-l server can be postponed to the first step whose
// coverage relies on it, which requests that exact point in component l.

OptResult gks_opt_cost(const std::vector<GksRequest>& stream, const WeightVector& w,
                       const GksMetric& metric, const std::optional<Configuration>& initial,
                       const OptOptions& options) {
  w.validate();
  metric.validate();
  if (metric.k() != w.k())
    throw invalid_input("GKS metric space count disagrees with the number of weights");
  const int k = w.k();
  GksDomain dom(metric, w, Constants::theoretical());
  for (const GksRequest& r : stream) dom.validate_request(r);
  if (initial) validate_gks_config(dom, *initial);
  const bool free_mode = !initial.has_value();
  const OptMode mode = free_mode ? OptMode::FreeInitial : OptMode::FixedInitial;

  if (stream.empty()) {
    Solution wit;
    Configuration c(static_cast<std::size_t>(k));
    if (initial) {
      c = *initial;
    } else {
      for (int space = 1; space <= k; ++space)
        c[static_cast<std::size_t>(space - 1)] = metric.offset(space);
    }
    wit.configs.push_back(std::move(c));
    return OptResult{Rat(0), std::move(wit), mode};
  }

  // Per-space candidate points.
  std::vector<std::vector<PointId>> pts(static_cast<std::size_t>(k));
  for (int s = 0; s < k; ++s) {
    if (initial) pts[static_cast<std::size_t>(s)].push_back((*initial)[static_cast<std::size_t>(s)]);
    for (const GksRequest& r : stream)
      pts[static_cast<std::size_t>(s)].push_back(r[static_cast<std::size_t>(s)]);
    auto& v = pts[static_cast<std::size_t>(s)];
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  std::vector<std::uint64_t> bases(static_cast<std::size_t>(k));
  std::vector<std::uint64_t> sentinels(static_cast<std::size_t>(k));
  Int space_count = 1;
  for (int s = 0; s < k; ++s) {
    sentinels[static_cast<std::size_t>(s)] = pts[static_cast<std::size_t>(s)].size();
    bases[static_cast<std::size_t>(s)] =
        pts[static_cast<std::size_t>(s)].size() + (free_mode ? 1 : 0);
    space_count *= Int(static_cast<unsigned long>(bases[static_cast<std::size_t>(s)]));
  }
  if (space_count > pow2(62))
    throw budget_exceeded("instance too large: configuration space does not fit a state key");

  auto encode = [&](const std::vector<std::size_t>& digits) {
    std::uint64_t key = 0;
    for (std::size_t i = digits.size(); i-- > 0;) key = key * bases[i] + digits[i];
    return key;
  };
  auto decode = [&](std::uint64_t key) {
    std::vector<std::size_t> digits(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      digits[static_cast<std::size_t>(i)] = key % bases[static_cast<std::size_t>(i)];
      key /= bases[static_cast<std::size_t>(i)];
    }
    return digits;
  };
  auto index_in = [&](int s, PointId p) {
    const auto& v = pts[static_cast<std::size_t>(s)];
    return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), p) - v.begin());
  };

  struct Entry {
    Rat cost;
    std::uint64_t prev = 0;
  };
  using Layer = std::map<std::uint64_t, Entry>;
  std::vector<Layer> layers(stream.size() + 1);

  std::vector<std::size_t> start(static_cast<std::size_t>(k));
  for (int s = 0; s < k; ++s)
    start[static_cast<std::size_t>(s)] =
        free_mode ? sentinels[static_cast<std::size_t>(s)]
                  : index_in(s, (*initial)[static_cast<std::size_t>(s)]);
  layers[0].emplace(encode(start), Entry{Rat(0), 0});
  std::size_t total_entries = 1;

  for (std::size_t i = 0; i < stream.size(); ++i) {
    std::vector<std::size_t> ri(static_cast<std::size_t>(k));
    for (int s = 0; s < k; ++s)
      ri[static_cast<std::size_t>(s)] = index_in(s, stream[i][static_cast<std::size_t>(s)]);
    Layer& next = layers[i + 1];
    auto relax = [&](std::uint64_t key, Rat cost, std::uint64_t prev) {
      auto it = next.find(key);
      if (it == next.end()) {
        next.emplace(key, Entry{std::move(cost), prev});
        if (++total_entries > options.max_dp_entries)
          throw budget_exceeded("instance too large for the OPT table budget of " +
                                std::to_string(options.max_dp_entries) + " entries");
      } else if (cost < it->second.cost) {
        it->second = Entry{std::move(cost), prev};
      }
    };
    for (const auto& [key, entry] : layers[i]) {
      auto digits = decode(key);
      bool covered = false;
      for (int s = 0; s < k && !covered; ++s)
        covered = digits[static_cast<std::size_t>(s)] == ri[static_cast<std::size_t>(s)];
      if (covered) {
        relax(key, entry.cost, key);
        continue;
      }
      for (int s = 0; s < k; ++s) {
        auto moved = digits;
        moved[static_cast<std::size_t>(s)] = ri[static_cast<std::size_t>(s)];
        Rat extra =
            (free_mode && digits[static_cast<std::size_t>(s)] == sentinels[static_cast<std::size_t>(s)])
                ? Rat(0)
                : w.at(s + 1);
        relax(encode(moved), entry.cost + extra, key);
      }
    }
  }

  const Layer& last = layers.back();
  auto best = last.begin();
  for (auto it = std::next(last.begin()); it != last.end(); ++it)
    if (it->second.cost < best->second.cost) best = it;

  std::vector<std::uint64_t> path(stream.size() + 1);
  path.back() = best->first;
  for (std::size_t i = stream.size(); i >= 1; --i)
    path[i - 1] = layers[i].at(path[i]).prev;

  std::vector<std::vector<std::size_t>> states;
  states.reserve(path.size());
  for (std::uint64_t key : path) states.push_back(decode(key));
  for (int s = 0; s < k; ++s) {
    std::size_t resolved = 0;
    for (const auto& digits : states)
      if (digits[static_cast<std::size_t>(s)] != sentinels[static_cast<std::size_t>(s)]) {
        resolved = digits[static_cast<std::size_t>(s)];
        break;
      }
    for (auto& digits : states) {
      if (digits[static_cast<std::size_t>(s)] == sentinels[static_cast<std::size_t>(s)])
        digits[static_cast<std::size_t>(s)] = resolved;
      else
        break;
    }
  }
  Solution wit;
  for (const auto& digits : states) {
    Configuration c(static_cast<std::size_t>(k));
    for (int s = 0; s < k; ++s)
      c[static_cast<std::size_t>(s)] =
          pts[static_cast<std::size_t>(s)][digits[static_cast<std::size_t>(s)]];
    wit.configs.push_back(std::move(c));
  }

  OptResult out{best->second.cost, std::move(wit), mode};
  if (solution_cost(out.witness, w) != out.cost)
    throw invariant_violation("OPT witness cost disagrees with the DP value");
  for (std::size_t i = 0; i < stream.size(); ++i)
    if (!dom.covered(out.witness.configs[i + 1], stream[i]))
      throw invariant_violation("OPT witness misses a request");
  return out;
}

// ---------------------------------------------------------------------------
// Lifting.

GksMetric lift_metric(const Metric& metric, int k) {
  if (k < 1) throw invalid_input("need at least one space");
  GksMetric gks;
  gks.sizes.assign(static_cast<std::size_t>(k), metric.n_points);
  gks.validate();
  return gks;
}

GksRequest lift_request(const GksMetric& gks, PointId p) {
  GksRequest r;
  r.reserve(static_cast<std::size_t>(gks.k()));
  for (int space = 1; space <= gks.k(); ++space) r.push_back(gks.global(space, p));
  return r;
}

std::vector<GksRequest> lift_requests(const GksMetric& gks, const RequestSequence& stream) {
  std::vector<GksRequest> out;
  out.reserve(stream.size());
  for (PointId p : stream) out.push_back(lift_request(gks, p));
  return out;
}

Configuration lift_configuration(const GksMetric& gks, const Configuration& c) {
  Configuration out;
  out.reserve(c.size());
  for (int space = 1; space <= static_cast<int>(c.size()); ++space)
    out.push_back(gks.global(space, c[static_cast<std::size_t>(space - 1)]));
  return out;
}

}  // namespace wks
