#include "wks/phase_tree.hpp"

#include <sstream>

namespace wks {

std::vector<PointId> PhaseTree::critical() const {
  if (level == 1) return {critical_point};
  return critical_set;
}

namespace {

void append_id_set(std::ostringstream& out, const std::vector<PointId>& ids) {
  out << '{';
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out << ',';
    out << ids[i];
  }
  out << '}';
}

void emit(std::ostringstream& out, const PhaseTree& t);
void emit(std::ostringstream& out, const MultiphaseTree& t);

void emit(std::ostringstream& out, const PhaseTree& t) {
  out << "(phase " << t.level << " H=" << t.anchor.str() << " [" << t.begin << ','
      << t.end << ')';
  if (t.level == 1) {
    out << " p=" << t.critical_point << ')';
    return;
  }
  out << " explore=";
  emit(out, *t.explore);
  out << " exploit={";
  for (std::size_t i = 0; i < t.exploit.size(); ++i) {
    if (i) out << ',';
    out << t.exploit[i].first << '=';
    emit(out, *t.exploit[i].second);
  }
  out << "})";
}

void emit(std::ostringstream& out, const MultiphaseTree& t) {
  out << "(multiphase " << t.level << " H=" << t.anchor.str() << " [" << t.begin << ','
      << t.end << ") S=";
  append_id_set(out, t.critical_set);
  for (const auto& child : t.children) {
    out << ' ';
    emit(out, *child);
  }
  out << ')';
}

}  // namespace

std::string to_canonical(const PhaseTree& tree) {
  std::ostringstream out;
  emit(out, tree);
  return out.str();
}

std::string to_canonical(const MultiphaseTree& tree) {
  std::ostringstream out;
  emit(out, tree);
  return out.str();
}

DemandVector recompute_demand(const PhaseTree& tree) {
  // Leaf demand is defined by the game (a single unit vector for point
  // requests, one unit per component for tuples), so leaves keep their stored
  // value; recomputation checks that every internal node aggregates its
  // children correctly.
  if (tree.level == 1) return tree.demand;
  DemandVector v;
  v.add(recompute_demand(*tree.explore));
  for (const auto& [p, sub] : tree.exploit) v.add(recompute_demand(*sub));
  return v;
}

DemandVector recompute_demand(const MultiphaseTree& tree) {
  DemandVector v;
  for (const auto& child : tree.children) v.add(recompute_demand(*child));
  return v;
}

}  // namespace wks
