// Exact-arithmetic foundations: rationals, weights, demand vectors, solution
// costs, and the derived constant tables.  Expected values were frozen from
// independent hand/oracle computation, not from running the library.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wks/constants.hpp"
#include "wks/demand.hpp"
#include "wks/errors.hpp"
#include "wks/metric.hpp"
#include "wks/rational.hpp"
#include "wks/solution.hpp"
#include "wks/weights.hpp"

using namespace wks;

TEST_CASE("rational parsing and formatting") {
  CHECK(to_string(parse_rational("7")) == "7");
  CHECK(to_string(parse_rational("-3/6")) == "-1/2");
  CHECK(to_string(parse_rational("4/2")) == "2");
  CHECK_THROWS_AS(parse_rational(""), invalid_input);
  CHECK_THROWS_AS(parse_rational("1/0"), invalid_input);
  CHECK_THROWS_AS(parse_rational("a"), invalid_input);
  CHECK_THROWS_AS(parse_rational("1.5"), invalid_input);
  CHECK_THROWS_AS(parse_rational("2/"), invalid_input);
}

TEST_CASE("rational helpers") {
  CHECK(floor_int(Rat(7, 2)) == 3);
  CHECK(ceil_int(Rat(7, 2)) == 4);
  CHECK(floor_int(Rat(-7, 2)) == -4);
  CHECK(ceil_int(Rat(-7, 2)) == -3);
  CHECK(ceil_to_multiple(Rat(5), Rat(3)) == Rat(6));
  CHECK(ceil_to_multiple(Rat(6), Rat(3)) == Rat(6));
  CHECK(ceil_to_multiple(Rat(5, 7), Rat(1, 3)) == Rat(1));
  CHECK(pow2(10) == 1024);
  CHECK(to_decimal(Rat(1, 3), 4) == "0.3333");
  CHECK(to_decimal(Rat(-5, 2), 2) == "-2.50");
  CHECK(to_decimal(Rat(2), 0) == "2");
}

TEST_CASE("metric and request parsing") {
  Metric m{4};
  CHECK(m.contains(0));
  CHECK(m.contains(3));
  CHECK(!m.contains(4));
  CHECK(!m.contains(-1));
  CHECK_THROWS_AS(m.require(4), invalid_input);
  CHECK_THROWS_AS((Metric{0}.require(0)), invalid_input);

  RequestSequence r = parse_requests("3 0\n2 1  3");
  CHECK(r == RequestSequence{3, 0, 2, 1, 3});
  CHECK(format_requests(r) == "3 0 2 1 3");
  CHECK(parse_requests("").empty());
  CHECK_THROWS_AS(parse_requests("1 x"), invalid_input);
  // requests are whitespace-separated; commas belong to configurations only
  CHECK_THROWS_AS(parse_requests("2,1"), invalid_input);

  Configuration c = parse_configuration("2,5");
  CHECK(c == Configuration{2, 5});
  CHECK(format_configuration(c) == "2,5");
}

TEST_CASE("anchor sets") {
  AnchorSet h;
  CHECK(h.empty());
  CHECK(h.str() == "{}");
  AnchorSet h2 = h.with(3).with(1).with(3);
  CHECK(h2.size() == 2);
  CHECK(h2.contains(1));
  CHECK(h2.contains(3));
  CHECK(!h2.contains(0));
  CHECK(h2.str() == "{1,3}");
  CHECK(h2 == AnchorSet{}.with(1).with(3));
}

TEST_CASE("weight vector validation") {
  WeightVector w{{Rat(1), Rat(2)}};
  w.validate();
  CHECK(w.k() == 2);
  CHECK(w.at(1) == 1);
  CHECK(w.at(2) == 2);
  CHECK_THROWS_AS(w.at(0), invalid_input);
  CHECK_THROWS_AS(w.at(3), invalid_input);

  CHECK_THROWS_AS((WeightVector{{}}.validate()), invalid_input);
  CHECK_THROWS_AS((WeightVector{{Rat(0)}}.validate()), invalid_input);
  CHECK_THROWS_AS((WeightVector{{Rat(2), Rat(1)}}.validate()), invalid_input);

  CHECK(WeightVector{{Rat(1), Rat(2), Rat(4)}}.is_weight_constrained());
  CHECK(WeightVector{{Rat(1), Rat(3), Rat(6)}}.is_weight_constrained());
  // Ratio below 2.
  CHECK(!WeightVector{{Rat(1), Rat(3), Rat(4)}}.is_weight_constrained());
  // Not a multiple.
  CHECK(!WeightVector{{Rat(2), Rat(5)}}.is_weight_constrained());
  CHECK(WeightVector{{Rat(1), Rat(2)}}.ratio(1) == 2);
  CHECK(WeightVector{{Rat(1, 3), Rat(2), Rat(8)}}.ratio(1) == 6);
}

TEST_CASE("weight rounding examples") {
  auto round3 = [](const char* a, const char* b, const char* c) {
    return round_weights(
        WeightVector{{parse_rational(a), parse_rational(b), parse_rational(c)}});
  };
  CHECK(round3("1", "3", "4").w == std::vector<Rat>{Rat(1), Rat(3), Rat(6)});
  CHECK(round3("1", "2", "4").w == std::vector<Rat>{Rat(1), Rat(2), Rat(4)});
  CHECK(round3("1", "1", "1").w == std::vector<Rat>{Rat(1), Rat(2), Rat(4)});
  CHECK(round3("1/3", "1/2", "5/7").w == std::vector<Rat>{Rat(1, 3), Rat(2, 3), Rat(4, 3)});
  CHECK(round_weights(WeightVector{{Rat(5)}}).w == std::vector<Rat>{Rat(5)});
}

TEST_CASE("weight rounding rejects bad input") {
  CHECK_THROWS_AS(round_weights(WeightVector{{Rat(1), Rat(1, 2)}}), invalid_input);
  CHECK_THROWS_AS(round_weights(WeightVector{{Rat(-1), Rat(2)}}), invalid_input);
}

TEST_CASE("demand vectors") {
  DemandVector v;
  CHECK(v.norm() == 0);
  CHECK(v.str() == "{}");
  v.add(3, 2);
  v.add(1, 1);
  v.add(3, 1);
  CHECK(v.norm() == 4);
  CHECK(v[3] == 3);
  CHECK(v[1] == 1);
  CHECK(v[0] == 0);
  CHECK(v.str() == "{1:1,3:3}");
  CHECK(v.norm_in_range(0, 2) == 1);
  CHECK(v.norm_in_range(2, 9) == 3);

  DemandVector u;
  u.add(1, 2);
  v.add(u);
  CHECK(v[1] == 3);
}

TEST_CASE("top_d selection") {
  Metric m{20};
  DemandVector v;

  v.add(0, 3);
  v.add(1, 1);
  CHECK(top_d(v, Int(1), m) == std::vector<PointId>{0});

  DemandVector tie;
  tie.add(0, 2);
  tie.add(1, 2);
  tie.add(2, 2);
  CHECK(top_d(tie, Int(2), m) == std::vector<PointId>{0, 1});

  // Zero-demand points fill the remaining slots in index order.
  DemandVector sparse;
  sparse.add(5, 1);
  CHECK(top_d(sparse, Int(3), m) == std::vector<PointId>{5, 0, 1});

  CHECK_THROWS_AS(top_d(v, Int(21), m), metric_too_small);
  CHECK_THROWS_AS(top_d(v, Int(-1), m), invalid_input);
  CHECK(top_d_in_range(sparse, Int(2), 3, 9) == std::vector<PointId>{5, 3});
}

TEST_CASE("solution cost and activity") {
  WeightVector w{{Rat(1), Rat(2)}};
  Solution none{{{0, 1}, {0, 1}, {0, 1}}};
  CHECK(solution_cost(none, w) == 0);
  Solution one_light{{{0, 1}, {2, 1}}};
  CHECK(solution_cost(one_light, w) == 1);
  Solution both_twice{{{0, 1}, {2, 3}, {0, 1}}};
  CHECK(solution_cost(both_twice, w) == 6);

  CHECK(is_l_active(Solution{{{0, 1}}}, 0));
  CHECK(is_l_active(one_light, 1));
  CHECK(!is_l_active(one_light, 0));
  Solution heavy_moves{{{0, 1}, {0, 2}}};
  CHECK(is_l_active(heavy_moves, 2));
  CHECK(!is_l_active(heavy_moves, 1));

  CHECK(move_cost({0, 1}, {2, 1}, w) == 1);
  CHECK(move_cost({0, 1}, {2, 3}, w) == 3);
  CHECK(moved_servers({0, 1}, {2, 1}) == std::vector<int>{1});
  CHECK(moved_servers({0, 1}, {2, 3}) == std::vector<int>{1, 2});
  CHECK_THROWS_AS(move_cost({0, 1}, {0}, w), invalid_input);
}

TEST_CASE("harmonic numbers") {
  CHECK(harmonic(0) == 0);
  CHECK(harmonic(1) == 1);
  CHECK(harmonic(2) == Rat(3, 2));
  CHECK(harmonic(15) == Rat(1195757, 360360));
}

TEST_CASE("default constant table") {
  Constants c = Constants::theoretical();
  CHECK(c.d(1) == 1);
  CHECK(c.d(2) == 16);
  CHECK(c.d(3) == pow2(24));
  CHECK(c.d(4) == pow2(124));

  CHECK(c.c(1) == 1);
  CHECK(c.c(2) == Rat(1) + Rat(3) * Rat(1195757, 360360));
  CHECK(c.c(2) == Rat(1315877, 120120));
  CHECK(c.c_closed_form(2) == c.c(2));
  // c(3) needs h(2^24 - 1), which is beyond the exact-arithmetic budget.
  CHECK_THROWS_AS(c.c(3), budget_exceeded);

  CHECK(c.F(1, 5) == 1);
  CHECK(c.F(2, 2) == 8);
  CHECK(c.F(2, 3) == 16);
  CHECK(c.F(3, 3) == 2048);
  CHECK_THROWS_AS(c.F(3, 2), invalid_input);
  CHECK_THROWS_AS(c.F(0, 1), invalid_input);

  for (int level = 2; level <= 6; ++level) CHECK(c.d(level) >= 2 * c.F(level, level));
}

TEST_CASE("override constant profiles") {
  Constants c = Constants::with_d_profile({Int(1), Int(2), Int(2)});
  CHECK(c.d(2) == 2);
  CHECK(c.c(2) == 4);  // (1 + h(1))·1 + 2·h(1) with h(1) = 1
  CHECK(c.c_closed_form(2) == 4);
  CHECK(c.c(3) == c.c_closed_form(3));
  CHECK_THROWS_AS(Constants::with_d_profile({Int(2)}), invalid_input);   // d_1 must be 1
  CHECK_THROWS_AS(Constants::with_d_profile({Int(1), Int(0)}), invalid_input);
}

TEST_CASE("closed form matches recurrence on varied profiles") {
  // The closed form c_l = 3·prod(1 + h(d_i - 1)) - 2 must agree with the
  // recurrence c_l = (1 + h(d_l - 1))·c_{l-1} + 2·h(d_l - 1) exactly.
  std::vector<std::vector<Int>> profiles = {
      {Int(1), Int(2), Int(3), Int(4), Int(5), Int(6)},
      {Int(1), Int(16), Int(7), Int(2), Int(100), Int(3)},
      {Int(1), Int(2), Int(2), Int(2), Int(2), Int(2)},
  };
  for (const auto& profile : profiles) {
    Constants c = Constants::with_d_profile(profile);
    for (int level = 1; level <= 6; ++level) CHECK(c.c(level) == c.c_closed_form(level));
  }
}

TEST_CASE("critical size guards against small metrics") {
  Constants c = Constants::with_d_profile({Int(1), Int(4)});
  CHECK(c.critical_size(2, Metric{5}) == 3);
  CHECK_THROWS_AS(c.critical_size(2, Metric{2}), metric_too_small);
}
