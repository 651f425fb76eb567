#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "wattcast/numeric.hpp"
#include "wattcast/power.hpp"

using namespace wattcast;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::InvalidArgument;
}

PowerFunction eight_point_table() {
  return PowerFunction::table({{0, 0},
                               {0.5, 0.25},
                               {1, 1},
                               {1.5, 2.25},
                               {2, 4},
                               {3, 9},
                               {4, 16},
                               {5, 25}});
}

}  // namespace

TEST_CASE("validation accepts convex curves and names the violated condition") {
  CHECK_NOTHROW(PowerFunction::monomial(2));
  CHECK_NOTHROW(PowerFunction::monomial(3));
  CHECK_NOTHROW(PowerFunction::monomial(1.5));
  CHECK(code_of([] { PowerFunction::monomial(0.5); }) == Errc::NotConvex);
  CHECK(code_of([] { PowerFunction::monomial(1.0); }) == Errc::NotConvex);
  CHECK(code_of([] { PowerFunction::monomial(-1.0); }) == Errc::NotIncreasing);
  CHECK(code_of([] { PowerFunction::monomial(0.0); }) == Errc::NonZeroAtOrigin);

  CHECK_NOTHROW(PowerFunction::polynomial({0, 1}));        // s^2
  CHECK_NOTHROW(PowerFunction::polynomial({1, 0, 1}));     // s + s^3
  CHECK(code_of([] { PowerFunction::polynomial({1}); }) == Errc::NotConvex);
  CHECK(code_of([] { PowerFunction::polynomial({}); }) == Errc::NotIncreasing);
  CHECK(code_of([] { PowerFunction::polynomial({0, 0}); }) == Errc::NotIncreasing);
  CHECK(code_of([] { PowerFunction::polynomial({2, -1}); }) == Errc::NotIncreasing);

  CHECK_NOTHROW(eight_point_table());
  CHECK(code_of([] { PowerFunction::table({}); }) == Errc::EmptyTable);
  CHECK(code_of([] { PowerFunction::table({{0, 0}, {1, 1}, {2, 1.5}}); }) == Errc::NotConvex);
  CHECK(code_of([] { PowerFunction::table({{0, 0}, {1, 1}, {2, 2}}); }) == Errc::NotConvex);
  CHECK(code_of([] { PowerFunction::table({{0.5, 1}, {1, 2}}); }) == Errc::NonZeroAtOrigin);
  CHECK(code_of([] { PowerFunction::table({{0, 0}, {1, 2}, {1, 3}}); }) == Errc::NotIncreasing);
  CHECK(code_of([] { PowerFunction::table({{0, 0}, {1, 2}, {2, 1}}); }) == Errc::NotIncreasing);
}

TEST_CASE("power_at") {
  PowerFunction sq = PowerFunction::monomial(2);
  CHECK(sq(3) == 9);
  CHECK(PowerFunction::monomial(3)(0) == 0);
  CHECK(PowerFunction::polynomial({0, 1, 0, 1})(1) == 2);  // s^2 + s^4 at 1

  PowerFunction tbl = eight_point_table();
  CHECK(tbl(1) == 1);
  CHECK(tbl(2.5) == doctest::Approx(6.5).epsilon(1e-12));   // interpolation
  CHECK(tbl(6) == doctest::Approx(34).epsilon(1e-12));      // extension at last slope 9

  PowerFunction capped = PowerFunction::monomial(2, 1.5);
  CHECK(capped(1.5) == doctest::Approx(2.25));
  CHECK(code_of([&] { capped(2.0); }) == Errc::SpeedAboveCap);
}

TEST_CASE("speed_at_power closed form and bisection") {
  PowerFunction sq = PowerFunction::monomial(2);
  CHECK(sq.inverse(4) == 2);
  CHECK(sq.inverse(0) == 0);
  CHECK(eight_point_table().inverse(0) == 0);

  // s^2 + s^4 = 2 has the analytic root s = 1.
  PowerFunction mix = PowerFunction::polynomial({0, 1, 0, 1});
  CHECK(mix.inverse(2) == doctest::Approx(1.0).epsilon(1e-12));

  PowerFunction capped = PowerFunction::monomial(2, 2.0);
  CHECK(capped.inverse(4) == doctest::Approx(2.0));
  CHECK(code_of([&] { capped.inverse(5); }) == Errc::PowerAboveCapRange);
}

TEST_CASE("round trip P(Q(y)) = y on a log grid") {
  std::vector<PowerFunction> funcs;
  funcs.push_back(PowerFunction::monomial(2));
  funcs.push_back(PowerFunction::monomial(3));
  funcs.push_back(PowerFunction::polynomial({0, 1, 0, 1}));
  funcs.push_back(eight_point_table());
  for (const PowerFunction& p : funcs) {
    for (double ly = -3; ly <= 6.0 + 1e-9; ly += 0.05) {
      double y = std::pow(10.0, ly);
      double q = p.inverse(y);
      CHECK(std::abs(p(q) - y) <= 1e-9 * std::max(1.0, y));
    }
  }
}

TEST_CASE("monomial fast path agrees with generic bisection") {
  PowerFunction mono2 = PowerFunction::monomial(2);
  PowerFunction poly2 = PowerFunction::polynomial({0, 1});
  PowerFunction mono3 = PowerFunction::monomial(3);
  PowerFunction poly3 = PowerFunction::polynomial({0, 0, 1});
  for (double y : {1e-3, 0.5, 1.0, 7.0, 123.0, 4e5}) {
    CHECK(std::abs(mono2.inverse(y) - poly2.inverse(y)) <= 1e-9 * std::max(1.0, mono2.inverse(y)));
    CHECK(std::abs(mono3.inverse(y) - poly3.inverse(y)) <= 1e-9 * std::max(1.0, mono3.inverse(y)));
  }
}

TEST_CASE("Q is nondecreasing and scales concavely") {
  std::mt19937_64 rng(7);
  for (const PowerFunction& p :
       {PowerFunction::monomial(2), PowerFunction::polynomial({1, 2, 3}), eight_point_table()}) {
    SpeedInverse q(p);
    double prev = 0;
    for (double y = 0; y <= 50; y += 0.5) {
      double v = q(y);
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
    for (int i = 0; i < 200; ++i) {
      double y = 100 * uniform01(rng);
      double lam = uniform01(rng);
      CHECK(lam * q(y) <= q(lam * y) + 1e-9);
    }
  }
}

TEST_CASE("concavity properties of Q") {
  SpeedInverse q_sq(PowerFunction::monomial(2));  // Q = sqrt
  auto one = check_concavity_props(q_sq, {{4.0, 1.0}});
  CHECK(one.pass());
  CHECK(one.checks[0].ratio_lhs == doctest::Approx(0.75));
  CHECK(one.checks[0].ratio_rhs == doctest::Approx(std::sqrt(3.0) / 2.0));

  auto quarter = check_concavity_props(q_sq, {{4.0, 0.25}});
  CHECK(quarter.pass());
  CHECK(quarter.checks[0].scale_lhs == doctest::Approx(0.5));
  CHECK(quarter.checks[0].scale_rhs == doctest::Approx(1.0));

  // 1000 pseudorandom pairs on Q from s^3.
  std::mt19937_64 rng(11);
  std::vector<std::pair<double, double>> pairs;
  for (int i = 0; i < 1000; ++i) {
    pairs.emplace_back(1.0 + 999.0 * uniform01(rng), 1.0 - uniform01(rng) * 0.999);
  }
  auto report = check_concavity_props(SpeedInverse(PowerFunction::monomial(3)), pairs);
  CHECK(report.violations == 0);
}

TEST_CASE("grammar parse and describe round-trip") {
  PowerFunction p1 = PowerFunction::parse("monomial 2\n");
  CHECK(p1(3) == 9);
  PowerFunction p2 = PowerFunction::parse("poly 0 1 0 1\n");
  CHECK(p2(1) == 2);
  PowerFunction p3 = PowerFunction::parse("table 0,0;1,1;2,4\ncap 2\n");
  CHECK(p3(2) == 4);
  CHECK(code_of([&] { p3(3); }) == Errc::SpeedAboveCap);
  PowerFunction back = PowerFunction::parse(p3.describe());
  CHECK(back(1.5) == p3(1.5));
  CHECK(code_of([] { PowerFunction::parse("monomial 0.5\n"); }) == Errc::NotConvex);
  CHECK(code_of([] { PowerFunction::parse("wavelet 2\n"); }) == Errc::SyntaxError);
}
