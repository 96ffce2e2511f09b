#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "lipflow/oracle.hpp"
#include "lipflow/plap.hpp"

using namespace lipflow;
using namespace lipflow::oracle;

namespace {

PotentialSpec linear_f(double slope) {
  return PotentialSpec::custom_piecewise({}, {PolyPiece{{0.0, slope}}}, 2.0, 3.0, 1.0, 1.0);
}

}  // namespace

TEST_CASE("shooting: linear problem without a nontrivial solution") {
  auto zero = PotentialSpec::custom_piecewise({}, {PolyPiece{{}}}, 4.0, 3.0, 1.0, 1.0);
  Problem prob{make_mesh(99, 1.0), 2.0, 0.0, zero};
  auto r = integrate_ivp(prob, 2.0);
  CHECK(r.u.back() == doctest::Approx(2.0));
  CHECK(r.at(0.25) == doctest::Approx(0.5));
  CHECK_THROWS_AS(shoot(prob, 0, 0.5, 2.0), std::invalid_argument);
}

TEST_CASE("shooting in eigen-check mode") {
  const double pi = std::numbers::pi;
  Problem at{make_mesh(99, 1.0), 2.0, 0.0, linear_f(pi * pi)};
  CHECK(integrate_ivp(at, 1.0).boundary_miss < 1e-9);
  Problem at2{make_mesh(99, 1.0), 2.0, 0.0, linear_f(4 * pi * pi)};
  auto r2 = integrate_ivp(at2, 1.0);
  CHECK(r2.boundary_miss < 1e-8);
  CHECK(r2.node_count == 1);
  Problem off{make_mesh(99, 1.0), 2.0, 0.0, linear_f(1.2 * pi * pi)};
  CHECK(integrate_ivp(off, 1.0).boundary_miss > 0.05);
  // the discrete spectrum converges to the same values
  Mesh m = make_mesh(199, 1.0);
  CHECK(eigen_first(2.0, m).lambda == doctest::Approx(pi * pi).epsilon(1e-3));
  CHECK(eigen_second_1d(2.0, m).lambda == doctest::Approx(4 * pi * pi).epsilon(1e-3));
  CHECK(shoot_eigenvalue(2.0, 1.0, 1, 20.0, 60.0) == doctest::Approx(4 * pi * pi).epsilon(1e-10));
}

TEST_CASE("shooting crosses breakpoints of the jump potential") {
  Mesh m = make_mesh(199, 1.0);
  Problem prob{m, 2.0, 0.5 * eigen_first(2.0, m).lambda, PotentialSpec::jump_derivative(4.0)};
  auto br = find_slope_bracket(prob, 0, 1e-2, 100.0, 200);
  REQUIRE(br.has_value());
  auto r = shoot(prob, 0, br->first, br->second);
  CHECK(r.boundary_miss < 1e-10);
  CHECK(r.node_count == 0);
  CHECK(r.breakpoint_crossings == 2);
  CHECK(r.on_mesh(m).min() > 0.0);
}

TEST_CASE("brute-force slopes for a quadratic") {
  auto sp = SmallProblem::quadratic({1.0, 2.0});
  std::vector<double> x{0.5, 0.5};
  CHECK(brute_m(sp, x) == doctest::Approx(std::hypot(0.5, 1.5)));
  CHECK(brute_m(sp, {1.0, 2.0}) == 0.0);
  CHECK(brute_mP(sp, {1.0, 2.0}) == 0.0);
  // boundary point: m > 0 forces m_P > 0
  const std::vector<double> xb{0.0, 1.0};
  const double m = brute_m(sp, xb);
  const double mp = brute_mP(sp, xb);
  CHECK(m > 0.0);
  CHECK(mp >= std::min(0.5, m) * m - kGridTolerance);
}

TEST_CASE("closed-form cone support agrees with dense sampling") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int k = 0; k < 40; ++k) {
    const int d = 2 + k % 2;
    std::vector<double> c(d), x(d);
    for (int i = 0; i < d; ++i) {
      c[i] = 2.0 * U(rng);
      x[i] = std::abs(U(rng)) * (k % 3 == 0 && i == 0 ? 0.0 : 1.0);
    }
    const int sign = k % 4 < 2 ? 1 : -1;
    if (sign < 0)
      for (auto& v : x) v = -v;
    const double exact = cone_ball_support(c, x, sign);
    const double sampled = cone_ball_support_sampled(c, x, sign, d == 2 ? 201 : 61);
    CAPTURE(k);
    CHECK(sampled <= exact + 1e-9);
    CHECK(sampled >= exact - 1e-3);
  }
}

TEST_CASE("invariance condition examples") {
  auto inside = SmallProblem::quadratic({1.0, 0.5});
  for (auto x : std::vector<std::vector<double>>{{0.0, 0.0}, {0.0, 1.0}, {3.0, 0.0}}) {
    auto v = check_invariance_condition(inside, x, 1);
    CHECK(v.on_boundary);
    CHECK(v.schauder);
    CHECK(v.outward);
  }
  auto outside = SmallProblem::quadratic({-1.0, -0.5});
  auto v0 = check_invariance_condition(outside, {0.0, 0.0}, 1);
  CHECK_FALSE(v0.schauder);
  // mirrored problem on the negative cone
  auto mirrored = SmallProblem::quadratic({-1.0, -0.5});
  CHECK(check_invariance_condition(mirrored, {0.0, -1.0}, -1).schauder);
}

TEST_CASE("slope suite: zero violations and thread-independent") {
  auto samples = make_slope_samples(42, 2000);
  auto a = run_slope_suite(samples);
  auto b = run_slope_suite_serial(samples);
  CHECK(a.passed());
  CHECK(a.samples == 2000);
  CHECK(a.zero_slope_samples > 0);
  CHECK(a.boundary_samples > 0);
  CHECK(a.inequality_violations == b.inequality_violations);
  CHECK(a.min_margin == b.min_margin);
  CHECK(a.schauder_premise == b.schauder_premise);
}

TEST_CASE("small problem validation") {
  SmallProblem sp = SmallProblem::quadratic({1.0, 1.0});
  sp.c[0] = -1.0;
  CHECK_THROWS_AS(sp.validate(), std::invalid_argument);
}
