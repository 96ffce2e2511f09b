#include "doctest.h"

#include <cmath>
#include <numbers>

#include "lipflow/commands.hpp"
#include "lipflow/functional.hpp"
#include "lipflow/plap.hpp"

using namespace lipflow;

TEST_CASE("phi of a sine with the quartic potential") {
  Mesh m = make_mesh(999, 1.0);
  const double pi = std::numbers::pi;
  Problem prob{m, 2.0, 1.0, PotentialSpec::smooth_power(4.0)};
  GridFn u = GridFn::sample(m, [&](double x) { return std::sin(pi * x); });
  // 1/2 * pi^2/2 - 1/2 * 1/2 - int sin^4/4 = pi^2/4 - 1/4 - 3/32
  CHECK(phi(prob, u) == doctest::Approx(pi * pi / 4 - 0.25 - 3.0 / 32).epsilon(1e-5));
  CHECK(phi(prob, GridFn(999)) == 0.0);
}

TEST_CASE("selections stay inside the Clarke interval") {
  Mesh m = make_mesh(5, 1.0);
  Problem prob{m, 2.0, 1.0, PotentialSpec::jump_derivative(4.0)};
  GridFn u(std::vector<double>{0.5, 1.0, 1.0, -1.0, 2.0});
  for (auto rule : {SelectionRule::min_norm, SelectionRule::midpoint, SelectionRule::lower, SelectionRule::upper}) {
    auto w = select_w(prob, u, rule);
    CHECK(is_valid_selection(prob, u, w));
  }
  auto lo = select_w(prob, u, SelectionRule::lower);
  auto hi = select_w(prob, u, SelectionRule::upper);
  CHECK(lo.w[1] == doctest::Approx(1.0));
  CHECK(hi.w[1] == doctest::Approx(2.0));
  CHECK(selection_rule_from_string("midpoint") == SelectionRule::midpoint);
}

TEST_CASE("min-norm residual is the smallest strong residual") {
  Mesh m = make_mesh(41, 1.0);
  Problem prob{m, 2.0, 3.0, PotentialSpec::jump_derivative(4.0)};
  GridFn u = GridFn::sample(m, [](double x) { return 1.0 + 0.5 * std::sin(7 * x); });
  u[5] = 1.0;
  u[9] = 1.0;
  const double rmin = residual_m(prob, u);
  for (auto rule : {SelectionRule::midpoint, SelectionRule::lower, SelectionRule::upper}) {
    GridFn g = subdiff_element(prob, u, select_w(prob, u, rule));
    CHECK(rmin <= norm_h(g, m) + 1e-12);
  }
}

TEST_CASE("eigenfunction is critical for the pure eigenvalue problem") {
  Mesh m = make_mesh(99, 1.0);
  auto e1 = eigen_first(2.0, m);
  auto zero = PotentialSpec::custom_piecewise({}, {PolyPiece{{}}}, 4.0, 3.0, 1.0, 1.0);
  Problem prob{m, 2.0, e1.lambda, zero};
  CHECK(residual_m(prob, e1.u) < 1e-8);
}

TEST_CASE("gradient consistency on smooth specs") {
  Mesh m = make_mesh(199, 1.0);
  for (double p : {2.0, 3.0}) {
    Problem prob{m, p, 2.0, PotentialSpec::smooth_power(4.0)};
    auto gc = props::gradient_consistency(prob, 50, 99);
    CAPTURE(p);
    CHECK(gc.failures == 0);
    CHECK(gc.max_rel_error < 1e-4);
  }
}

TEST_CASE("problem validation") {
  Problem bad{make_mesh(9, 1.0), 1.0, 1.0, PotentialSpec::smooth_power(4.0)};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
