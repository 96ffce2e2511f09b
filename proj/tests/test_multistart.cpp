#include "doctest.h"

#include <cmath>
#include <numbers>

#include "lipflow/multistart.hpp"

using namespace lipflow;

namespace {

struct Fixture {
  Mesh m = make_mesh(99, 1.0);
  EigenPair e1 = eigen_first(2.0, m);
  EigenPair e2 = eigen_second_1d(2.0, m);
  Problem prob{m, 2.0, 0.5 * e1.lambda, PotentialSpec::smooth_power(4.0)};
};

}  // namespace

TEST_CASE("plane directions are unit and exact on the u1 axis") {
  Fixture f;
  auto d = plane_direction(f.e1, f.e2, 0.7, 2.0, f.m);
  CHECK(norm_w1p(d.u, 2.0, f.m) == doctest::Approx(1.0));
  auto a = plane_point(f.e1, f.e2, -1.0, 0.0, 2.0, f.m);
  auto b = plane_point(f.e1, f.e2, 1.0, 0.0, 2.0, f.m);
  CHECK(sup_distance(a.u, -b.u) == 0.0);
  auto c = plane_direction(f.e1, f.e2, std::numbers::pi, 2.0, f.m);
  CHECK(sup_distance(c.u, a.u) < 1e-14);
}

TEST_CASE("escape radius along u1") {
  Fixture f;
  auto dir = plane_direction(f.e1, f.e2, 0.0, 2.0, f.m);
  auto r = ray_escape_radius(f.prob, dir, FlowConfig{}, MultistartConfig{});
  REQUIRE(r.ok);
  CHECK(r.t_lo < r.t_hi);
  CHECK(r.t_hi - r.t_lo <= MultistartConfig{}.bisect_tol * 1.0001);
  CHECK(captured_from(f.prob, r.t_lo * dir.u, FlowConfig{}));
  CHECK_FALSE(captured_from(f.prob, r.t_hi * dir.u, FlowConfig{}));
}

TEST_CASE("sweep is identical with and without threads") {
  Fixture f;
  std::vector<double> thetas{0.3, 1.9, 3.5, 5.1};
  auto a = sweep_rays(f.prob, f.e1, f.e2, thetas, FlowConfig{}, MultistartConfig{});
  auto b = sweep_rays_serial(f.prob, f.e1, f.e2, thetas, FlowConfig{}, MultistartConfig{});
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].t_star == b[i].t_star);
    CHECK(a[i].outcome == b[i].outcome);
    CHECK(a[i].best_residual == b[i].best_residual);
  }
}

TEST_CASE("three solutions on a coarse mesh") {
  Fixture f;
  auto three = find_three(f.prob, f.e1, f.e2, FlowConfig{}, MultistartConfig{});
  REQUIRE(three.all_ok());
  CHECK(three.positive.record->sign == SignClass::positive);
  CHECK(three.negative.record->sign == SignClass::negative);
  CHECK(three.sign_changing.record->interior_zeros == 1);
  for (const auto* b : {&three.positive, &three.negative, &three.sign_changing}) {
    CHECK(b->record->residual <= 1e-6);
  }
  CHECK(sup_distance(-three.positive.record->u, three.negative.record->u) <= 1e-8);
  CHECK(three.stats.monotonicity_violations == 0);
  // the nodal solution carries more energy than the one-signed ones
  CHECK(three.sign_changing.record->phi > three.positive.record->phi);
}

TEST_CASE("lambda outside (0, lambda1) is rejected") {
  Fixture f;
  Problem p = f.prob;
  p.lambda = 1.2 * f.e1.lambda;
  CHECK_THROWS_AS(find_three(p, f.e1, f.e2, FlowConfig{}, MultistartConfig{}), std::invalid_argument);
}

TEST_CASE("sign changes") {
  CHECK(count_sign_changes(GridFn(std::vector<double>{1, 0, -1, 2})) == 2);
  CHECK(count_sign_changes(GridFn(std::vector<double>{1, 2})) == 0);
}

TEST_CASE("multistart config validation") {
  MultistartConfig c;
  c.sweep = 2;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  MultistartConfig d;
  d.t_min = 2.0;
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
}
