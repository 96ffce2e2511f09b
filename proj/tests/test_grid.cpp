#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lipflow/grid.hpp"

using namespace lipflow;

TEST_CASE("mesh geometry") {
  Mesh m = make_mesh(9, 2.0);
  CHECK(m.h == doctest::Approx(0.2));
  CHECK(m.node(0) == doctest::Approx(0.2));
  CHECK(m.node(8) == doctest::Approx(1.8));
  CHECK_THROWS_AS(make_mesh(1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_mesh(10, 0.0), std::invalid_argument);
}

TEST_CASE("gradient has n+1 cells with zero boundary values") {
  Mesh m = make_mesh(3, 1.0);
  GridFn u(std::vector<double>{1.0, 2.0, 3.0});
  auto g = grad(u, m);
  REQUIRE(g.size() == 4);
  CHECK(g[0] == doctest::Approx(4.0));
  CHECK(g[1] == doctest::Approx(4.0));
  CHECK(g[3] == doctest::Approx(-12.0));
}

TEST_CASE("norms of a sampled sine") {
  Mesh m = make_mesh(999, 1.0);
  GridFn u = GridFn::sample(m, [](double x) { return std::sin(std::numbers::pi * x); });
  // |u|_2^2 = 1/2, ||u'||_2^2 = pi^2 / 2
  CHECK(norm_lr(u, 2.0, m) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));
  CHECK(norm_w1p(u, 2.0, m) == doctest::Approx(std::numbers::pi * std::sqrt(0.5)).epsilon(1e-5));
  CHECK(norm_h(u, m) == doctest::Approx(norm_lr(u, 2.0, m)));
  CHECK(inner_h(u, u, m) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK_THROWS_AS(norm_w1p(u, 1.0, m), std::invalid_argument);
  CHECK_THROWS_AS(norm_lr(u, 0.5, m), std::invalid_argument);
}

TEST_CASE("zero function and arithmetic") {
  Mesh m = make_mesh(5, 1.0);
  GridFn z(5);
  CHECK(norm_w1p(z, 3.0, m) == 0.0);
  GridFn a(std::vector<double>{1, -2, 3, -4, 5});
  CHECK(a.sup_norm() == 5.0);
  CHECK(a.min() == -4.0);
  CHECK((a - a) == z);
  CHECK((-a)[1] == 2.0);
  CHECK(sup_distance(a, 2.0 * a) == 5.0);
  CHECK_THROWS(check_conforms(GridFn(4), m));
}
