#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "lipflow/potential.hpp"

using namespace lipflow;

TEST_CASE("smooth power potential") {
  auto sp = PotentialSpec::smooth_power(4.0);
  CHECK(j_eval(sp, 0.0, 2.0) == doctest::Approx(4.0));
  CHECK(j_eval(sp, 0.0, -2.0) == j_eval(sp, 0.0, 2.0));
  auto iv = clarke_interval(sp, 0.0, 2.0);
  CHECK(iv.degenerate());
  CHECK(iv.lo == doctest::Approx(8.0));
  CHECK(j0_dir(sp, 0.0, 2.0, -1.0) == doctest::Approx(-8.0));
}

TEST_CASE("jump derivative: interval at the jump, odd elsewhere") {
  auto sp = PotentialSpec::jump_derivative(4.0, 1.0, 1.0);
  auto at = clarke_interval(sp, 0.0, 1.0);
  CHECK(at.lo == doctest::Approx(1.0));
  CHECK(at.hi == doctest::Approx(2.0));
  auto neg = clarke_interval(sp, 0.0, -1.0);
  CHECK(neg.lo == doctest::Approx(-2.0));
  CHECK(neg.hi == doctest::Approx(-1.0));
  CHECK(sp.f(1.5) == doctest::Approx(std::pow(1.5, 3) + 1.0));
  CHECK(sp.f(0.5) == doctest::Approx(0.125));
  CHECK(j_eval(sp, 0.0, 2.0) == doctest::Approx(4.0 + 1.0));
  // directional derivative picks the worst end of the interval
  CHECK(j0_dir(sp, 0.0, 1.0, 1.0) == doctest::Approx(2.0));
  CHECK(j0_dir(sp, 0.0, 1.0, -1.0) == doctest::Approx(-1.0));
}

TEST_CASE("kinked power at the origin") {
  auto sp = PotentialSpec::kinked_power(4.0, 0.5, 0.0);
  auto iv = clarke_interval(sp, 0.0, 0.0);
  CHECK(iv.lo == doctest::Approx(-0.5));
  CHECK(iv.hi == doctest::Approx(0.5));
}

TEST_CASE("custom piecewise primitive is continuous") {
  // f = 1 on s < 0, f = 2 s on s >= 0
  auto sp = PotentialSpec::custom_piecewise({0.0}, {PolyPiece{{1.0}}, PolyPiece{{0.0, 2.0}}}, 4.0, 3.0, 1.0, 1.0);
  CHECK(j_eval(sp, 0.0, 0.0) == doctest::Approx(0.0));
  CHECK(j_eval(sp, 0.0, -2.0) == doctest::Approx(-2.0));
  CHECK(j_eval(sp, 0.0, 3.0) == doctest::Approx(9.0));
  auto iv = clarke_interval(sp, 0.0, 0.0);
  CHECK(iv.lo == doctest::Approx(0.0));
  CHECK(iv.hi == doctest::Approx(1.0));
}

TEST_CASE("hypothesis diagnostics") {
  SUBCASE("compliant specs pass") {
    for (auto sp : {PotentialSpec::smooth_power(4.0), PotentialSpec::jump_derivative(4.0)}) {
      auto rep = check_Hj(sp, 2.0, default_Hj_samples(sp));
      CHECK(rep.all_passed());
    }
  }
  SUBCASE("sign condition violated") {
    auto sp = PotentialSpec::custom_piecewise({}, {PolyPiece{{-2.0, 0.0, 0.0, 1.0}}}, 4.0, 3.0, 1.0, 3.0);
    auto rep = check_Hj(sp, 2.0, default_Hj_samples(sp));
    CHECK_FALSE(rep.get("v").passed);
  }
  SUBCASE("sublinear potential fails superlinearity") {
    auto sp = PotentialSpec::smooth_power(1.5);
    auto rep = check_Hj(sp, 2.0, default_Hj_samples(sp));
    CHECK_FALSE(rep.get("iii").passed);
  }
  CHECK_THROWS_AS(check_Hj(PotentialSpec::smooth_power(4.0), 2.0, std::span<const double>{}), std::invalid_argument);
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(PotentialSpec::smooth_power(1.0), std::invalid_argument);
  CHECK_THROWS_AS(PotentialSpec::kinked_power(4.0, -1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(PotentialSpec::custom_piecewise({0.0}, {PolyPiece{{1.0}}}, 4.0, 3.0, 1.0, 1.0),
                  std::invalid_argument);
  CHECK(potential_kind_from_string(to_string(PotentialKind::jump_derivative)) == PotentialKind::jump_derivative);
  CHECK_THROWS(potential_kind_from_string("nope"));
}
