#include "doctest.h"

#include <cmath>

#include "lipflow/commands.hpp"
#include "lipflow/flow.hpp"

using namespace lipflow;

namespace {

Problem benchmark_problem(int n = 99, PotentialSpec spec = PotentialSpec::smooth_power(4.0)) {
  Mesh m = make_mesh(n, 1.0);
  return Problem{m, 2.0, 0.5 * eigen_first(2.0, m).lambda, spec};
}

}  // namespace

TEST_CASE("vector field vanishes at the origin") {
  Problem prob = benchmark_problem();
  auto fe = vector_field(prob, GridFn(99), SelectionRule::min_norm);
  CHECK(fe.V.sup_norm() == 0.0);
  CHECK(fe.residual == 0.0);
}

TEST_CASE("cone status and sign classes") {
  GridFn a(std::vector<double>{0.0, 1.0, 2.0});
  CHECK(cone_status(a, 0.0) == ConeStatus::in_P);
  CHECK(cone_status(-a, 0.0) == ConeStatus::in_negP);
  GridFn b(std::vector<double>{-1e-13, 1.0});
  CHECK(cone_status(b, 1e-12) == ConeStatus::in_P);
  CHECK(cone_status(b, 0.0) == ConeStatus::mixed);
  CHECK(classify_sign(GridFn(std::vector<double>{1.0, -1.0}), 0.0) == SignClass::sign_changing);
  CHECK(classify_sign(GridFn(3), 0.0) == SignClass::zero);
}

TEST_CASE("small data are captured by the origin, large data escape") {
  Problem prob = benchmark_problem();
  auto e1 = eigen_first(2.0, prob.mesh);
  FlowConfig cfg;
  auto small = integrate(prob, 0.1 * e1.u, cfg);
  CHECK(small.status == FlowStatus::reached_origin_basin);
  auto large = integrate(prob, 50.0 * e1.u, cfg);
  CHECK(large.status == FlowStatus::floor_exit);
  for (const auto* tr : {&small, &large}) {
    CHECK(tr->monotonicity_violations == 0);
    CHECK(tr->min_nodal >= -props::kConeTolerance);
  }
}

TEST_CASE("energy is non-increasing along snapshots") {
  Problem prob = benchmark_problem(99, PotentialSpec::jump_derivative(4.0));
  std::mt19937_64 rng(5);
  FlowConfig cfg;
  cfg.trace_stride = 1;
  for (int k = 0; k < 5; ++k) {
    auto tr = integrate(prob, props::random_mixed_start(prob.mesh, rng), cfg);
    for (std::size_t i = 1; i < tr.snapshots.size(); ++i) {
      CHECK(tr.snapshots[i].phi <= tr.snapshots[i - 1].phi + 1e-10);
    }
  }
}

TEST_CASE("cone invariance and its negative control") {
  Problem prob = benchmark_problem(99, PotentialSpec::jump_derivative(4.0));
  auto ok = props::cone_invariance(prob, FlowConfig{}, 20, 17);
  CHECK(ok.positive_violations == 0);
  CHECK(ok.negative_violations == 0);
  CHECK(ok.stats.flows == 40);

  Problem broken = prob;
  broken.spec = props::broken_sign_spec();
  auto bad = props::cone_invariance(broken, FlowConfig{}, 5, 17);
  CHECK(bad.positive_violations > 0);
}

TEST_CASE("parallel cone suite matches the serial reference") {
  Problem prob = benchmark_problem(49);
  auto a = props::cone_invariance(prob, FlowConfig{}, 8, 23);
  auto b = props::cone_invariance_serial(prob, FlowConfig{}, 8, 23);
  CHECK(a.statuses == b.statuses);
  CHECK(a.min_nodal_positive == b.min_nodal_positive);
  CHECK(a.stats.accepted_steps == b.stats.accepted_steps);
}

TEST_CASE("flow config validation") {
  FlowConfig c;
  c.eps_crit = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  FlowConfig d;
  d.trace_stride = -1;
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
}
