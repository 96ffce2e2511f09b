#include "lipflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lipflow {

void FlowConfig::validate() const {
  if (!(dt0 > 0.0)) throw std::invalid_argument("flow: dt0 must be positive");
  if (!(dt_max > 0.0)) throw std::invalid_argument("flow: dt_max must be positive");
  if (!(eps_crit > 0.0)) throw std::invalid_argument("flow: eps_crit must be positive");
  if (!(t_max > 0.0)) throw std::invalid_argument("flow: t_max must be positive");
  if (!(cone_tol >= 0.0)) throw std::invalid_argument("flow: cone_tol must be nonnegative");
  if (!(origin_radius >= 0.0)) throw std::invalid_argument("flow: origin_radius must be nonnegative");
  if (trace_stride < 0) throw std::invalid_argument("flow: trace_stride must be nonnegative");
  newton.validate();
}

std::string to_string(ConeStatus s) {
  switch (s) {
    case ConeStatus::in_P: return "in_P";
    case ConeStatus::in_negP: return "in_negP";
    case ConeStatus::mixed: return "mixed";
  }
  return "unknown";
}

std::string to_string(FlowStatus s) {
  switch (s) {
    case FlowStatus::critical_point: return "critical_point";
    case FlowStatus::reached_origin_basin: return "reached_origin_basin";
    case FlowStatus::floor_exit: return "floor_exit";
    case FlowStatus::horizon: return "horizon";
    case FlowStatus::stalled: return "stalled";
  }
  return "unknown";
}

std::string to_string(SignClass s) {
  switch (s) {
    case SignClass::positive: return "positive";
    case SignClass::negative: return "negative";
    case SignClass::sign_changing: return "sign_changing";
    case SignClass::zero: return "zero";
  }
  return "unknown";
}

FieldEval vector_field(const Problem& prob, const GridFn& u, SelectionRule rule, const NewtonOpts& newton,
                       double eps_crit) {
  const Mesh& m = prob.mesh;
  const SubgradientSelection w = select_w(prob, u, rule);
  FieldEval fe;
  fe.g = subdiff_element(prob, u, w);
  fe.residual = rule == SelectionRule::min_norm ? norm_h(fe.g, m) : residual_m(prob, u);

  GridFn rhs(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) rhs[i] = prob.lambda * phi_p(u[i], prob.p) + w.w[i];
  fe.A = inverse_plap(rhs, prob.p, m, newton);
  fe.V = u - fe.A;
  fe.pairing = inner_h(fe.g, fe.V, m);
  if (fe.residual > eps_crit && !(fe.pairing > 0.0)) {
    fe.fallback = true;
    fe.V = fe.g;
    fe.A = u - fe.g;
    fe.pairing = inner_h(fe.g, fe.g, m);
  }
  return fe;
}

ConeStatus cone_status(const GridFn& u, double tol) {
  if (u.min() >= -tol) return ConeStatus::in_P;
  if (u.max() <= tol) return ConeStatus::in_negP;
  return ConeStatus::mixed;
}

SignClass classify_sign(const GridFn& u, double tol) {
  if (u.sup_norm() <= tol) return SignClass::zero;
  if (u.min() > tol) return SignClass::positive;
  if (u.max() < -tol) return SignClass::negative;
  return SignClass::sign_changing;
}

FlowState make_state(const Problem& prob, GridFn u, double t, const FlowConfig& cfg) {
  FlowState s;
  s.t = t;
  s.phi = phi(prob, u);
  s.residual = residual_m(prob, u);
  s.cone = cone_status(u, cfg.cone_tol);
  s.u = std::move(u);
  return s;
}

StepResult flow_step(const Problem& prob, const FlowState& s, const FlowConfig& cfg, double dt_try) {
  StepResult out;
  out.state = s;
  if (s.residual <= cfg.eps_crit) {
    out.critical = true;
    return out;
  }
  const FieldEval fe = vector_field(prob, s.u, SelectionRule::min_norm, cfg.newton, cfg.eps_crit);
  if (fe.V.sup_norm() == 0.0) {
    out.critical = true;
    return out;
  }

  const bool in_cone = !fe.fallback && s.cone != ConeStatus::mixed;
  double dt = std::min(dt_try, cfg.dt_max);
  if (in_cone) dt = std::min(dt, 1.0);
  const double resolution = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(s.phi));

  while (dt >= cfg.dt_min) {
    GridFn next(s.u.size());
    if (in_cone) {
      for (std::size_t i = 0; i < next.size(); ++i) next[i] = (1.0 - dt) * s.u[i] + dt * fe.A[i];
    } else {
      for (std::size_t i = 0; i < next.size(); ++i) next[i] = s.u[i] - dt * fe.V[i];
    }
    const double phi_next = next.all_finite() ? phi(prob, next) : HUGE_VAL;
    const double required = std::min(1e-12, cfg.armijo * dt * fe.pairing);
    const bool accept = std::isfinite(phi_next) &&
                        (phi_next <= s.phi - required || (phi_next <= s.phi && required <= resolution));
    if (accept) {
      out.state = make_state(prob, std::move(next), s.t + dt, cfg);
      out.dt = dt;
      return out;
    }
    dt *= 0.5;
    ++out.halvings;
  }
  out.stalled = true;
  return out;
}

FlowTrace integrate(const Problem& prob, const GridFn& v0, const FlowConfig& cfg) {
  cfg.validate();
  check_conforms(v0, prob.mesh);
  FlowTrace tr;
  FlowState state = make_state(prob, v0, 0.0, cfg);
  tr.best = state;
  tr.min_nodal = state.u.min();
  tr.max_nodal = state.u.max();
  tr.snapshots.push_back(state);
  auto observe = [&tr](const FlowState& st) {
    if (st.cone == ConeStatus::mixed) {
      if (!tr.has_mixed || st.residual < tr.best_mixed.residual) tr.best_mixed = st;
      tr.has_mixed = true;
    } else if (tr.first_cone == ConeStatus::mixed) {
      tr.first_cone = st.cone;
    }
  };
  observe(state);

  double dt = cfg.dt0;
  for (;;) {
    if (state.residual <= cfg.eps_crit) {
      tr.status = FlowStatus::critical_point;
      break;
    }
    if (norm_w1p(state.u, prob.p, prob.mesh) <= cfg.origin_radius && state.phi >= 0.0) {
      tr.status = FlowStatus::reached_origin_basin;
      break;
    }
    if (tr.steps > 0 && state.phi < cfg.phi_floor) {
      tr.status = FlowStatus::floor_exit;
      break;
    }
    if (state.t >= cfg.t_max || tr.steps >= cfg.max_steps) {
      tr.status = FlowStatus::horizon;
      break;
    }

    StepResult st = flow_step(prob, state, cfg, dt);
    tr.halvings += st.halvings;
    if (st.critical) {
      tr.status = FlowStatus::critical_point;
      break;
    }
    if (st.stalled) {
      tr.status = FlowStatus::stalled;
      break;
    }
    const double inc = st.state.phi - state.phi;
    tr.max_phi_increase = std::max(tr.max_phi_increase, inc);
    if (inc > 1e-10) ++tr.monotonicity_violations;
    state = std::move(st.state);
    ++tr.steps;
    tr.min_nodal = std::min(tr.min_nodal, state.u.min());
    tr.max_nodal = std::max(tr.max_nodal, state.u.max());
    if (state.residual < tr.best.residual) tr.best = state;
    observe(state);
    if (cfg.trace_stride > 0 && tr.steps % cfg.trace_stride == 0) tr.snapshots.push_back(state);
    dt = std::min(2.0 * st.dt, cfg.dt_max);
  }

  if (tr.snapshots.back().t != state.t) tr.snapshots.push_back(state);
  tr.terminal = std::move(state);
  return tr;
}

}  // namespace lipflow
