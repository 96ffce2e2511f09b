#pragma once

#include <limits>
#include <string>
#include <vector>

#include "lipflow/functional.hpp"
#include "lipflow/plap.hpp"

namespace lipflow {

/// Numerical stand-ins for the neighbourhood of the critical set (eps_crit), the admissible energy
/// window (phi_floor) and the time horizon of the descending flow.
struct FlowConfig {
  double dt0 = 1.0;
  double dt_max = 1.0;
  double dt_min = 1e-14;
  double eps_crit = 1e-6;
  double phi_floor = -1e6;
  double t_max = 1e4;
  int max_steps = 200000;
  double cone_tol = 1e-12;
  double origin_radius = 1e-3;
  double armijo = 1e-4;
  int trace_stride = 1;  // 0 keeps only the first and last state
  NewtonOpts newton;

  void validate() const;
};

enum class ConeStatus { in_P, in_negP, mixed };
enum class FlowStatus { critical_point, reached_origin_basin, floor_exit, horizon, stalled };
enum class SignClass { positive, negative, sign_changing, zero };

std::string to_string(ConeStatus s);
std::string to_string(FlowStatus s);
std::string to_string(SignClass s);

struct FlowState {
  double t = 0.0;
  GridFn u;
  double phi = 0.0;
  double residual = 0.0;
  ConeStatus cone = ConeStatus::mixed;
};

/// V(u) = u - A(u) with A(u) = (-Delta_p)^{-1}(lambda |u|^(p-2) u + w), w the selected subgradient.
struct FieldEval {
  GridFn V;
  GridFn A;
  GridFn g;  // strong residual for the selection used
  double pairing = 0.0;  // <g, V>_h
  double residual = 0.0; // residual_m(u)
  bool fallback = false; // V replaced by g because the pairing check failed
};

FieldEval vector_field(const Problem& prob, const GridFn& u, SelectionRule rule, const NewtonOpts& newton = {},
                       double eps_crit = 0.0);

ConeStatus cone_status(const GridFn& u, double tol);
SignClass classify_sign(const GridFn& u, double tol);

FlowState make_state(const Problem& prob, GridFn u, double t, const FlowConfig& cfg);

struct StepResult {
  FlowState state;
  double dt = 0.0;
  bool critical = false;
  bool stalled = false;
  int halvings = 0;
};

/// One explicit Euler step u+ = u - dt V(u), halving dt until the energy decreases.
/// Inside a cone dt <= 1 and the update is evaluated as (1 - dt) u + dt A(u).
StepResult flow_step(const Problem& prob, const FlowState& s, const FlowConfig& cfg, double dt_try);

struct FlowTrace {
  std::vector<FlowState> snapshots;
  FlowStatus status = FlowStatus::horizon;
  FlowState terminal;
  FlowState best;  // smallest residual seen
  bool has_mixed = false;
  FlowState best_mixed;  // smallest residual among sign-changing states
  ConeStatus first_cone = ConeStatus::mixed;  // first cone the flow lies in; mixed if never
  int steps = 0;
  int halvings = 0;
  int monotonicity_violations = 0;  // accepted steps with phi increase above 1e-10
  double max_phi_increase = -std::numeric_limits<double>::infinity();
  double min_nodal = std::numeric_limits<double>::infinity();
  double max_nodal = -std::numeric_limits<double>::infinity();
};

FlowTrace integrate(const Problem& prob, const GridFn& v0, const FlowConfig& cfg);

}  // namespace lipflow
