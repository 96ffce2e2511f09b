#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lipflow/flow.hpp"

namespace lipflow {

struct MultistartConfig {
  int sweep = 64;           // ray directions in span{u1, u2}
  int refine_depth = 8;     // theta bisection levels between one-signed outcomes
  double bisect_tol = 1e-10;
  double margin_factor = 10.0;
  double t_min = 1e-6;
  double t_start = 1.0;
  double t_cap = 1e6;
  int edge_rounds = 40;     // ray re-projections while following the basin boundary
  int edge_patience = 4;    // rounds without residual improvement before giving up
  bool polish = true;       // finish with Newton when the flow stalls above eps_crit
  int polish_max_iter = 60;
  int max_candidates = 4;   // sign-changing launch candidates tried in order

  void validate() const;
};

/// a * u1 + b * u2.
struct PlanePoint {
  double a = 0.0;
  double b = 0.0;
  GridFn u;
};

/// a * u1 + b * u2 normalized in the W^{1,p} norm.
PlanePoint plane_point(const EigenPair& e1, const EigenPair& e2, double a, double b, double p, const Mesh& m);

/// Direction of angle theta in span{u1, u2}, normalized in the W^{1,p} norm.
PlanePoint plane_direction(const EigenPair& e1, const EigenPair& e2, double theta, double p, const Mesh& m);

/// Aggregated per-step diagnostics over many flows.
struct FlowStats {
  long flows = 0;
  long accepted_steps = 0;
  long monotonicity_violations = 0;
  double max_phi_increase = -std::numeric_limits<double>::infinity();
  double min_nodal = std::numeric_limits<double>::infinity();
  double max_nodal = -std::numeric_limits<double>::infinity();

  void add(const FlowTrace& tr);
  void merge(const FlowStats& o);
};

struct BisectionStep {
  double t = 0.0;
  bool captured = false;
};

struct RayResult {
  double theta = 0.0;
  PlanePoint dir;
  bool ok = false;
  double t_star = 0.0;
  double t_lo = 0.0;  // captured
  double t_hi = 0.0;  // escaped
  bool verified = false;           // predicate flips between t* - bisect_tol and t* + bisect_tol
  bool margin_consistent = false;  // same check at the launch margin
  std::vector<BisectionStep> history;
  std::string error;
  FlowStats stats;
};

/// True when the descending flow from v0 is captured by the origin's basin.
bool captured_from(const Problem& prob, const GridFn& v0, const FlowConfig& cfg, FlowStats* stats = nullptr);

/// Doubling then bisection for the radius where the ray leaves the origin's basin.
RayResult ray_escape_radius(const Problem& prob, const PlanePoint& dir, const FlowConfig& cfg,
                            const MultistartConfig& mcfg);

struct EdgeTrackResult {
  FlowState best;
  int rounds = 0;
  bool reached = false;  // a flow terminated at residual <= eps_crit
  std::vector<double> round_residuals;
  FlowStats stats;
};

/// Follows the basin boundary from an escaped-side launch point, re-projecting along the ray
/// through the closest-to-critical state after each flow. With mixed_only, only sign-changing
/// states are followed.
EdgeTrackResult track_edge(const Problem& prob, const GridFn& launch, const FlowConfig& cfg,
                           const MultistartConfig& mcfg, bool mixed_only = false);

struct PolishResult {
  GridFn u;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Newton iteration on the min-norm residual, started near a critical point.
PolishResult polish_critical(const Problem& prob, const GridFn& u0, double tol, int max_iter,
                             const NewtonOpts& newton = {});

struct SolutionRecord {
  GridFn u;
  SignClass sign = SignClass::zero;
  double phi = 0.0;
  double residual = 0.0;
  double theta = 0.0;
  double t_star = 0.0;
  int edge_rounds = 0;
  double flow_residual = 0.0;  // best residual reached by the flows alone
  bool polished = false;
  int newton_iterations = 0;
  int interior_zeros = 0;
};

int count_sign_changes(const GridFn& u);

/// Outcome of one boundary launch in the theta sweep.
struct RayOutcome {
  double theta = 0.0;
  int level = 0;  // 0 for the base sweep, k for the k-th refinement
  bool ok = false;
  bool verified = false;
  double t_star = 0.0;
  SignClass outcome = SignClass::zero;  // first cone entered, sign_changing if none
  double best_residual = 0.0;
  double best_phi = 0.0;
  bool has_mixed = false;
  double best_mixed_residual = 0.0;
  GridFn best_mixed;
  std::string error;
  FlowStats stats;
};

RayOutcome probe_direction(const Problem& prob, const EigenPair& e1, const EigenPair& e2, double theta, int level,
                           const FlowConfig& cfg, const MultistartConfig& mcfg);

/// Theta sweep, one probe per direction; OpenMP over directions.
std::vector<RayOutcome> sweep_rays(const Problem& prob, const EigenPair& e1, const EigenPair& e2,
                                   const std::vector<double>& thetas, const FlowConfig& cfg,
                                   const MultistartConfig& mcfg);
/// Serial reference of sweep_rays.
std::vector<RayOutcome> sweep_rays_serial(const Problem& prob, const EigenPair& e1, const EigenPair& e2,
                                          const std::vector<double>& thetas, const FlowConfig& cfg,
                                          const MultistartConfig& mcfg);

struct BranchReport {
  std::string name;
  bool ok = false;
  std::string error;
  std::optional<SolutionRecord> record;
  RayResult ray;
  std::vector<double> edge_residuals;
};

struct ThreeSolutions {
  EigenPair e1;
  EigenPair e2;
  BranchReport positive;
  BranchReport negative;
  BranchReport sign_changing;
  std::vector<RayOutcome> sweep;
  FlowStats stats;
  bool distinct = false;
  double positive_min_nodal = 0.0;  // over every flow state of the positive branch

  bool all_ok() const { return positive.ok && negative.ok && sign_changing.ok && distinct; }
};

/// Positive, negative and sign-changing critical points from launches on the basin boundary.
ThreeSolutions find_three(const Problem& prob, const FlowConfig& cfg, const MultistartConfig& mcfg);

/// Same, with precomputed eigenpairs.
ThreeSolutions find_three(const Problem& prob, const EigenPair& e1, const EigenPair& e2, const FlowConfig& cfg,
                          const MultistartConfig& mcfg);

}  // namespace lipflow
