#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lipflow/functional.hpp"

namespace lipflow::oracle {

// ---------------------------------------------------------------------------------------------
// Shooting for the 1-D inclusion, independent of the finite-difference machinery.

struct ShootingResult {
  double s0 = 0.0;             // initial slope u'(0)
  std::vector<double> x;       // dense samples of the IVP solution
  std::vector<double> u;
  double boundary_miss = 0.0;  // |u(L)|
  int node_count = 0;          // interior zeros
  int breakpoint_crossings = 0;

  /// Linear interpolation of the dense solution.
  double at(double xq) const;
  /// Values at the interior nodes of a mesh.
  GridFn on_mesh(const Mesh& m) const;
};

struct ShootingOptions {
  int steps = 40000;       // RK4 steps over (0, L)
  int max_bisections = 200;
  double slope_tol = 1e-15;  // relative
};

/// Solves the IVP (|u'|^(p-2) u')' = -lambda |u|^(p-2) u - f(u), u(0) = 0, u'(0) = s,
/// switching the piece of f at event-located breakpoint crossings.
ShootingResult integrate_ivp(const Problem& prob, double s, const ShootingOptions& opts = {});

/// Bisects the slope in [lo, hi] for u(L) = 0. Throws std::invalid_argument when u(L) has the
/// same sign at both ends.
ShootingResult shoot(const Problem& prob, int target_nodes, double slope_lo, double slope_hi,
                     const ShootingOptions& opts = {});

/// Scans slopes in [s_min, s_max] (geometric grid, sign of s_min) for a bracket whose lower end
/// has target_nodes interior zeros and across which u(L) changes sign.
std::optional<std::pair<double, double>> find_slope_bracket(const Problem& prob, int target_nodes, double s_min,
                                                            double s_max, int samples = 400,
                                                            const ShootingOptions& opts = {});

/// Eigenvalue of (|u'|^(p-2)u')' + lambda |u|^(p-2) u = 0 on (0, L) whose eigenfunction has
/// target_nodes interior zeros, by bisection on lambda.
double shoot_eigenvalue(double p, double length, int target_nodes, double lambda_lo, double lambda_hi,
                        const ShootingOptions& opts = {});

// ---------------------------------------------------------------------------------------------
// Small-dimension slope computations on the nonnegative orthant.

/// phi(x) = 1/2 (x - b)^T Q (x - b) + sum_i c_i |x_i - k_i| on R^dim, dim <= 3.
struct SmallProblem {
  int dim = 2;
  std::vector<double> Q;  // row-major, symmetric positive definite
  std::vector<double> b;
  std::vector<double> c;  // >= 0
  std::vector<double> k;

  void validate() const;
  double value(const std::vector<double>& x) const;
  /// Clarke subdifferential, a box.
  std::vector<Interval> subdiff(const std::vector<double>& x) const;
  static SmallProblem quadratic(std::vector<double> b);  // Q = I, no kinks
};

/// sup { <c, d> : |d| <= 1, x - d in cone_sign * P }.
double cone_ball_support(const std::vector<double>& c, const std::vector<double>& x, int cone_sign = 1);

/// Same quantity by dense sampling of the constraint set (test oracle for the closed form).
double cone_ball_support_sampled(const std::vector<double>& c, const std::vector<double>& x, int cone_sign,
                                 int samples_per_dim);

/// m(x) = min |x*| over the subdifferential box.
double brute_m(const SmallProblem& sp, const std::vector<double>& x);

/// m_{cone_sign P}(x) = inf over the box of cone_ball_support, by a 101-point grid per nondegenerate
/// coordinate plus local refinement; the min-norm element is always a candidate.
double brute_mP(const SmallProblem& sp, const std::vector<double>& x, int cone_sign = 1);

struct InvarianceVerdict {
  bool on_boundary = false;
  bool schauder = false;   // (I - grad phi)(x) lies in the cone
  bool outward = false;    // no nonzero subgradient in the inward normal cone
  bool implication = true; // schauder => outward
};

InvarianceVerdict check_invariance_condition(const SmallProblem& sp, const std::vector<double>& x,
                                             int cone_sign = 1);

// ---------------------------------------------------------------------------------------------
// Seeded property suite for the slope inequality, the zero-slope equivalence and the
// Schauder => outwardly-directed implication.

struct SlopeSample {
  SmallProblem sp;
  std::vector<double> x;
  int cone_sign = 1;
};

struct SlopeVerdict {
  double m = 0.0;
  double mP = 0.0;
  double margin = 0.0;  // mP - min(1/2, m) m
  bool inequality_ok = true;
  bool equivalence_ok = true;
  bool equivalence_indeterminate = false;
  InvarianceVerdict inv;
};

struct SlopeSuiteResult {
  long samples = 0;
  long inequality_violations = 0;
  long equivalence_violations = 0;
  long equivalence_indeterminate = 0;
  long zero_slope_samples = 0;
  long boundary_samples = 0;
  long schauder_premise = 0;
  long implication_violations = 0;
  double min_margin = 0.0;
  std::optional<long> first_violation;

  bool passed() const {
    return inequality_violations == 0 && equivalence_violations == 0 && implication_violations == 0;
  }
};

inline constexpr double kGridTolerance = 1e-2;
inline constexpr double kZeroThreshold = 1e-6;

std::vector<SlopeSample> make_slope_samples(std::uint64_t seed, long count);
SlopeVerdict evaluate_slope_sample(const SlopeSample& s);
/// OpenMP over samples.
SlopeSuiteResult run_slope_suite(const std::vector<SlopeSample>& samples);
/// Serial reference.
SlopeSuiteResult run_slope_suite_serial(const std::vector<SlopeSample>& samples);

}  // namespace lipflow::oracle
