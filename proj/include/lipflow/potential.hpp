#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lipflow {

/// Closed interval [lo, hi]; the pointwise Clarke subdifferential of a scalar potential.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool degenerate() const { return lo == hi; }
  double mid() const { return 0.5 * (lo + hi); }
  double clamp(double v) const { return v < lo ? lo : (v > hi ? hi : v); }
  bool contains(double v, double tol = 0.0) const { return v >= lo - tol && v <= hi + tol; }
};

enum class PotentialKind { smooth_power, kinked_power, jump_derivative, custom_piecewise };

std::string to_string(PotentialKind k);
PotentialKind potential_kind_from_string(const std::string& s);

/// Polynomial piece of the derivative f = dj/ds, f(s) = sum_m coeffs[m] * s^m.
struct PolyPiece {
  std::vector<double> coeffs;
};

/// Locally Lipschitz potential j(x, s) with finitely many non-differentiability points in s.
///
/// The built-in kinds are x-independent and odd in f:
///   smooth_power     j = |s|^q / q
///   kinked_power     j = |s|^q / q + c * max(0, |s| - b)
///   jump_derivative  f = |s|^(q-2) s + c * sign(s) * H(|s| - b)   (same closed form, upward jump)
/// custom_piecewise stores f as polynomials between sorted breakpoints; j is its primitive
/// vanishing at 0.
struct PotentialSpec {
  PotentialKind kind = PotentialKind::smooth_power;
  double q = 4.0;
  double mu = 3.0;
  double M = 1.0;
  double a1 = 1.0;
  double c = 0.0;  // kink slope / jump height
  double b = 1.0;  // kink / jump location in |s|
  std::vector<double> breakpoints;
  std::vector<PolyPiece> pieces;  // breakpoints.size() + 1 entries (custom only)

  static PotentialSpec smooth_power(double q, double mu = 3.0, double M = 1.0);
  static PotentialSpec kinked_power(double q, double c, double b, double mu = 3.0, double M = 1.0);
  static PotentialSpec jump_derivative(double q, double height = 1.0, double at = 1.0, double mu = 3.0,
                                       double M = 1.0);
  static PotentialSpec custom_piecewise(std::vector<double> breakpoints, std::vector<PolyPiece> pieces,
                                        double q, double mu, double M, double a1);

  /// Throws std::invalid_argument when parameters are inconsistent.
  void validate() const;

  bool is_breakpoint(double s) const;
  /// Limit of f from below (side < 0) or above (side > 0).
  double f_one_sided(double s, int side) const;
  /// f away from breakpoints (at a breakpoint the left limit).
  double f(double s) const { return f_one_sided(s, is_breakpoint(s) ? -1 : 0); }
  /// df/ds away from breakpoints; one-sided average at a breakpoint.
  double df(double s) const;
  bool odd() const { return kind != PotentialKind::custom_piecewise; }
};

double j_eval(const PotentialSpec& spec, double x, double s);
Interval clarke_interval(const PotentialSpec& spec, double x, double s);
/// Generalized directional derivative: support function of the Clarke interval.
double j0_dir(const PotentialSpec& spec, double x, double s, double dir);

struct HjCondition {
  std::string name;  // "ii", "iii", "iv", "v"
  bool passed = true;
  bool flagged = false;  // negative-side asymmetry of (iii), reported but not a failure
  std::optional<double> first_violation;
  std::string detail;
};

struct HjReport {
  std::vector<HjCondition> conditions;
  bool all_passed() const;
  const HjCondition& get(const std::string& name) const;
};

/// Sampled diagnostic of the growth/superlinearity/sign hypotheses.
HjReport check_Hj(const PotentialSpec& spec, double p, std::span<const double> s_samples);

/// Default sample set used by the CLI diagnostics.
std::vector<double> default_Hj_samples(const PotentialSpec& spec);

}  // namespace lipflow
