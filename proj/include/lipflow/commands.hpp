#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "lipflow/config.hpp"
#include "lipflow/multistart.hpp"

namespace lipflow {

enum ExitCode : int { kExitOk = 0, kExitSolverFailure = 1, kExitConfigError = 2, kExitPropertyFailure = 3 };

struct CommandResult {
  int exit_code = kExitOk;
  nlohmann::json report;
  std::vector<std::string> summary;  // human-readable lines
};

/// Problem built from the config, with lambda resolved against the discrete principal eigenvalue.
Problem make_problem(const RunConfig& cfg, double lambda1);

CommandResult cmd_eigen(const RunConfig& cfg);
CommandResult cmd_solve(const RunConfig& cfg);
CommandResult cmd_verify(const RunConfig& cfg);
CommandResult cmd_flow_trace(const RunConfig& cfg);

// ---------------------------------------------------------------------------------------------
// Property suites shared by cmd_verify and the tests.

namespace props {

/// Nonnegative start: half smooth sine mixtures, half rough nodal noise; sup norm in [0.1, 30].
GridFn random_nonnegative_start(const Mesh& m, std::mt19937_64& rng);
/// Start with both signs.
GridFn random_mixed_start(const Mesh& m, std::mt19937_64& rng);

struct ConeSuite {
  int starts = 0;
  int positive_violations = 0;  // flows from P leaving P by more than the tolerance
  int negative_violations = 0;  // mirrored flows leaving -P
  double min_nodal_positive = 0.0;
  double max_nodal_negative = 0.0;
  FlowStats stats;
  std::vector<std::string> statuses;  // terminal status per flow, positive then mirrored
};

inline constexpr double kConeTolerance = 1e-12;

/// Flows from `starts` random nonnegative data and their mirrors. OpenMP over starts.
ConeSuite cone_invariance(const Problem& prob, const FlowConfig& cfg, int starts, std::uint64_t seed);
ConeSuite cone_invariance_serial(const Problem& prob, const FlowConfig& cfg, int starts, std::uint64_t seed);

/// A custom potential with f(s) = s^3 - 2, which violates the sign condition s f(s) >= 0.
PotentialSpec broken_sign_spec();

struct GradientCheck {
  int pairs = 0;
  int failures = 0;
  double max_rel_error = 0.0;
};

/// Central differences of phi along e_i against h * (subdiff_element)_i, relative tolerance 1e-4.
GradientCheck gradient_consistency(const Problem& prob, int pairs, std::uint64_t seed);

struct PairCheck {
  int pairs = 0;
  int failures = 0;
  double worst = 0.0;  // smallest margin seen (negative is a failure)
};

/// <A u - A v, u - v>_h >= 0.
PairCheck plap_monotonicity(double p, const Mesh& m, int pairs, std::uint64_t seed);
/// f >= 0 => inverse_plap(f) >= 0, and f <= g => inverse_plap(f) <= inverse_plap(g).
PairCheck comparison_principle(double p, const Mesh& m, int pairs, std::uint64_t seed, const NewtonOpts& newton);
/// rayleigh_quotient(u) >= lambda1 - 1e-8.
PairCheck rayleigh_bound(double p, const Mesh& m, double lambda1, int samples, std::uint64_t seed);

}  // namespace props

}  // namespace lipflow
