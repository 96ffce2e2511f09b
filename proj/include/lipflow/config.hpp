#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "lipflow/flow.hpp"
#include "lipflow/multistart.hpp"

namespace lipflow {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OutputConfig {
  std::string directory = "out";
  int trace_stride = 10;
  bool csv = true;
  bool json = true;
};

struct VerifyConfig {
  std::uint64_t seed = 20240601;
  std::optional<std::vector<std::string>> properties;  // unset: every property
  long slope_samples = 10000;
  int cone_starts = 100;
  int gradient_pairs = 50;
  int operator_pairs = 50;
};

struct TraceConfig {
  double theta = 0.0;      // start direction in span{u1, u2}
  double amplitude = 1.0;  // W^{1,p} norm of the start
};

struct RunConfig {
  double p = 2.0;
  double length = 1.0;
  int n = 199;
  std::optional<double> lambda;           // absolute value
  std::optional<double> lambda_fraction;  // of the discrete principal eigenvalue
  PotentialSpec spec = PotentialSpec::smooth_power(4.0);
  FlowConfig flow;
  MultistartConfig multistart;
  OutputConfig output;
  VerifyConfig verify;
  TraceConfig trace;

  Mesh mesh() const { return make_mesh(n, length); }
  /// lambda itself, or lambda_fraction * lambda1 (defaults to a fraction of 0.5).
  double resolve_lambda(double lambda1) const;
};

inline const std::vector<std::string>& all_properties() {
  static const std::vector<std::string> names{
      "hj_diagnostics",         "slope_inequality",     "zero_slope_equivalence", "schauder_implies_outward",
      "invariance_examples",    "flow_monotonicity",    "cone_invariance",        "cone_invariance_negative_control",
      "gradient_consistency",   "plap_monotonicity",    "comparison_principle",   "rayleigh_bound"};
  return names;
}

/// Throws ConfigError on unknown keys, wrong types and out-of-range values.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& c);
PotentialSpec parse_potential(const nlohmann::json& j);

}  // namespace lipflow
