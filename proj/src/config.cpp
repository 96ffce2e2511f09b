#include "lipflow/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "lipflow/io.hpp"

namespace lipflow {

using nlohmann::json;

namespace {

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  require_object(j, where);
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!ok.count(it.key())) throw ConfigError(where + ": unknown key '" + it.key() + "'");
  }
}

double get_num(const json& j, const char* key, double fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return v.get<double>();
}

long get_int(const json& j, const char* key, long fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return v.get<long>();
}

bool get_bool(const json& j, const char* key, bool fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_boolean()) throw ConfigError(where + "." + key + ": expected true or false");
  return v.get<bool>();
}

std::vector<double> get_num_array(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) return {};
  const json& v = j.at(key);
  if (!v.is_array()) throw ConfigError(where + "." + key + ": expected an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(where + "." + key + ": expected numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

template <class F>
void rethrow_as_config(const std::string& where, F&& f) {
  try {
    f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

void parse_newton(const json& j, NewtonOpts& o) {
  const std::string w = "flow.newton";
  check_keys(j, w, {"tol", "max_iter", "max_backtracks", "armijo", "eps_schedule"});
  o.tol = get_num(j, "tol", o.tol, w);
  o.max_iter = static_cast<int>(get_int(j, "max_iter", o.max_iter, w));
  o.max_backtracks = static_cast<int>(get_int(j, "max_backtracks", o.max_backtracks, w));
  o.armijo = get_num(j, "armijo", o.armijo, w);
  if (j.contains("eps_schedule")) o.eps_schedule = get_num_array(j, "eps_schedule", w);
}

void parse_flow(const json& j, FlowConfig& f) {
  const std::string w = "flow";
  check_keys(j, w, {"dt0", "dt_max", "dt_min", "eps_crit", "phi_floor", "t_max", "max_steps", "cone_tol",
                    "origin_radius", "armijo", "newton"});
  f.dt0 = get_num(j, "dt0", f.dt0, w);
  f.dt_max = get_num(j, "dt_max", f.dt_max, w);
  f.dt_min = get_num(j, "dt_min", f.dt_min, w);
  f.eps_crit = get_num(j, "eps_crit", f.eps_crit, w);
  f.phi_floor = get_num(j, "phi_floor", f.phi_floor, w);
  f.t_max = get_num(j, "t_max", f.t_max, w);
  f.max_steps = static_cast<int>(get_int(j, "max_steps", f.max_steps, w));
  f.cone_tol = get_num(j, "cone_tol", f.cone_tol, w);
  f.origin_radius = get_num(j, "origin_radius", f.origin_radius, w);
  f.armijo = get_num(j, "armijo", f.armijo, w);
  if (j.contains("newton")) parse_newton(j.at("newton"), f.newton);
}

void parse_multistart(const json& j, MultistartConfig& m) {
  const std::string w = "multistart";
  check_keys(j, w, {"sweep", "refine_depth", "bisect_tol", "margin_factor", "t_min", "t_start", "t_cap",
                    "edge_rounds", "edge_patience", "polish", "polish_max_iter", "max_candidates"});
  m.sweep = static_cast<int>(get_int(j, "sweep", m.sweep, w));
  m.refine_depth = static_cast<int>(get_int(j, "refine_depth", m.refine_depth, w));
  m.bisect_tol = get_num(j, "bisect_tol", m.bisect_tol, w);
  m.margin_factor = get_num(j, "margin_factor", m.margin_factor, w);
  m.t_min = get_num(j, "t_min", m.t_min, w);
  m.t_start = get_num(j, "t_start", m.t_start, w);
  m.t_cap = get_num(j, "t_cap", m.t_cap, w);
  m.edge_rounds = static_cast<int>(get_int(j, "edge_rounds", m.edge_rounds, w));
  m.edge_patience = static_cast<int>(get_int(j, "edge_patience", m.edge_patience, w));
  m.polish = get_bool(j, "polish", m.polish, w);
  m.polish_max_iter = static_cast<int>(get_int(j, "polish_max_iter", m.polish_max_iter, w));
  m.max_candidates = static_cast<int>(get_int(j, "max_candidates", m.max_candidates, w));
}

void parse_output(const json& j, OutputConfig& o) {
  const std::string w = "output";
  check_keys(j, w, {"directory", "trace_stride", "formats"});
  if (j.contains("directory")) {
    if (!j.at("directory").is_string()) throw ConfigError("output.directory: expected a string");
    o.directory = j.at("directory").get<std::string>();
    if (o.directory.empty()) throw ConfigError("output.directory: must not be empty");
  }
  o.trace_stride = static_cast<int>(get_int(j, "trace_stride", o.trace_stride, w));
  if (o.trace_stride < 0) throw ConfigError("output.trace_stride: must be >= 0");
  if (j.contains("formats")) {
    const json& f = j.at("formats");
    if (!f.is_array()) throw ConfigError("output.formats: expected an array");
    o.csv = o.json = false;
    for (const auto& e : f) {
      if (e == "csv") o.csv = true;
      else if (e == "json") o.json = true;
      else throw ConfigError("output.formats: unknown format " + e.dump());
    }
  }
}

void parse_verify(const json& j, VerifyConfig& v) {
  const std::string w = "verify";
  check_keys(j, w, {"seed", "properties", "slope_samples", "cone_starts", "gradient_pairs", "operator_pairs"});
  if (j.contains("seed")) {
    const json& s = j.at("seed");
    if (!s.is_number_unsigned()) throw ConfigError("verify.seed: expected a nonnegative integer");
    v.seed = s.get<std::uint64_t>();
  }
  if (j.contains("properties")) {
    const json& p = j.at("properties");
    if (!p.is_array()) throw ConfigError("verify.properties: expected an array");
    std::vector<std::string> names;
    const auto& known = all_properties();
    for (const auto& e : p) {
      if (!e.is_string()) throw ConfigError("verify.properties: expected strings");
      auto name = e.get<std::string>();
      if (std::find(known.begin(), known.end(), name) == known.end()) {
        throw ConfigError("verify.properties: unknown property '" + name + "'");
      }
      names.push_back(name);
    }
    v.properties = names;
  }
  v.slope_samples = get_int(j, "slope_samples", v.slope_samples, w);
  v.cone_starts = static_cast<int>(get_int(j, "cone_starts", v.cone_starts, w));
  v.gradient_pairs = static_cast<int>(get_int(j, "gradient_pairs", v.gradient_pairs, w));
  v.operator_pairs = static_cast<int>(get_int(j, "operator_pairs", v.operator_pairs, w));
  if (v.slope_samples < 0 || v.cone_starts < 0 || v.gradient_pairs < 0 || v.operator_pairs < 0) {
    throw ConfigError("verify: sample counts must be nonnegative");
  }
}

void parse_trace(const json& j, TraceConfig& t) {
  const std::string w = "flow_trace";
  check_keys(j, w, {"theta", "amplitude"});
  t.theta = get_num(j, "theta", t.theta, w);
  t.amplitude = get_num(j, "amplitude", t.amplitude, w);
  if (!(t.amplitude > 0.0)) throw ConfigError("flow_trace.amplitude: must be positive");
}

}  // namespace

double RunConfig::resolve_lambda(double lambda1) const {
  if (lambda) return *lambda;
  return lambda_fraction.value_or(0.5) * lambda1;
}

PotentialSpec parse_potential(const json& j) {
  const std::string w = "problem.potential";
  require_object(j, w);
  if (!j.contains("kind") || !j.at("kind").is_string()) throw ConfigError(w + ".kind: required string");
  PotentialKind kind;
  rethrow_as_config(w, [&] { kind = potential_kind_from_string(j.at("kind").get<std::string>()); });
  PotentialSpec spec;
  rethrow_as_config(w, [&] {
    switch (kind) {
      case PotentialKind::smooth_power:
        check_keys(j, w, {"kind", "q", "mu", "M"});
        spec = PotentialSpec::smooth_power(get_num(j, "q", 4.0, w), get_num(j, "mu", 3.0, w),
                                           get_num(j, "M", 1.0, w));
        break;
      case PotentialKind::kinked_power:
        check_keys(j, w, {"kind", "q", "c", "b", "mu", "M"});
        spec = PotentialSpec::kinked_power(get_num(j, "q", 4.0, w), get_num(j, "c", 1.0, w),
                                           get_num(j, "b", 1.0, w), get_num(j, "mu", 3.0, w),
                                           get_num(j, "M", 1.0, w));
        break;
      case PotentialKind::jump_derivative:
        check_keys(j, w, {"kind", "q", "c", "b", "mu", "M"});
        spec = PotentialSpec::jump_derivative(get_num(j, "q", 4.0, w), get_num(j, "c", 1.0, w),
                                              get_num(j, "b", 1.0, w), get_num(j, "mu", 3.0, w),
                                              get_num(j, "M", 1.0, w));
        break;
      case PotentialKind::custom_piecewise: {
        check_keys(j, w, {"kind", "q", "mu", "M", "a1", "breakpoints", "pieces"});
        if (!j.contains("pieces") || !j.at("pieces").is_array()) throw ConfigError(w + ".pieces: required array");
        std::vector<PolyPiece> pieces;
        for (const auto& pc : j.at("pieces")) {
          if (!pc.is_array()) throw ConfigError(w + ".pieces: each piece is an array of coefficients");
          PolyPiece piece;
          for (const auto& c : pc) {
            if (!c.is_number()) throw ConfigError(w + ".pieces: coefficients must be numbers");
            piece.coeffs.push_back(c.get<double>());
          }
          pieces.push_back(piece);
        }
        spec = PotentialSpec::custom_piecewise(get_num_array(j, "breakpoints", w), pieces, get_num(j, "q", 4.0, w),
                                               get_num(j, "mu", 3.0, w), get_num(j, "M", 1.0, w),
                                               get_num(j, "a1", 1.0, w));
        break;
      }
    }
  });
  return spec;
}

RunConfig parse_config(const json& j) {
  check_keys(j, "config", {"problem", "flow", "multistart", "output", "verify", "flow_trace"});
  RunConfig c;
  if (j.contains("problem")) {
    const json& pj = j.at("problem");
    const std::string w = "problem";
    check_keys(pj, w, {"p", "lambda", "lambda_fraction", "L", "n", "potential"});
    c.p = get_num(pj, "p", c.p, w);
    c.length = get_num(pj, "L", c.length, w);
    c.n = static_cast<int>(get_int(pj, "n", c.n, w));
    if (pj.contains("lambda") && pj.contains("lambda_fraction")) {
      throw ConfigError("problem: give either lambda or lambda_fraction, not both");
    }
    if (pj.contains("lambda")) c.lambda = get_num(pj, "lambda", 0.0, w);
    if (pj.contains("lambda_fraction")) c.lambda_fraction = get_num(pj, "lambda_fraction", 0.0, w);
    if (pj.contains("potential")) c.spec = parse_potential(pj.at("potential"));
  }
  if (j.contains("flow")) parse_flow(j.at("flow"), c.flow);
  if (j.contains("multistart")) parse_multistart(j.at("multistart"), c.multistart);
  if (j.contains("output")) parse_output(j.at("output"), c.output);
  if (j.contains("verify")) parse_verify(j.at("verify"), c.verify);
  if (j.contains("flow_trace")) parse_trace(j.at("flow_trace"), c.trace);
  c.flow.trace_stride = c.output.trace_stride;

  if (!(c.p > 1.0)) throw ConfigError("problem.p: must exceed 1");
  if (!(c.length > 0.0)) throw ConfigError("problem.L: must be positive");
  if (c.n < 2) throw ConfigError("problem.n: need at least 2 interior nodes");
  if (c.lambda_fraction && !(*c.lambda_fraction > 0.0 && *c.lambda_fraction < 1.0)) {
    throw ConfigError("problem.lambda_fraction: must lie in (0, 1), the theorem needs 0 < lambda < lambda1");
  }
  if (c.lambda && !(*c.lambda > 0.0)) throw ConfigError("problem.lambda: must be positive");
  rethrow_as_config("flow", [&] { c.flow.validate(); });
  rethrow_as_config("multistart", [&] { c.multistart.validate(); });
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(j);
}

json to_json(const RunConfig& c) {
  json problem{{"p", c.p}, {"L", c.length}, {"n", c.n}, {"potential", io::to_json(c.spec)}};
  if (c.lambda) problem["lambda"] = *c.lambda;
  if (c.lambda_fraction) problem["lambda_fraction"] = *c.lambda_fraction;
  const auto& f = c.flow;
  json flow{{"dt0", f.dt0},       {"dt_max", f.dt_max},       {"dt_min", f.dt_min},
            {"eps_crit", f.eps_crit}, {"phi_floor", f.phi_floor}, {"t_max", f.t_max},
            {"max_steps", f.max_steps}, {"cone_tol", f.cone_tol}, {"origin_radius", f.origin_radius},
            {"armijo", f.armijo},
            {"newton", {{"tol", f.newton.tol},
                        {"max_iter", f.newton.max_iter},
                        {"max_backtracks", f.newton.max_backtracks},
                        {"armijo", f.newton.armijo},
                        {"eps_schedule", f.newton.eps_schedule}}}};
  const auto& m = c.multistart;
  json ms{{"sweep", m.sweep},
          {"refine_depth", m.refine_depth},
          {"bisect_tol", m.bisect_tol},
          {"margin_factor", m.margin_factor},
          {"t_min", m.t_min},
          {"t_start", m.t_start},
          {"t_cap", m.t_cap},
          {"edge_rounds", m.edge_rounds},
          {"edge_patience", m.edge_patience},
          {"polish", m.polish},
          {"polish_max_iter", m.polish_max_iter},
          {"max_candidates", m.max_candidates}};
  json formats = json::array();
  if (c.output.csv) formats.push_back("csv");
  if (c.output.json) formats.push_back("json");
  json out{{"directory", c.output.directory}, {"trace_stride", c.output.trace_stride}, {"formats", formats}};
  json ver{{"seed", c.verify.seed},
           {"slope_samples", c.verify.slope_samples},
           {"cone_starts", c.verify.cone_starts},
           {"gradient_pairs", c.verify.gradient_pairs},
           {"operator_pairs", c.verify.operator_pairs}};
  if (c.verify.properties) ver["properties"] = *c.verify.properties;
  json tr{{"theta", c.trace.theta}, {"amplitude", c.trace.amplitude}};
  return json{{"problem", problem}, {"flow", flow}, {"multistart", ms},
              {"output", out},      {"verify", ver}, {"flow_trace", tr}};
}

}  // namespace lipflow
