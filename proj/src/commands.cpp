#include "lipflow/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <numbers>

#include "lipflow/io.hpp"
#include "lipflow/oracle.hpp"

namespace lipflow {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t k) { return seed + 0x9E3779B97F4A7C15ULL * (k + 1); }

struct Artifacts {
  const RunConfig& cfg;
  json written = json::array();

  fs::path dir() const { return fs::path(cfg.output.directory); }
  void csv(const std::string& name, const Mesh& m, const GridFn& u) {
    if (!cfg.output.csv) return;
    io::write_gridfn_csv(dir() / name, m, u);
    written.push_back(name);
  }
  void trace(const std::string& name, const FlowTrace& tr) {
    if (!cfg.output.csv) return;
    io::write_trace_csv(dir() / name, tr);
    written.push_back(name);
  }
  void report(const std::string& name, json& j) {
    if (cfg.output.json) written.push_back(name);
    j["artifacts"] = written;
    if (cfg.output.json) io::write_json(dir() / name, j);
  }
};

EigenPair principal(const RunConfig& cfg) { return eigen_first(cfg.p, cfg.mesh(), cfg.flow.newton); }

}  // namespace

Problem make_problem(const RunConfig& cfg, double lambda1) {
  Problem prob{cfg.mesh(), cfg.p, cfg.resolve_lambda(lambda1), cfg.spec};
  prob.validate();
  return prob;
}

CommandResult cmd_eigen(const RunConfig& cfg) {
  CommandResult res;
  const Mesh m = cfg.mesh();
  Artifacts out{cfg};
  EigenPair e1 = principal(cfg);
  const double l1_exact = lambda1_exact(cfg.p, cfg.length);
  json j{{"command", "eigen"},
         {"p", cfg.p},
         {"L", cfg.length},
         {"n", cfg.n},
         {"lambda1", e1.lambda},
         {"lambda1_residual", e1.residual},
         {"lambda1_iterations", e1.iterations},
         {"lambda1_continuous", l1_exact},
         {"lambda1_rel_error", (e1.lambda - l1_exact) / l1_exact},
         {"pi_p", pi_p(cfg.p)}};
  out.csv("u1.csv", m, e1.u);
  res.summary.push_back("lambda1_h = " + fmt("%.12g", e1.lambda) + "   continuous " + fmt("%.12g", l1_exact) +
                        "   rel. error " + fmt("%.3e", (e1.lambda - l1_exact) / l1_exact));
  if (cfg.n % 2 == 1 && cfg.n >= 5) {
    EigenPair e2 = eigen_second_1d(cfg.p, m, cfg.flow.newton);
    const double l2_exact = std::pow(2.0, cfg.p) * l1_exact;
    j["lambda2"] = e2.lambda;
    j["lambda2_residual"] = e2.residual;
    j["lambda2_continuous"] = l2_exact;
    j["lambda2_rel_error"] = (e2.lambda - l2_exact) / l2_exact;
    out.csv("u2.csv", m, e2.u);
    res.summary.push_back("lambda2_h = " + fmt("%.12g", e2.lambda) + "   continuous " + fmt("%.12g", l2_exact) +
                          "   rel. error " + fmt("%.3e", (e2.lambda - l2_exact) / l2_exact));
  } else {
    j["lambda2"] = nullptr;
    j["lambda2_note"] = "second eigenpair needs an odd number of interior nodes";
    res.summary.push_back("lambda2_h skipped: n must be odd");
  }
  out.report("eigen_report.json", j);
  res.report = j;
  return res;
}

CommandResult cmd_solve(const RunConfig& cfg) {
  CommandResult res;
  const Mesh m = cfg.mesh();
  if (cfg.n % 2 == 0 || cfg.n < 5) throw ConfigError("problem.n: solve needs an odd n >= 5");
  Artifacts out{cfg};
  EigenPair e1 = principal(cfg);
  EigenPair e2 = eigen_second_1d(cfg.p, m, cfg.flow.newton);
  const Problem prob = make_problem(cfg, e1.lambda);
  if (!(prob.lambda > 0.0 && prob.lambda < e1.lambda)) {
    throw ConfigError("problem.lambda: " + fmt("%.12g", prob.lambda) + " is outside (0, lambda1_h = " +
                      fmt("%.12g", e1.lambda) + ")");
  }
  const HjReport hj = check_Hj(prob.spec, prob.p, default_Hj_samples(prob.spec));
  ThreeSolutions three = find_three(prob, e1, e2, cfg.flow, cfg.multistart);

  json branches = json::object();
  json sweep = json::array();
  for (const auto& r : three.sweep) sweep.push_back(io::to_json(r));
  for (const BranchReport* b : {&three.positive, &three.negative, &three.sign_changing}) {
    branches[b->name] = io::to_json(*b);
    if (b->record) out.csv("solution_" + b->name + ".csv", m, b->record->u);
  }
  json j{{"command", "solve"},
         {"config", to_json(cfg)},
         {"lambda", prob.lambda},
         {"lambda1", e1.lambda},
         {"lambda2", e2.lambda},
         {"hj", io::to_json(hj)},
         {"branches", branches},
         {"distinct", three.distinct},
         {"positive_min_nodal", three.positive_min_nodal},
         {"stats", io::to_json(three.stats)},
         {"sweep", sweep}};
  if (prob.spec.odd() && three.positive.record && three.negative.record) {
    j["odd_symmetry_distance"] = sup_distance(-three.positive.record->u, three.negative.record->u);
  } else {
    j["odd_symmetry_distance"] = nullptr;
  }
  j["status"] = three.all_ok() ? "ok" : "failure";
  out.report("solve_report.json", j);

  res.summary.push_back("lambda = " + fmt("%.10g", prob.lambda) + " (lambda1_h = " + fmt("%.10g", e1.lambda) + ")");
  char line[160];
  std::snprintf(line, sizeof line, "%-14s %-14s %14s %12s %6s", "branch", "sign", "phi", "residual", "zeros");
  res.summary.push_back(line);
  for (const BranchReport* b : {&three.positive, &three.negative, &three.sign_changing}) {
    if (b->record) {
      const auto& r = *b->record;
      std::snprintf(line, sizeof line, "%-14s %-14s %14.8g %12.3e %6d", b->name.c_str(), to_string(r.sign).c_str(),
                    r.phi, r.residual, r.interior_zeros);
    } else {
      std::snprintf(line, sizeof line, "%-14s FAILED: %s", b->name.c_str(), b->error.c_str());
    }
    res.summary.push_back(line);
  }
  res.summary.push_back(std::string("distinct: ") + (three.distinct ? "yes" : "no") +
                        "   monotonicity violations: " + std::to_string(three.stats.monotonicity_violations));
  res.exit_code = three.all_ok() ? kExitOk : kExitSolverFailure;
  res.report = j;
  return res;
}

CommandResult cmd_flow_trace(const RunConfig& cfg) {
  CommandResult res;
  const Mesh m = cfg.mesh();
  if (cfg.n % 2 == 0 || cfg.n < 5) throw ConfigError("problem.n: flow-trace needs an odd n >= 5");
  Artifacts out{cfg};
  EigenPair e1 = principal(cfg);
  EigenPair e2 = eigen_second_1d(cfg.p, m, cfg.flow.newton);
  const Problem prob = make_problem(cfg, e1.lambda);
  PlanePoint dir = plane_direction(e1, e2, cfg.trace.theta, cfg.p, m);
  GridFn v0 = cfg.trace.amplitude * dir.u;
  FlowTrace tr = integrate(prob, v0, cfg.flow);
  out.trace("trace.csv", tr);
  out.csv("start.csv", m, v0);
  out.csv("terminal.csv", m, tr.terminal.u);
  json j{{"command", "flow-trace"},
         {"config", to_json(cfg)},
         {"lambda", prob.lambda},
         {"status", to_string(tr.status)},
         {"steps", tr.steps},
         {"halvings", tr.halvings},
         {"snapshots", tr.snapshots.size()},
         {"first_cone", to_string(tr.first_cone)},
         {"monotonicity_violations", tr.monotonicity_violations},
         {"start", io::to_json(make_state(prob, v0, 0.0, cfg.flow))},
         {"terminal", io::to_json(tr.terminal)},
         {"best", io::to_json(tr.best)}};
  out.report("flow_trace_report.json", j);
  res.summary.push_back("status " + to_string(tr.status) + " after " + std::to_string(tr.steps) + " steps, t = " +
                        fmt("%.6g", tr.terminal.t));
  res.summary.push_back("phi " + fmt("%.10g", tr.terminal.phi) + "   residual " + fmt("%.3e", tr.terminal.residual) +
                        "   sign " + to_string(classify_sign(tr.terminal.u, 1e-10)));
  res.report = j;
  return res;
}

// ---------------------------------------------------------------------------------------------

namespace props {

GridFn random_nonnegative_start(const Mesh& m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const bool smooth = U(rng) < 0.5;
  GridFn v(static_cast<std::size_t>(m.n));
  if (smooth) {
    double c[5];
    for (double& ck : c) ck = 2.0 * U(rng) - 1.0;
    c[0] = std::abs(c[0]) + 0.2;
    for (int i = 0; i < m.n; ++i) {
      double x = m.node(i) / m.length, s = 0.0;
      for (int k = 0; k < 5; ++k) s += c[k] * std::sin((k + 1) * std::numbers::pi * x);
      v[i] = std::max(0.0, s);
    }
  } else {
    for (int i = 0; i < m.n; ++i) v[i] = U(rng);
  }
  double sup = v.sup_norm();
  if (sup == 0.0) {
    v[m.n / 2] = 1.0;
    sup = 1.0;
  }
  const double amp = 0.1 * std::pow(300.0, U(rng));
  return (amp / sup) * v;
}

GridFn random_mixed_start(const Mesh& m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  GridFn v(static_cast<std::size_t>(m.n));
  double c[6];
  for (double& ck : c) ck = 2.0 * U(rng) - 1.0;
  for (int i = 0; i < m.n; ++i) {
    double x = m.node(i) / m.length, s = 0.0;
    for (int k = 0; k < 6; ++k) s += c[k] * std::sin((k + 1) * std::numbers::pi * x);
    v[i] = s + 0.05 * (2.0 * U(rng) - 1.0);
  }
  const double amp = 0.1 * std::pow(300.0, U(rng));
  return (amp / v.sup_norm()) * v;
}

namespace {

std::vector<GridFn> cone_starts(const Mesh& m, int starts, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<GridFn> v;
  for (int i = 0; i < starts; ++i) v.push_back(random_nonnegative_start(m, rng));
  return v;
}

struct OneFlow {
  FlowTrace tr;
  std::string error;
};

OneFlow run_one(const Problem& prob, const GridFn& v0, const FlowConfig& cfg) {
  OneFlow f;
  try {
    f.tr = integrate(prob, v0, cfg);
  } catch (const std::exception& e) {
    f.error = e.what();
  }
  return f;
}

ConeSuite summarize_cone(const std::vector<OneFlow>& flows, int starts) {
  ConeSuite s;
  s.starts = starts;
  s.min_nodal_positive = std::numeric_limits<double>::infinity();
  s.max_nodal_negative = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 2 * starts; ++i) {
    const OneFlow& f = flows[i];
    const bool pos = i < starts;
    if (!f.error.empty()) {
      // a flow that cannot be continued says nothing about invariance; report it
      s.statuses.push_back("error: " + f.error);
      continue;
    }
    s.stats.add(f.tr);
    s.statuses.push_back(to_string(f.tr.status));
    if (pos) {
      s.min_nodal_positive = std::min(s.min_nodal_positive, f.tr.min_nodal);
      if (f.tr.min_nodal < -kConeTolerance) ++s.positive_violations;
    } else {
      s.max_nodal_negative = std::max(s.max_nodal_negative, f.tr.max_nodal);
      if (f.tr.max_nodal > kConeTolerance) ++s.negative_violations;
    }
  }
  return s;
}

FlowConfig property_flow_config(const FlowConfig& cfg) {
  FlowConfig c = cfg;
  c.trace_stride = 0;
  return c;
}

}  // namespace

ConeSuite cone_invariance(const Problem& prob, const FlowConfig& cfg, int starts, std::uint64_t seed) {
  const auto v = cone_starts(prob.mesh, starts, seed);
  const FlowConfig fc = property_flow_config(cfg);
  std::vector<OneFlow> flows(2 * static_cast<std::size_t>(starts));
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < 2 * starts; ++i) {
    flows[i] = run_one(prob, i < starts ? v[i] : -v[i - starts], fc);
  }
  return summarize_cone(flows, starts);
}

ConeSuite cone_invariance_serial(const Problem& prob, const FlowConfig& cfg, int starts, std::uint64_t seed) {
  const auto v = cone_starts(prob.mesh, starts, seed);
  const FlowConfig fc = property_flow_config(cfg);
  std::vector<OneFlow> flows(2 * static_cast<std::size_t>(starts));
  for (int i = 0; i < 2 * starts; ++i) flows[i] = run_one(prob, i < starts ? v[i] : -v[i - starts], fc);
  return summarize_cone(flows, starts);
}

PotentialSpec broken_sign_spec() {
  return PotentialSpec::custom_piecewise({}, {PolyPiece{{-2.0, 0.0, 0.0, 1.0}}}, 4.0, 3.0, 1.0, 3.0);
}

GradientCheck gradient_consistency(const Problem& prob, int pairs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const Mesh& m = prob.mesh;
  GradientCheck gc;
  gc.pairs = pairs;
  for (int k = 0; k < pairs; ++k) {
    GridFn u = random_mixed_start(m, rng);
    const int i = static_cast<int>(U(rng) * m.n) % m.n;
    // keep the perturbed node away from the breakpoints of f
    for (double bp : prob.spec.breakpoints) {
      if (std::abs(u[i] - bp) < 1e-3) u[i] = bp + 1e-2;
    }
    const GridFn g = subdiff_element(prob, u, select_w(prob, u, SelectionRule::min_norm));
    const double eps = 1e-6 * std::max(1.0, std::abs(u[i]));
    GridFn up = u, um = u;
    up[i] += eps;
    um[i] -= eps;
    const double fd = (phi(prob, up) - phi(prob, um)) / (2.0 * eps) / m.h;
    const double err = std::abs(fd - g[i]) / std::max(std::abs(g[i]), 1e-6 * std::max(1.0, g.sup_norm()));
    gc.max_rel_error = std::max(gc.max_rel_error, err);
    if (!(err <= 1e-4)) ++gc.failures;
  }
  return gc;
}

PairCheck plap_monotonicity(double p, const Mesh& m, int pairs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  PairCheck pc;
  pc.pairs = pairs;
  pc.worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < pairs; ++k) {
    GridFn u = random_mixed_start(m, rng), v = random_mixed_start(m, rng);
    const double val = inner_h(apply_plap(u, p, m) - apply_plap(v, p, m), u - v, m);
    // rounding floor relative to the size of the two terms
    const double scale = std::abs(inner_h(apply_plap(u, p, m), u - v, m)) + std::abs(inner_h(apply_plap(v, p, m), u - v, m));
    const double margin = val + 1e-12 * scale;
    pc.worst = std::min(pc.worst, val);
    if (margin < 0.0) ++pc.failures;
  }
  if (pairs == 0) pc.worst = 0.0;
  return pc;
}

PairCheck comparison_principle(double p, const Mesh& m, int pairs, std::uint64_t seed, const NewtonOpts& newton) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  PairCheck pc;
  pc.pairs = pairs;
  pc.worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < pairs; ++k) {
    GridFn f = random_nonnegative_start(m, rng);
    GridFn extra = random_nonnegative_start(m, rng);
    extra *= U(rng);
    GridFn uf = inverse_plap(f, p, m, newton);
    GridFn ug = inverse_plap(f + extra, p, m, newton);
    const double tol = 1e-10 * std::max(1.0, ug.sup_norm());
    const double m1 = uf.min();
    const double m2 = (ug - uf).min();
    pc.worst = std::min({pc.worst, m1, m2});
    if (m1 < -tol || m2 < -tol) ++pc.failures;
  }
  if (pairs == 0) pc.worst = 0.0;
  return pc;
}

PairCheck rayleigh_bound(double p, const Mesh& m, double lambda1, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  PairCheck pc;
  pc.pairs = samples;
  pc.worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    GridFn u = (k % 2 == 0) ? random_mixed_start(m, rng) : random_nonnegative_start(m, rng);
    const double margin = rayleigh_quotient(u, p, m) - lambda1;
    pc.worst = std::min(pc.worst, margin);
    if (margin < -1e-8) ++pc.failures;
  }
  if (samples == 0) pc.worst = 0.0;
  return pc;
}

}  // namespace props

// ---------------------------------------------------------------------------------------------

CommandResult cmd_verify(const RunConfig& cfg) {
  CommandResult res;
  const auto& selected = cfg.verify.properties ? *cfg.verify.properties : all_properties();
  auto wants = [&](const char* name) { return std::find(selected.begin(), selected.end(), name) != selected.end(); };
  Artifacts out{cfg};
  const std::uint64_t seed = cfg.verify.seed;
  json props_json = json::array();
  bool all_passed = true;
  auto record = [&](const std::string& name, bool passed, json detail) {
    props_json.push_back(json{{"name", name}, {"passed", passed}, {"detail", std::move(detail)}});
    all_passed = all_passed && passed;
    res.summary.push_back((passed ? "PASS  " : "FAIL  ") + name);
  };

  if (selected.empty()) {
    json j{{"command", "verify"}, {"seed", seed}, {"properties", props_json}, {"all_passed", true}};
    out.report("verify_report.json", j);
    res.report = j;
    res.summary.push_back("no properties selected");
    return res;
  }

  const Mesh m = cfg.mesh();
  const bool need_problem = wants("flow_monotonicity") || wants("cone_invariance") ||
                            wants("cone_invariance_negative_control") || wants("gradient_consistency") ||
                            wants("rayleigh_bound");
  double lambda1 = 0.0;
  std::optional<Problem> prob;
  if (need_problem) {
    lambda1 = principal(cfg).lambda;
    prob = make_problem(cfg, lambda1);
  }

  if (wants("hj_diagnostics")) {
    HjReport hj = check_Hj(cfg.spec, cfg.p, default_Hj_samples(cfg.spec));
    record("hj_diagnostics", hj.all_passed(), io::to_json(hj));
  }

  if (wants("slope_inequality") || wants("zero_slope_equivalence") || wants("schauder_implies_outward")) {
    auto samples = oracle::make_slope_samples(sub_seed(seed, 1), cfg.verify.slope_samples);
    auto suite = oracle::run_slope_suite(samples);
    json d = io::to_json(suite);
    d["grid_tolerance"] = oracle::kGridTolerance;
    d["zero_threshold"] = oracle::kZeroThreshold;
    if (wants("slope_inequality")) record("slope_inequality", suite.inequality_violations == 0, d);
    if (wants("zero_slope_equivalence")) record("zero_slope_equivalence", suite.equivalence_violations == 0, d);
    if (wants("schauder_implies_outward"))
      record("schauder_implies_outward", suite.implication_violations == 0, d);
  }

  if (wants("invariance_examples")) {
    using oracle::SmallProblem;
    const std::vector<double> b{1.0, 0.5};
    SmallProblem inside = SmallProblem::quadratic(b);
    SmallProblem outside = SmallProblem::quadratic({-1.0, -0.5});
    const std::vector<std::vector<double>> pts{{0.0, 0.0}, {0.0, 2.0}, {1.5, 0.0}, {2.0, 3.0}};
    bool ok = true;
    json per = json::array();
    for (const auto& x : pts) {
      auto vin = oracle::check_invariance_condition(inside, x, 1);
      ok = ok && vin.schauder && vin.outward;
      per.push_back(json{{"x", x}, {"schauder", vin.schauder}, {"outward", vin.outward}});
    }
    auto v0 = oracle::check_invariance_condition(outside, {0.0, 0.0}, 1);
    ok = ok && !v0.schauder;
    record("invariance_examples", ok,
           json{{"center_in_cone", per}, {"center_outside_schauder_at_origin", v0.schauder}});
  }

  std::optional<props::ConeSuite> cone;
  if (wants("cone_invariance") || wants("flow_monotonicity")) {
    cone = props::cone_invariance(*prob, cfg.flow, cfg.verify.cone_starts, sub_seed(seed, 2));
  }
  if (wants("cone_invariance")) {
    const auto& c = *cone;
    json d{{"starts", c.starts},
           {"tolerance", props::kConeTolerance},
           {"positive_violations", c.positive_violations},
           {"negative_violations", c.negative_violations},
           {"min_nodal_positive", c.min_nodal_positive},
           {"max_nodal_negative", c.max_nodal_negative},
           {"flows", c.stats.flows}};
    std::map<std::string, int> counts;
    for (const auto& st : c.statuses) ++counts[st];
    d["terminal_status_counts"] = counts;
    const bool complete = c.stats.flows == 2L * c.starts;
    d["complete"] = complete;
    record("cone_invariance", complete && c.positive_violations == 0 && c.negative_violations == 0, d);
  }
  if (wants("flow_monotonicity")) {
    FlowStats st = cone->stats;
    std::mt19937_64 rng(sub_seed(seed, 3));
    const int mixed = std::max(1, cfg.verify.cone_starts / 4);
    std::vector<GridFn> starts;
    for (int i = 0; i < mixed; ++i) starts.push_back(props::random_mixed_start(m, rng));
    FlowConfig fc = cfg.flow;
    fc.trace_stride = 0;
    std::vector<FlowTrace> traces(starts.size());
    std::vector<char> failed(starts.size(), 0);
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < mixed; ++i) {
      try {
        traces[i] = integrate(*prob, starts[i], fc);
      } catch (const std::exception&) {
        failed[i] = 1;
      }
    }
    int errors = 0;
    for (int i = 0; i < mixed; ++i) {
      if (failed[i]) ++errors;
      else st.add(traces[i]);
    }
    json d = io::to_json(st);
    d["flow_errors"] = errors;
    d["threshold"] = 1e-10;
    record("flow_monotonicity", st.monotonicity_violations == 0 && errors == 0, d);
  }
  if (wants("cone_invariance_negative_control")) {
    Problem broken = *prob;
    broken.spec = props::broken_sign_spec();
    HjReport hj = check_Hj(broken.spec, broken.p, default_Hj_samples(broken.spec));
    auto c = props::cone_invariance(broken, cfg.flow, std::max(1, cfg.verify.cone_starts / 10), sub_seed(seed, 4));
    const bool detected = c.positive_violations > 0;
    record("cone_invariance_negative_control", detected && !hj.get("v").passed,
           json{{"spec", io::to_json(broken.spec)},
                {"sign_condition_flagged", !hj.get("v").passed},
                {"positive_violations", c.positive_violations},
                {"min_nodal_positive", c.min_nodal_positive},
                {"violation_detected", detected}});
  }
  if (wants("gradient_consistency")) {
    auto g = props::gradient_consistency(*prob, cfg.verify.gradient_pairs, sub_seed(seed, 5));
    record("gradient_consistency", g.failures == 0,
           json{{"pairs", g.pairs}, {"failures", g.failures}, {"max_rel_error", g.max_rel_error}, {"tolerance", 1e-4}});
  }
  if (wants("plap_monotonicity")) {
    auto r = props::plap_monotonicity(cfg.p, m, cfg.verify.operator_pairs, sub_seed(seed, 6));
    record("plap_monotonicity", r.failures == 0, json{{"pairs", r.pairs}, {"failures", r.failures}, {"min_value", r.worst}});
  }
  if (wants("comparison_principle")) {
    auto r = props::comparison_principle(cfg.p, m, cfg.verify.operator_pairs, sub_seed(seed, 7), cfg.flow.newton);
    record("comparison_principle", r.failures == 0,
           json{{"pairs", r.pairs}, {"failures", r.failures}, {"min_margin", r.worst}});
  }
  if (wants("rayleigh_bound")) {
    auto r = props::rayleigh_bound(cfg.p, m, lambda1, cfg.verify.operator_pairs, sub_seed(seed, 8));
    record("rayleigh_bound", r.failures == 0,
           json{{"samples", r.pairs}, {"failures", r.failures}, {"min_margin", r.worst}, {"lambda1", lambda1}});
  }

  json j{{"command", "verify"},
         {"config", to_json(cfg)},
         {"seed", seed},
         {"properties", props_json},
         {"all_passed", all_passed}};
  out.report("verify_report.json", j);
  res.report = j;
  res.exit_code = all_passed ? kExitOk : kExitPropertyFailure;
  return res;
}

}  // namespace lipflow
