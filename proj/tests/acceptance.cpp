// Acceptance run: one PASS/FAIL line per criterion.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "lipflow/commands.hpp"
#include "lipflow/io.hpp"
#include "lipflow/oracle.hpp"

using namespace lipflow;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int k, const std::string& title, bool pass, const std::string& detail) {
  std::printf("criterion %d %-28s %s  %s\n", k, (title + ":").c_str(), pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

RunConfig benchmark_config(const char* potential, const fs::path& dir) {
  json j = json::parse(R"({"problem": {"p": 2, "lambda_fraction": 0.5, "L": 1, "n": 199}})");
  j["problem"]["potential"] = json::parse(potential);
  RunConfig c = parse_config(j);
  c.output.directory = dir.string();
  return c;
}

struct SolveRun {
  CommandResult res;
  GridFn pos, neg, nodal;
  bool have = false;
};

SolveRun run_solve(const RunConfig& c) {
  SolveRun r;
  r.res = cmd_solve(c);
  const Mesh m = c.mesh();
  const fs::path d(c.output.directory);
  if (fs::exists(d / "solution_positive.csv") && fs::exists(d / "solution_negative.csv") &&
      fs::exists(d / "solution_sign_changing.csv")) {
    r.pos = io::read_gridfn_csv(d / "solution_positive.csv", m);
    r.neg = io::read_gridfn_csv(d / "solution_negative.csv", m);
    r.nodal = io::read_gridfn_csv(d / "solution_sign_changing.csv", m);
    r.have = true;
  }
  return r;
}

bool three_records(const json& rep, double tol, std::string& detail) {
  bool ok = rep["distinct"].get<bool>();
  const char* names[] = {"positive", "negative", "sign_changing"};
  for (const char* n : names) {
    const json& b = rep["branches"][n];
    if (!b["ok"].get<bool>() || b["record"].is_null()) {
      detail += std::string(n) + " missing; ";
      ok = false;
      continue;
    }
    const double res = b["record"]["residual"].get<double>();
    detail += std::string(n) + " " + b["record"]["sign"].get<std::string>() + " res " + fmt("%.2e", res) + "; ";
    ok = ok && res <= tol && b["record"]["sign"] == n;
  }
  return ok;
}

}  // namespace

int main() {
  const fs::path root = fs::temp_directory_path() / "lipflow_acceptance";
  fs::remove_all(root);
  const double pi = std::numbers::pi;

  // 1 -----------------------------------------------------------------------------------------
  {
    Mesh m = make_mesh(199, 1.0);
    auto e1 = eigen_first(2.0, m);
    auto e2 = eigen_second_1d(2.0, m);
    const double r1 = std::abs(e1.lambda - pi * pi) / (pi * pi);
    const double r2 = std::abs(e2.lambda - 4 * pi * pi) / (4 * pi * pi);
    Mesh m3 = make_mesh(399, 1.0);
    auto e3 = eigen_first(3.0, m3);
    const double shot = oracle::shoot_eigenvalue(3.0, 1.0, 0, 1.0, 100.0);
    const double formula = 2.0 * std::pow(pi_p(3.0), 3.0);
    const double r3s = std::abs(e3.lambda - shot) / shot;
    const double r3f = std::abs(e3.lambda - formula) / formula;
    report(1, "eigenvalue anchors", r1 < 1e-3 && r2 < 1e-2 && r3s < 1e-3 && r3f < 1e-3,
           "p=2 rel " + fmt("%.2e", r1) + " / " + fmt("%.2e", r2) + ", p=3 vs shooting " + fmt("%.2e", r3s) +
               " vs formula " + fmt("%.2e", r3f));
  }

  // 2 -----------------------------------------------------------------------------------------
  RunConfig smooth_cfg = benchmark_config(R"({"kind": "smooth_power", "q": 4})", root / "smooth");
  SolveRun smooth = run_solve(smooth_cfg);
  {
    std::string detail;
    bool ok = smooth.res.exit_code == kExitOk && three_records(smooth.res.report, 1e-6, detail) && smooth.have;
    if (smooth.have) {
      const Mesh m = smooth_cfg.mesh();
      Problem prob = make_problem(smooth_cfg, smooth.res.report["lambda1"].get<double>());
      auto b0 = oracle::find_slope_bracket(prob, 0, 1e-2, 100.0, 200);
      auto b1 = oracle::find_slope_bracket(prob, 1, 1e-2, 1000.0, 400);
      if (b0 && b1) {
        auto s0 = oracle::shoot(prob, 0, b0->first, b0->second).on_mesh(m);
        auto s1 = oracle::shoot(prob, 1, b1->first, b1->second).on_mesh(m);
        const double d0 = sup_distance(s0, smooth.pos);
        const double d1 = std::min(sup_distance(s1, smooth.nodal), sup_distance(-s1, smooth.nodal));
        const int zeros = count_sign_changes(smooth.nodal);
        detail += "shooting sup dist " + fmt("%.2e", d0) + " / " + fmt("%.2e", d1) + ", zeros " + std::to_string(zeros);
        ok = ok && d0 < 1e-3 && d1 < 1e-2 && zeros == 1;
      } else {
        detail += "shooting bracket not found";
        ok = false;
      }
    }
    report(2, "three solutions, smooth", ok, detail);
  }

  // 3 -----------------------------------------------------------------------------------------
  RunConfig jump_cfg = benchmark_config(R"({"kind": "jump_derivative", "q": 4, "c": 1, "b": 1})", root / "jump");
  SolveRun jump = run_solve(jump_cfg);
  {
    std::string detail;
    bool ok = jump.res.exit_code == kExitOk && three_records(jump.res.report, 1e-6, detail) && jump.have;
    if (jump.have) {
      detail += "positive min " + fmt("%.3e", jump.pos.min());
      ok = ok && jump.pos.min() > 0.0;
    }
    report(3, "three solutions, jump", ok, detail);
  }

  // 4 -----------------------------------------------------------------------------------------
  {
    long viol = 0, steps = 0;
    double worst = -INFINITY;
    for (const SolveRun* r : {&smooth, &jump}) {
      const json& st = r->res.report["stats"];
      viol += st["monotonicity_violations"].get<long>();
      steps += st["accepted_steps"].get<long>();
      if (st["max_phi_increase"].is_number()) worst = std::max(worst, st["max_phi_increase"].get<double>());
    }
    report(4, "flow monotonicity", viol == 0 && steps > 0,
           std::to_string(steps) + " accepted steps, violations " + std::to_string(viol) + ", largest phi change " +
               fmt("%.2e", worst));
  }

  // 5 -----------------------------------------------------------------------------------------
  {
    Problem prob = make_problem(jump_cfg, jump.res.report["lambda1"].get<double>());
    auto c = props::cone_invariance(prob, jump_cfg.flow, 100, 20240601);
    Problem broken = prob;
    broken.spec = props::broken_sign_spec();
    auto b = props::cone_invariance(broken, jump_cfg.flow, 10, 20240601);
    const bool ok = c.stats.flows == 200 && c.positive_violations == 0 && c.negative_violations == 0 &&
                    c.min_nodal_positive >= -1e-12 && c.max_nodal_negative <= 1e-12 && b.positive_violations > 0;
    report(5, "cone invariance", ok,
           "min over P " + fmt("%.2e", c.min_nodal_positive) + ", max over -P " + fmt("%.2e", c.max_nodal_negative) +
               ", control violations " + std::to_string(b.positive_violations) + "/10");
  }

  // 6 -----------------------------------------------------------------------------------------
  {
    auto samples = oracle::make_slope_samples(20240601, 10000);
    auto s = oracle::run_slope_suite(samples);
    report(6, "slope inequalities", s.passed() && s.samples >= 10000,
           std::to_string(s.samples) + " samples, inequality " + std::to_string(s.inequality_violations) +
               ", equivalence " + std::to_string(s.equivalence_violations) + ", implication " +
               std::to_string(s.implication_violations) + " of " + std::to_string(s.schauder_premise) + " premises");
  }

  // 7 -----------------------------------------------------------------------------------------
  {
    Problem prob = make_problem(smooth_cfg, smooth.res.report["lambda1"].get<double>());
    auto g = props::gradient_consistency(prob, 50, 20240601);
    report(7, "gradient consistency", g.failures == 0 && g.pairs == 50,
           "50 pairs, max relative error " + fmt("%.2e", g.max_rel_error));
  }

  // 8 -----------------------------------------------------------------------------------------
  {
    bool ok = smooth.have && jump.have;
    double d_s = INFINITY, d_j = INFINITY;
    if (ok) {
      d_s = sup_distance(-smooth.pos, smooth.neg);
      d_j = sup_distance(-jump.pos, jump.neg);
      ok = d_s <= 1e-8 && d_j <= 1e-8;
    }
    report(8, "odd symmetry", ok, "smooth " + fmt("%.2e", d_s) + ", jump " + fmt("%.2e", d_j));
  }

  // 9 -----------------------------------------------------------------------------------------
  {
    const fs::path sfile = fs::path(smooth_cfg.output.directory) / "solve_report.json";
    const std::string first_solve = slurp(sfile);
    run_solve(smooth_cfg);
    const bool solve_same = !first_solve.empty() && first_solve == slurp(sfile);

    RunConfig vcfg = parse_config(json::parse(R"({"verify": {"seed": 20240601}})"));
    vcfg.output.directory = (root / "verify").string();
    const fs::path vfile = root / "verify" / "verify_report.json";
    const int rc1 = cmd_verify(vcfg).exit_code;
    const std::string first_verify = slurp(vfile);
    const int rc2 = cmd_verify(vcfg).exit_code;
    const bool verify_same = !first_verify.empty() && first_verify == slurp(vfile);
    report(9, "determinism", solve_same && verify_same && rc1 == 0 && rc2 == 0,
           std::string("solve ") + (solve_same ? "identical" : "differs") + ", verify " +
               (verify_same ? "identical" : "differs") + " (" + std::to_string(first_verify.size()) + " bytes)");
  }

  std::printf("%s: %d criterion failure(s)\n", failures == 0 ? "ALL PASS" : "FAILED", failures);
  return failures == 0 ? 0 : 1;
}
