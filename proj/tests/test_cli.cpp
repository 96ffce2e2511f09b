#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lipflow/commands.hpp"
#include "lipflow/io.hpp"

using namespace lipflow;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("lipflow_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config defaults and overrides") {
  RunConfig c = parse_config(json::object());
  CHECK(c.p == 2.0);
  CHECK(c.n == 199);
  CHECK(c.resolve_lambda(10.0) == doctest::Approx(5.0));
  RunConfig d = parse_config(json::parse(R"({"problem": {"p": 3, "lambda": 2.5,
      "potential": {"kind": "jump_derivative", "q": 5, "c": 2, "b": 0.5}},
      "multistart": {"sweep": 16}, "output": {"trace_stride": 3}})"));
  CHECK(d.p == 3.0);
  CHECK(d.resolve_lambda(100.0) == 2.5);
  CHECK(d.spec.kind == PotentialKind::jump_derivative);
  CHECK(d.spec.c == 2.0);
  CHECK(d.multistart.sweep == 16);
  CHECK(d.flow.trace_stride == 3);
  // round trip through the echo
  RunConfig e = parse_config(to_json(d));
  CHECK(to_json(e) == to_json(d));
}

TEST_CASE("config errors") {
  auto bad = [](const char* text) { CHECK_THROWS_AS(parse_config(json::parse(text)), ConfigError); };
  bad(R"({"problem": {"p": 1}})");
  bad(R"({"problem": {"lambda_fraction": 1.2}})");
  bad(R"({"problem": {"lambda_fraction": 0}})");
  bad(R"({"problem": {"lambda": 1, "lambda_fraction": 0.5}})");
  bad(R"({"problem": {"n": 1}})");
  bad(R"({"problem": {"potential": {"kind": "nope"}}})");
  bad(R"({"problem": {"potential": {"kind": "smooth_power", "q": 0.5}}})");
  bad(R"({"problem": {"potential": {"kind": "smooth_power", "c": 1}}})");
  bad(R"({"flow": {"eps_crit": -1}})");
  bad(R"({"flow": {"max_steps": 1.5}})");
  bad(R"({"multistart": {"sweep": 1}})");
  bad(R"({"verify": {"properties": ["not_a_property"]}})");
  bad(R"({"verify": {"seed": -3}})");
  bad(R"({"output": {"formats": ["xml"]}})");
  bad(R"({"unknown": {}})");
}

TEST_CASE("lambda above lambda1 is a config error for solve") {
  RunConfig c = parse_config(json::parse(R"({"problem": {"lambda": 50.0, "n": 49}})"));
  c.output.directory = scratch("solve_bad").string();
  CHECK_THROWS_AS(cmd_solve(c), ConfigError);
}

TEST_CASE("csv round trip keeps 17 digits and the boundary zeros") {
  Mesh m = make_mesh(7, 1.0);
  GridFn u(std::vector<double>{0.1, 1.0 / 3.0, -2e-17, 4.0, 5.5, 6.0, 1e300});
  fs::path dir = scratch("csv");
  io::write_gridfn_csv(dir / "u.csv", m, u);
  CHECK(io::read_gridfn_csv(dir / "u.csv", m) == u);
  std::ifstream is(dir / "u.csv");
  std::string header, first;
  std::getline(is, header);
  std::getline(is, first);
  CHECK(header == "x,u");
  CHECK(first == "0,0");
  CHECK_THROWS(io::read_gridfn_csv(dir / "u.csv", make_mesh(8, 1.0)));
}

TEST_CASE("empty property selection is a no-op success") {
  RunConfig c = parse_config(json::parse(R"({"verify": {"properties": []}})"));
  c.output.directory = scratch("verify_empty").string();
  auto r = cmd_verify(c);
  CHECK(r.exit_code == kExitOk);
  CHECK(r.report["properties"].empty());
  CHECK(r.report["all_passed"] == true);
}

TEST_CASE("verify reports are byte-identical for a fixed seed") {
  const char* text = R"({"problem": {"n": 49}, "verify": {"seed": 7, "slope_samples": 300, "cone_starts": 10,
      "gradient_pairs": 10, "operator_pairs": 10}})";
  RunConfig a = parse_config(json::parse(text));
  RunConfig b = a;
  a.output.directory = scratch("det_a").string();
  b.output.directory = scratch("det_b").string();
  CHECK(cmd_verify(a).exit_code == kExitOk);
  CHECK(cmd_verify(b).exit_code == kExitOk);
  std::string ja = slurp(fs::path(a.output.directory) / "verify_report.json");
  std::string jb = slurp(fs::path(b.output.directory) / "verify_report.json");
  // the output directory is echoed in the config block; compare everything else
  json xa = json::parse(ja), xb = json::parse(jb);
  xa["config"]["output"].erase("directory");
  xb["config"]["output"].erase("directory");
  CHECK(xa.dump() == xb.dump());
}

TEST_CASE("broken sign spec fails cone invariance in verify") {
  RunConfig c = parse_config(json::parse(R"({"problem": {"n": 49, "potential": {"kind": "custom_piecewise",
      "q": 4, "a1": 3, "breakpoints": [], "pieces": [[-2, 0, 0, 1]]}},
      "verify": {"properties": ["cone_invariance"], "cone_starts": 10}})"));
  c.output.directory = scratch("broken").string();
  auto r = cmd_verify(c);
  CHECK(r.exit_code == kExitPropertyFailure);
  CHECK(r.report["properties"][0]["passed"] == false);
}

TEST_CASE("eigen and flow-trace write their artifacts") {
  RunConfig c = parse_config(json::parse(R"({"problem": {"n": 49}, "flow_trace": {"amplitude": 30}})"));
  c.output.directory = scratch("eigen").string();
  auto r = cmd_eigen(c);
  CHECK(r.exit_code == kExitOk);
  CHECK(fs::exists(fs::path(c.output.directory) / "u1.csv"));
  CHECK(fs::exists(fs::path(c.output.directory) / "u2.csv"));
  CHECK(fs::exists(fs::path(c.output.directory) / "eigen_report.json"));
  auto t = cmd_flow_trace(c);
  CHECK(t.exit_code == kExitOk);
  std::ifstream is(fs::path(c.output.directory) / "trace.csv");
  std::string header;
  std::getline(is, header);
  CHECK(header == "t,phi,residual,min_u,max_u");
}
