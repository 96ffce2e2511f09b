#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "lipflow/commands.hpp"

using namespace lipflow;

namespace {

struct Common {
  std::string config_path;
  std::string output_dir;
  long long seed = -1;
  bool quiet = false;
};

int run(const Common& opts, CommandResult (*cmd)(const RunConfig&), bool with_seed) {
  try {
    RunConfig cfg = opts.config_path.empty() ? parse_config(nlohmann::json::object()) : load_config(opts.config_path);
    if (!opts.output_dir.empty()) cfg.output.directory = opts.output_dir;
    if (with_seed && opts.seed >= 0) cfg.verify.seed = static_cast<std::uint64_t>(opts.seed);
    CommandResult r = cmd(cfg);
    if (!opts.quiet) {
      for (const auto& line : r.summary) std::cout << line << '\n';
    }
    return r.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << " (residual " << e.residual() << ", iterations " << e.iterations()
              << ")\n";
    return kExitSolverFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolverFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positive, negative and sign-changing solutions of 1-D p-Laplacian inclusions by descending flow"};
  app.require_subcommand(1);
  Common opts;

  auto add = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", opts.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("-o,--output", opts.output_dir, "output directory (overrides the config)");
    sub->add_flag("-q,--quiet", opts.quiet, "suppress the summary");
    return sub;
  };
  CLI::App* eigen = add("eigen", "first and second eigenpairs of the discrete p-Laplacian");
  CLI::App* solve = add("solve", "positive, negative and sign-changing solutions");
  CLI::App* verify = add("verify", "property suites");
  verify->add_option("-s,--seed", opts.seed, "override verify.seed")->check(CLI::NonNegativeNumber);
  CLI::App* trace = add("flow-trace", "a single descending flow, recorded");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfigError;
  }

  if (*eigen) return run(opts, cmd_eigen, false);
  if (*solve) return run(opts, cmd_solve, false);
  if (*verify) return run(opts, cmd_verify, true);
  if (*trace) return run(opts, cmd_flow_trace, false);
  return kExitConfigError;
}
