#include "lipflow/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lipflow::io {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os.precision(17);
  return os;
}

// JSON has no representation for non-finite numbers.
json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

void write_gridfn_csv(const std::filesystem::path& path, const Mesh& m, const GridFn& u) {
  check_conforms(u, m);
  auto os = open_out(path);
  os << "x,u\n";
  os << 0.0 << ',' << 0.0 << '\n';
  for (int i = 0; i < m.n; ++i) os << m.node(i) << ',' << u[i] << '\n';
  os << m.length << ',' << 0.0 << '\n';
}

GridFn read_gridfn_csv(const std::filesystem::path& path, const Mesh& m) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  std::getline(is, line);
  if (line != "x,u") throw std::runtime_error(path.string() + ": expected header x,u");
  std::vector<double> vals;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error(path.string() + ": malformed row");
    vals.push_back(std::stod(line.substr(comma + 1)));
  }
  if (vals.size() != static_cast<std::size_t>(m.n) + 2) {
    throw std::runtime_error(path.string() + ": row count does not match the mesh");
  }
  return GridFn(std::vector<double>(vals.begin() + 1, vals.end() - 1));
}

void write_trace_csv(const std::filesystem::path& path, const FlowTrace& tr) {
  auto os = open_out(path);
  os << "t,phi,residual,min_u,max_u\n";
  for (const auto& s : tr.snapshots) {
    os << s.t << ',' << s.phi << ',' << s.residual << ',' << s.u.min() << ',' << s.u.max() << '\n';
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  auto os = open_out(path);
  os << j.dump(2) << '\n';
}

json read_json(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  return json::parse(is);
}

json to_json(const PotentialSpec& spec) {
  json j{{"kind", to_string(spec.kind)}, {"q", spec.q}, {"mu", spec.mu}, {"M", spec.M}};
  if (spec.kind == PotentialKind::custom_piecewise) {
    j["a1"] = spec.a1;
    j["breakpoints"] = spec.breakpoints;
    json pcs = json::array();
    for (const auto& pc : spec.pieces) pcs.push_back(pc.coeffs);
    j["pieces"] = pcs;
  } else if (spec.kind != PotentialKind::smooth_power) {
    j["c"] = spec.c;
    j["b"] = spec.b;
  }
  return j;
}

json to_json(const HjReport& r) {
  json arr = json::array();
  for (const auto& c : r.conditions) {
    json e{{"name", c.name}, {"passed", c.passed}, {"flagged", c.flagged}, {"detail", c.detail}};
    e["first_violation"] = c.first_violation ? num(*c.first_violation) : json(nullptr);
    arr.push_back(e);
  }
  return json{{"all_passed", r.all_passed()}, {"conditions", arr}};
}

json to_json(const FlowStats& s) {
  return json{{"flows", s.flows},
              {"accepted_steps", s.accepted_steps},
              {"monotonicity_violations", s.monotonicity_violations},
              {"max_phi_increase", num(s.max_phi_increase)},
              {"min_nodal", num(s.min_nodal)},
              {"max_nodal", num(s.max_nodal)}};
}

json to_json(const FlowState& s) {
  return json{{"t", num(s.t)},
              {"phi", num(s.phi)},
              {"residual", num(s.residual)},
              {"cone", to_string(s.cone)},
              {"min_u", num(s.u.size() ? s.u.min() : 0.0)},
              {"max_u", num(s.u.size() ? s.u.max() : 0.0)}};
}

json to_json(const RayResult& r) {
  json hist = json::array();
  for (const auto& h : r.history) hist.push_back(json{{"t", h.t}, {"captured", h.captured}});
  return json{{"theta", r.theta},       {"ok", r.ok},         {"t_star", r.t_star},
              {"t_lo", r.t_lo},         {"t_hi", r.t_hi},     {"verified", r.verified},
              {"margin_consistent", r.margin_consistent},     {"error", r.error},
              {"history", hist},        {"stats", to_json(r.stats)}};
}

json to_json(const RayOutcome& r) {
  return json{{"theta", r.theta},
              {"level", r.level},
              {"ok", r.ok},
              {"verified", r.verified},
              {"t_star", r.t_star},
              {"outcome", to_string(r.outcome)},
              {"best_residual", num(r.best_residual)},
              {"best_phi", num(r.best_phi)},
              {"has_mixed", r.has_mixed},
              {"best_mixed_residual", r.has_mixed ? num(r.best_mixed_residual) : json(nullptr)},
              {"error", r.error}};
}

json to_json(const SolutionRecord& r) {
  return json{{"sign", to_string(r.sign)},
              {"phi", num(r.phi)},
              {"residual", num(r.residual)},
              {"theta", r.theta},
              {"t_star", r.t_star},
              {"edge_rounds", r.edge_rounds},
              {"flow_residual", num(r.flow_residual)},
              {"polished", r.polished},
              {"newton_iterations", r.newton_iterations},
              {"interior_zeros", r.interior_zeros},
              {"min_u", r.u.min()},
              {"max_u", r.u.max()}};
}

json to_json(const BranchReport& b) {
  json j{{"name", b.name}, {"ok", b.ok}, {"error", b.error}, {"edge_residuals", json::array()}};
  for (double v : b.edge_residuals) j["edge_residuals"].push_back(num(v));
  j["record"] = b.record ? to_json(*b.record) : json(nullptr);
  j["ray"] = to_json(b.ray);
  return j;
}

json to_json(const oracle::SlopeSuiteResult& r) {
  return json{{"samples", r.samples},
              {"inequality_violations", r.inequality_violations},
              {"equivalence_violations", r.equivalence_violations},
              {"equivalence_indeterminate", r.equivalence_indeterminate},
              {"zero_slope_samples", r.zero_slope_samples},
              {"boundary_samples", r.boundary_samples},
              {"schauder_premise", r.schauder_premise},
              {"implication_violations", r.implication_violations},
              {"min_margin", num(r.min_margin)},
              {"first_violation", r.first_violation ? json(*r.first_violation) : json(nullptr)}};
}

}  // namespace lipflow::io
