#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "lipflow/flow.hpp"
#include "lipflow/multistart.hpp"
#include "lipflow/oracle.hpp"
#include "lipflow/potential.hpp"

namespace lipflow::io {

using nlohmann::json;

/// Columns x,u over all n + 2 mesh points, boundary zeros included.
void write_gridfn_csv(const std::filesystem::path& path, const Mesh& m, const GridFn& u);
/// Reads a file written by write_gridfn_csv back into interior values.
GridFn read_gridfn_csv(const std::filesystem::path& path, const Mesh& m);

/// Columns t,phi,residual,min_u,max_u, one row per snapshot.
void write_trace_csv(const std::filesystem::path& path, const FlowTrace& tr);

/// Pretty-printed with a trailing newline.
void write_json(const std::filesystem::path& path, const json& j);
json read_json(const std::filesystem::path& path);

json to_json(const PotentialSpec& spec);
json to_json(const HjReport& r);
json to_json(const FlowStats& s);
json to_json(const FlowState& s);  // scalars only
json to_json(const RayResult& r);
json to_json(const RayOutcome& r);
json to_json(const SolutionRecord& r);
json to_json(const BranchReport& b);
json to_json(const oracle::SlopeSuiteResult& r);

}  // namespace lipflow::io
