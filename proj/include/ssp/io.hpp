#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "ssp/graph.hpp"

namespace ssp {

// Edge list: one "u v" pair per line, '#' starts a comment, blank lines ignored.
// The vertex count is max id + 1 unless a larger `min_n` is given.
Graph read_edge_list(std::istream& in, int min_n = 0);
Graph read_edge_list_file(const std::string& path, int min_n = 0);
void write_edge_list(std::ostream& out, const Graph& g);

// {"n": int, "paths": [[v0, v1, ...], ...]}
nlohmann::json path_system_to_json(int n, const PathSystem& ps);
PathSystem path_system_from_json(const nlohmann::json& j, int* n_out = nullptr);
PathSystem read_path_system_file(const std::string& path, int* n_out = nullptr);

}  // namespace ssp
