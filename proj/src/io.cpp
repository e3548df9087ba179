#include "ssp/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ssp {

Graph read_edge_list(std::istream& in, int min_n) {
    std::vector<Edge> edges;
    int n = min_n;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        long long u = 0, v = 0;
        if (!(ls >> u)) continue;
        std::string rest;
        if (!(ls >> v) || (ls >> rest)) {
            throw std::invalid_argument("line " + std::to_string(lineno) + ": expected \"u v\"");
        }
        if (u < 0 || v < 0 || u > 100000000 || v > 100000000) {
            throw std::invalid_argument("line " + std::to_string(lineno) + ": vertex id out of range");
        }
        edges.push_back({static_cast<int>(u), static_cast<int>(v)});
        n = std::max(n, static_cast<int>(std::max(u, v)) + 1);
    }
    return Graph(n, std::move(edges));
}

Graph read_edge_list_file(const std::string& path, int min_n) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_edge_list(in, min_n);
}

void write_edge_list(std::ostream& out, const Graph& g) {
    out << "# n " << g.n() << " m " << g.m() << "\n";
    for (const auto& e : g.edges()) out << e.u << " " << e.v << "\n";
}

nlohmann::json path_system_to_json(int n, const PathSystem& ps) {
    nlohmann::json paths = nlohmann::json::array();
    for (const auto& p : ps.paths) paths.push_back(p.vertices);
    return {{"n", n}, {"paths", paths}};
}

PathSystem path_system_from_json(const nlohmann::json& j, int* n_out) {
    if (!j.is_object() || !j.contains("paths") || !j["paths"].is_array()) {
        throw std::invalid_argument("path system JSON needs a \"paths\" array");
    }
    PathSystem ps;
    for (const auto& p : j["paths"]) ps.paths.push_back({p.get<std::vector<int>>()});
    if (n_out) *n_out = j.value("n", 0);
    return ps;
}

PathSystem read_path_system_file(const std::string& path, int* n_out) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return path_system_from_json(nlohmann::json::parse(in), n_out);
}

}  // namespace ssp
