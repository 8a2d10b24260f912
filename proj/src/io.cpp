#include "ckm/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ckm/errors.hpp"

namespace ckm {

using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write file: " + path);
    out << text;
}

json parse_json(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(origin + ": " + e.what());
    }
}

template <class T>
T field(const json& j, const std::string& name, const std::string& origin) {
    if (!j.contains(name)) throw ParseError(origin + ": missing field `" + name + "`");
    try {
        return j.at(name).get<T>();
    } catch (const json::exception& e) {
        throw ParseError(origin + ": field `" + name + "`: " + e.what());
    }
}

}  // namespace

InstanceFile parse_instance_json(const std::string& text, const std::string& origin) {
    json j = parse_json(text, origin);
    if (!j.is_object()) throw ParseError(origin + ": instance file must be a JSON object");

    InstanceFile file;
    Instance& inst = file.instance;
    inst.k = field<int>(j, "k", origin);
    const int nf = field<int>(j, "n_facilities", origin);
    const int nc = field<int>(j, "n_clients", origin);
    if (nf < 0 || nc < 0) throw ParseError(origin + ": negative point counts");
    auto caps = field<std::vector<int>>(j, "capacities", origin);
    if (static_cast<int>(caps.size()) != nf)
        throw ParseError(origin + ": `capacities` must have one entry per facility");

    if (j.contains("centers")) {
        try {
            file.centers = j.at("centers").get<std::vector<PointId>>();
        } catch (const json::exception& e) {
            throw ParseError(origin + ": field `centers`: " + e.what());
        }
    }
    const int n = nf + nc + static_cast<int>(file.centers.size());

    const bool has_dist = j.contains("dist");
    const bool has_graph = j.contains("graph");
    if (has_dist == has_graph)
        throw ParseError(origin + ": exactly one of `dist` or `graph` is required");
    if (has_dist) {
        if (n > kMaxDenseMatrixPoints)
            throw ParseError(origin + ": dense matrices are accepted up to " +
                             std::to_string(kMaxDenseMatrixPoints) +
                             " points; use the `graph` form");
        auto dist = field<std::vector<double>>(j, "dist", origin);
        if (dist.size() != static_cast<std::size_t>(n) * n)
            throw ParseError(origin + ": `dist` must hold a full " + std::to_string(n) + "x" +
                             std::to_string(n) + " row-major matrix");
        inst.metric = Metric::from_dense(std::move(dist), n);
    } else {
        std::vector<GraphEdge> edges;
        const json& g = j.at("graph");
        if (!g.is_array()) throw ParseError(origin + ": `graph` must be an array of [u, v, w]");
        for (const auto& e : g) {
            if (!e.is_array() || e.size() != 3)
                throw ParseError(origin + ": `graph` entries must be [u, v, w]");
            edges.push_back({e[0].get<PointId>(), e[1].get<PointId>(), e[2].get<double>()});
        }
        try {
            inst.metric = metric_from_weighted_graph(edges, n);
        } catch (const std::invalid_argument& e) {
            throw ParseError(origin + ": " + e.what());
        }
    }

    inst.capacities = std::move(caps);
    inst.facilities.resize(nf);
    for (int i = 0; i < nf; ++i) inst.facilities[i] = i;
    inst.clients.resize(nc);
    for (int i = 0; i < nc; ++i) inst.clients[i] = nf + i;
    return file;
}

InstanceFile read_instance_file(const std::string& path) {
    return parse_instance_json(slurp(path), path);
}

std::string instance_to_json(const Instance& inst, const std::vector<PointId>& centers,
                             bool as_graph, const std::vector<GraphEdge>& graph_edges) {
    json j;
    j["k"] = inst.k;
    j["n_facilities"] = inst.n_facilities();
    j["n_clients"] = inst.n_clients();
    j["capacities"] = inst.capacities;
    if (!centers.empty()) j["centers"] = centers;
    if (as_graph) {
        json g = json::array();
        for (const auto& e : graph_edges) g.push_back({e.u, e.v, e.w});
        j["graph"] = g;
    } else {
        j["dist"] = inst.metric.data();
    }
    return j.dump();
}

void write_instance_file(const std::string& path, const Instance& inst,
                         const std::vector<PointId>& centers) {
    spit(path, instance_to_json(inst, centers) + "\n");
}

void write_instance_graph_file(const std::string& path, const Instance& inst,
                               const std::vector<GraphEdge>& edges) {
    spit(path, instance_to_json(inst, {}, /*as_graph=*/true, edges) + "\n");
}

Assignment read_assignment_file(const std::string& path, const Instance& inst) {
    json j = parse_json(slurp(path), path);
    std::vector<PointId> phi;
    try {
        if (j.is_array())
            phi = j.get<std::vector<PointId>>();
        else
            phi = field<std::vector<PointId>>(j, "phi", path);
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    if (phi.size() != inst.clients.size())
        throw ParseError(path + ": `phi` must have one facility per client");
    Assignment a;
    a.clients = inst.clients;
    a.phi = std::move(phi);
    a.open = a.phi;
    std::sort(a.open.begin(), a.open.end());
    a.open.erase(std::unique(a.open.begin(), a.open.end()), a.open.end());
    return a;
}

std::string assignment_to_json(const Assignment& a) {
    json j;
    j["phi"] = a.phi;
    return j.dump();
}

void write_assignment_file(const std::string& path, const Assignment& a) {
    spit(path, assignment_to_json(a) + "\n");
}

}  // namespace ckm
