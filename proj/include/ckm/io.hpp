#ifndef CKM_IO_HPP
#define CKM_IO_HPP

#include <string>
#include <vector>

#include "ckm/instance.hpp"

namespace ckm {

// Instance files are JSON objects with fields `k`, `capacities`,
// `n_facilities`, `n_clients`, and either `dist` (full row-major matrix)
// or `graph` (edge list [u, v, w]; the metric is derived by shortest
// paths). Facilities are points 0..n_f-1, clients n_f..n_f+n_c-1.
// Centered instances carry an extra `centers` index array and a matrix
// covering the appended center points.
struct InstanceFile {
    Instance instance;
    std::vector<PointId> centers;  // empty for plain instances

    bool is_centered() const { return !centers.empty(); }
};

// Full matrices are accepted up to this point count; larger instances must
// use the graph form.
inline constexpr int kMaxDenseMatrixPoints = 2000;

InstanceFile read_instance_file(const std::string& path);
InstanceFile parse_instance_json(const std::string& text, const std::string& origin = "<string>");

std::string instance_to_json(const Instance& inst,
                             const std::vector<PointId>& centers = {},
                             bool as_graph = false,
                             const std::vector<GraphEdge>& graph_edges = {});
void write_instance_file(const std::string& path, const Instance& inst,
                         const std::vector<PointId>& centers = {});

// Graph form, for instances beyond the dense-matrix limit; the edges must
// induce the instance's metric.
void write_instance_graph_file(const std::string& path, const Instance& inst,
                               const std::vector<GraphEdge>& edges);

// Assignment files hold the array `phi` of facility indices, one per
// client, in client order.
Assignment read_assignment_file(const std::string& path, const Instance& inst);
std::string assignment_to_json(const Assignment& a);
void write_assignment_file(const std::string& path, const Assignment& a);

}  // namespace ckm

#endif  // CKM_IO_HPP
