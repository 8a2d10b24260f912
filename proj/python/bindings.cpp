#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ckm/errors.hpp"
#include "ckm/fpt.hpp"
#include "ckm/generators.hpp"
#include "ckm/io.hpp"
#include "ckm/oracle.hpp"
#include "ckm/transport.hpp"
#include "ckm/tree.hpp"
#include "ckm/uncap.hpp"

namespace py = pybind11;
using namespace ckm;

namespace {

Instance make_instance(const std::vector<double>& dist, int n_facilities, int n_clients,
                       const std::vector<int>& capacities, int k) {
    Instance inst;
    const int n = n_facilities + n_clients;
    inst.metric = Metric::from_dense(dist, n);
    inst.k = k;
    inst.capacities = capacities;
    inst.facilities.resize(n_facilities);
    for (int i = 0; i < n_facilities; ++i) inst.facilities[i] = i;
    inst.clients.resize(n_clients);
    for (int i = 0; i < n_clients; ++i) inst.clients[i] = n_facilities + i;
    return inst;
}

TransportResult assign_to_open(const Instance& inst, const std::vector<PointId>& open) {
    std::vector<int> caps;
    caps.reserve(open.size());
    for (PointId f : open) caps.push_back(inst.capacity_of(f));
    return optimal_mapping(TransportProblem::from_metric(inst.metric, open, caps, inst.clients));
}

}  // namespace

PYBIND11_MODULE(_ckm, m) {
    m.doc() = "Capacitated k-median solver workbench";

    py::register_exception<InfeasibleError>(m, "Infeasible");
    py::register_exception<RefusedScaleError>(m, "RefusedScale");
    py::register_exception<ParseError>(m, "ParseFailure");

    py::class_<Metric>(m, "Metric")
        .def("__call__", [](const Metric& d, int u, int v) { return d(u, v); })
        .def_property_readonly("size", &Metric::size);

    py::class_<Instance>(m, "Instance")
        .def(py::init(&make_instance), py::arg("dist"), py::arg("n_facilities"),
             py::arg("n_clients"), py::arg("capacities"), py::arg("k"))
        .def_readonly("metric", &Instance::metric)
        .def_readonly("facilities", &Instance::facilities)
        .def_readonly("capacities", &Instance::capacities)
        .def_readonly("clients", &Instance::clients)
        .def_readonly("k", &Instance::k);

    py::class_<Assignment>(m, "Assignment")
        .def_readonly("open", &Assignment::open)
        .def_readonly("clients", &Assignment::clients)
        .def_readonly("phi", &Assignment::phi);

    py::class_<TransportResult>(m, "TransportResult")
        .def_readonly("assignment", &TransportResult::assignment)
        .def_readonly("cost", &TransportResult::cost);

    py::class_<UncapSolution>(m, "UncapSolution")
        .def_readonly("open", &UncapSolution::open)
        .def_readonly("psi", &UncapSolution::psi)
        .def_readonly("ell_budget", &UncapSolution::ell_budget)
        .def_readonly("cost", &UncapSolution::cost);

    py::class_<CkmPipelineResult>(m, "PipelineResult")
        .def_readonly("assignment", &CkmPipelineResult::assignment)
        .def_readonly("cost", &CkmPipelineResult::cost)
        .def_readonly("cost_d_ell", &CkmPipelineResult::cost_d_ell)
        .def_readonly("uncap_cost", &CkmPipelineResult::uncap_cost)
        .def_readonly("ell_used", &CkmPipelineResult::ell_used)
        .def_readonly("configurations_tried", &CkmPipelineResult::configurations_tried);

    py::class_<LogkResult>(m, "LogkResult")
        .def_readonly("assignment", &LogkResult::assignment)
        .def_readonly("cost", &LogkResult::cost)
        .def_readonly("uncap_cost", &LogkResult::uncap_cost)
        .def_readonly("samples_run", &LogkResult::samples_run);

    py::class_<OracleResult>(m, "OracleResult")
        .def_readonly("assignment", &OracleResult::assignment)
        .def_readonly("cost", &OracleResult::cost);

    m.def("assignment_cost", &assignment_cost, py::arg("assignment"), py::arg("metric"));
    m.def("validate_instance", &validate_instance, py::arg("instance"),
          py::arg("check_triangle") = false, py::arg("tol") = 1e-9);
    m.def("validate_assignment", &validate_assignment, py::arg("instance"), py::arg("assignment"));

    m.def("optimal_mapping", &assign_to_open, py::arg("instance"), py::arg("open"),
          "Exact capacity-respecting assignment to a fixed open set");
    m.def("bicriteria_greedy", &bicriteria_greedy, py::arg("instance"), py::arg("k"),
          py::arg("epsilon"));
    m.def("local_search_kmedian", &local_search_kmedian, py::arg("instance"), py::arg("k"),
          py::arg("max_iters") = -1);

    m.def("solve_ckm", &solve_ckm, py::arg("instance"), py::arg("k"), py::arg("epsilon"),
          py::call_guard<py::gil_scoped_release>());
    m.def("solve_ckm_uniform", &solve_ckm_uniform, py::arg("instance"), py::arg("k"),
          py::arg("epsilon"), py::call_guard<py::gil_scoped_release>());
    m.def("solve_logk", &solve_logk, py::arg("instance"), py::arg("k"), py::arg("samples"),
          py::arg("seed"), py::call_guard<py::gil_scoped_release>());
    m.def("exact_ckm", [](const Instance& inst, bool force) {
              OracleLimits limits;
              limits.force = force;
              return exact_ckm(inst, limits);
          },
          py::arg("instance"), py::arg("force") = false);
    m.def("exact_uncap_kmedian", [](const Instance& inst, int k, bool force) {
              OracleLimits limits;
              limits.force = force;
              return exact_uncap_kmedian(inst, k, limits);
          },
          py::arg("instance"), py::arg("k"), py::arg("force") = false);

    m.def("gen_random_instance",
          [](int n_facilities, int n_clients, int k, int cap_min, int cap_max,
             std::uint64_t seed) {
              RandomInstanceParams p;
              p.n_facilities = n_facilities;
              p.n_clients = n_clients;
              p.k = k;
              p.cap_min = cap_min;
              p.cap_max = cap_max;
              return gen_random_instance(p, seed);
          },
          py::arg("n_facilities"), py::arg("n_clients"), py::arg("k"), py::arg("cap_min"),
          py::arg("cap_max"), py::arg("seed"));

    m.def("load_instance", [](const std::string& path) { return read_instance_file(path).instance; },
          py::arg("path"));
    m.def("save_instance", [](const std::string& path, const Instance& inst) {
              write_instance_file(path, inst);
          },
          py::arg("path"), py::arg("instance"));
}
