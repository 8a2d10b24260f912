#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ckm/errors.hpp"
#include "ckm/experiment.hpp"
#include "ckm/fpt.hpp"
#include "ckm/generators.hpp"
#include "ckm/io.hpp"
#include "ckm/oracle.hpp"
#include "ckm/transport.hpp"
#include "ckm/tree.hpp"
#include "ckm/uncap.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitInvalidInput = 3;
constexpr int kExitRefusedScale = 4;

struct StatsSink {
    bool enabled = false;
    void emit(const json& j) const {
        if (enabled) std::cout << j.dump() << "\n";
    }
};

std::vector<ckm::PointId> parse_index_list(const std::string& text) {
    std::vector<ckm::PointId> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoi(item));
    }
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"Capacitated k-median solver workbench"};
    app.require_subcommand(1);
    app.fallthrough();  // lets `--stats` appear after the subcommand too

    StatsSink stats;
    app.add_flag("--stats", stats.enabled, "emit machine-readable records, one JSON per line");

    // gen
    auto* gen = app.add_subcommand("gen", "generate an instance file");
    std::string gen_type = "random";
    ckm::RandomInstanceParams gp;
    std::uint64_t gen_seed = 1;
    std::string gen_out, gen_graph_file;
    int gen_k = 2;
    gen->add_option("--type", gen_type, "random | dominating-set")
        ->check(CLI::IsMember({"random", "dominating-set"}));
    gen->add_option("--nf", gp.n_facilities, "number of facilities");
    gen->add_option("--nc", gp.n_clients, "number of clients");
    gen->add_option("--k", gen_k, "facility budget");
    gen->add_option("--cap-min", gp.cap_min, "minimum capacity");
    gen->add_option("--cap-max", gp.cap_max, "maximum capacity");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--graph-file", gen_graph_file,
                    "unweighted graph JSON {n, edges} for the dominating-set reduction");
    gen->add_option("--out", gen_out, "output instance file")->required();

    // validate
    auto* validate = app.add_subcommand("validate", "check instance invariants");
    std::string val_in;
    bool val_triangle = false;
    validate->add_option("--in", val_in, "instance file")->required();
    validate->add_flag("--check-triangle", val_triangle, "run the O(n^3) triangle scan");

    // center
    auto* center = app.add_subcommand("center", "emit the centered instance");
    std::string center_in, center_out, center_mode = "greedy";
    double center_eps = 0.5;
    center->add_option("--in", center_in)->required();
    center->add_option("--out", center_out)->required();
    center->add_option("--mode", center_mode, "greedy | local-search")
        ->check(CLI::IsMember({"greedy", "local-search"}));
    center->add_option("--epsilon", center_eps, "bicriteria epsilon (greedy mode)");

    // assign
    auto* assign = app.add_subcommand("assign", "optimal mapping for a fixed open set");
    std::string assign_in, assign_open, assign_out;
    assign->add_option("--in", assign_in)->required();
    assign->add_option("--open", assign_open, "comma-separated facility ids")->required();
    assign->add_option("--out", assign_out, "assignment file");

    // uncap
    auto* uncap = app.add_subcommand("uncap", "uncapacitated subroutines");
    std::string uncap_in, uncap_mode = "greedy";
    double uncap_eps = 0.5;
    int uncap_k = 0;
    uncap->add_option("--in", uncap_in)->required();
    uncap->add_option("--mode", uncap_mode, "greedy | local-search")
        ->check(CLI::IsMember({"greedy", "local-search"}));
    uncap->add_option("--epsilon", uncap_eps);
    uncap->add_option("--k", uncap_k, "override the instance budget");

    // solve
    auto* solve = app.add_subcommand("solve", "run a solver");
    std::string solve_in, solve_alg = "fpt", solve_out;
    double solve_eps = 0.5;
    int solve_samples = 20;
    int solve_k = 0;
    std::uint64_t solve_seed = 1;
    bool solve_force = false;
    solve->add_option("--in", solve_in)->required();
    solve->add_option("--algorithm", solve_alg, "fpt | fpt-uniform | tree | oracle")
        ->check(CLI::IsMember({"fpt", "fpt-uniform", "tree", "oracle"}));
    solve->add_option("--epsilon", solve_eps);
    solve->add_option("--k", solve_k, "override the instance budget");
    solve->add_option("--samples", solve_samples, "tree samples");
    solve->add_option("--seed", solve_seed);
    solve->add_option("--out", solve_out, "assignment file");
    solve->add_flag("--force-oracle", solve_force, "lift the oracle size guard");

    // bench
    auto* bench = app.add_subcommand("bench", "run an experiment grid");
    std::string bench_config, bench_out;
    bench->add_option("--config", bench_config)->required();
    bench->add_option("--out", bench_out, "write the JSONL report here");

    CLI11_PARSE(app, argc, argv);

    if (gen->parsed()) {
        if (gen_type == "random") {
            gp.k = gen_k;
            std::vector<ckm::GraphEdge> edges;
            ckm::Instance inst = ckm::gen_random_instance(gp, gen_seed, &edges);
            if (inst.metric.size() > ckm::kMaxDenseMatrixPoints)
                ckm::write_instance_graph_file(gen_out, inst, edges);
            else
                ckm::write_instance_file(gen_out, inst);
            stats.emit({{"event", "gen"},
                        {"type", "random"},
                        {"seed", gen_seed},
                        {"n_facilities", gp.n_facilities},
                        {"n_clients", gp.n_clients}});
        } else {
            if (gen_graph_file.empty())
                throw ckm::ParseError("gen --type dominating-set requires --graph-file");
            std::ifstream in(gen_graph_file);
            if (!in) throw ckm::ParseError("cannot open file: " + gen_graph_file);
            json jg = json::parse(in, nullptr, true, true);
            ckm::UnweightedGraph g;
            g.n = jg.at("n").get<int>();
            for (const auto& e : jg.at("edges"))
                g.edges.push_back({e[0].get<int>(), e[1].get<int>()});
            ckm::DominatingSetReduction red = ckm::gen_dominating_set_reduction(g, gen_k);
            ckm::write_instance_file(gen_out, red.instance);
            std::cout << "dominating-set reduction: optimum == " << red.target_cost
                      << " iff the graph has a dominating set of size <= " << gen_k << "\n";
        }
        return kExitOk;
    }

    if (validate->parsed()) {
        ckm::InstanceFile file = ckm::read_instance_file(val_in);
        auto violations = ckm::validate_instance(file.instance, val_triangle);
        for (const auto& v : violations) std::cout << "violation: " << v << "\n";
        if (violations.empty()) {
            std::cout << "ok\n";
            return kExitOk;
        }
        return kExitInvalidInput;
    }

    if (center->parsed()) {
        ckm::InstanceFile file = ckm::read_instance_file(center_in);
        ckm::UncapSolution sol =
            center_mode == "greedy"
                ? ckm::bicriteria_greedy(file.instance, file.instance.k, center_eps)
                : ckm::local_search_kmedian(file.instance, file.instance.k);
        ckm::CenteredInstance ci = ckm::build_centered(file.instance, sol);
        ckm::Instance out_inst = ci.as_instance();
        ckm::write_instance_file(center_out, out_inst, ci.centers);
        stats.emit({{"event", "center"},
                    {"mode", center_mode},
                    {"centers", ci.n_centers()},
                    {"uncap_cost", sol.cost}});
        std::cout << "centers: " << ci.n_centers() << ", uncap cost: " << sol.cost << "\n";
        return kExitOk;
    }

    if (assign->parsed()) {
        ckm::InstanceFile file = ckm::read_instance_file(assign_in);
        const ckm::Instance& inst = file.instance;
        std::vector<ckm::PointId> open = parse_index_list(assign_open);
        std::vector<int> caps;
        for (ckm::PointId f : open) caps.push_back(inst.capacity_of(f));
        ckm::TransportResult tr = ckm::optimal_mapping(
            ckm::TransportProblem::from_metric(inst.metric, open, caps, inst.clients));
        std::cout << "cost = " << tr.cost << "\n";
        if (!assign_out.empty()) ckm::write_assignment_file(assign_out, tr.assignment);
        stats.emit({{"event", "assign"}, {"cost", tr.cost}, {"open", open.size()}});
        return kExitOk;
    }

    if (uncap->parsed()) {
        ckm::InstanceFile file = ckm::read_instance_file(uncap_in);
        int k = uncap_k > 0 ? uncap_k : file.instance.k;
        ckm::UncapSolution sol = uncap_mode == "greedy"
                                     ? ckm::bicriteria_greedy(file.instance, k, uncap_eps)
                                     : ckm::local_search_kmedian(file.instance, k);
        std::cout << "open = " << sol.open.size() << " (budget " << sol.ell_budget
                  << "), cost = " << sol.cost << "\n";
        stats.emit({{"event", "uncap"},
                    {"mode", uncap_mode},
                    {"open", sol.open.size()},
                    {"budget", sol.ell_budget},
                    {"cost", sol.cost}});
        return kExitOk;
    }

    if (solve->parsed()) {
        ckm::InstanceFile file = ckm::read_instance_file(solve_in);
        if (solve_k > 0) file.instance.k = solve_k;
        const ckm::Instance& inst = file.instance;
        auto t0 = std::chrono::steady_clock::now();
        ckm::Assignment assignment;
        double cost = 0.0;
        json record{{"event", "solve"}, {"algorithm", solve_alg}, {"seed", solve_seed}};

        if (solve_alg == "oracle") {
            ckm::OracleLimits limits;
            limits.force = solve_force;
            ckm::OracleResult r = ckm::exact_ckm(inst, limits);
            assignment = r.assignment;
            cost = r.cost;
        } else if (solve_alg == "tree") {
            ckm::LogkResult r = ckm::solve_logk(inst, inst.k, solve_samples, solve_seed);
            assignment = r.assignment;
            cost = r.cost;
            record["samples"] = r.samples_run;
            record["uncap_cost"] = r.uncap_cost;
        } else if (file.is_centered()) {
            // A centered file is solved in place: its metric is d_ell.
            ckm::CenteredInstance ci = ckm::centered_from_instance(inst, file.centers);
            ckm::FptResult r =
                solve_alg == "fpt-uniform"
                    ? ckm::solve_uniform_centered(ci, inst.capacities.front(), inst.k)
                    : ckm::solve_nonuniform_centered(ci, inst.k, solve_eps);
            assignment = r.assignment;
            cost = r.cost;
            record["configs"] = r.configurations_tried;
        } else if (solve_alg == "fpt-uniform") {
            ckm::CkmPipelineResult r = ckm::solve_ckm_uniform(inst, inst.k, solve_eps);
            assignment = r.assignment;
            cost = r.cost;
            record["configs"] = r.configurations_tried;
            record["ell"] = r.ell_used;
            record["uncap_cost"] = r.uncap_cost;
            record["cost_d_ell"] = r.cost_d_ell;
        } else {
            ckm::CkmPipelineResult r = ckm::solve_ckm(inst, inst.k, solve_eps);
            assignment = r.assignment;
            cost = r.cost;
            record["configs"] = r.configurations_tried;
            record["d_values"] = r.d_candidates_tried;
            record["ell"] = r.ell_used;
            record["uncap_cost"] = r.uncap_cost;
            record["cost_d_ell"] = r.cost_d_ell;
        }

        auto violations = ckm::validate_assignment(inst, assignment);
        if (!violations.empty())
            throw std::logic_error("solver output failed validation: " + violations.front());

        double wall =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        record["cost"] = cost;
        record["open"] = assignment.open.size();
        record["wall_ms"] = wall;
        std::cout << "cost = " << cost << ", open = " << assignment.open.size() << "\n";
        stats.emit(record);
        if (!solve_out.empty()) ckm::write_assignment_file(solve_out, assignment);
        return kExitOk;
    }

    if (bench->parsed()) {
        ckm::ExperimentConfig config = ckm::read_experiment_config(bench_config);
        ckm::ExperimentReport report = ckm::run_experiment(config);
        std::cout << report.to_table();
        if (stats.enabled) std::cout << report.to_jsonl();
        if (!bench_out.empty()) {
            std::ofstream out(bench_out);
            if (!out) throw ckm::ParseError("cannot write file: " + bench_out);
            out << report.to_jsonl();
        }
        return kExitOk;
    }

    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ckm::InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const ckm::RefusedScaleError& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kExitRefusedScale;
    } catch (const ckm::ParseError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
