#include "ckm/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "ckm/errors.hpp"
#include "ckm/fpt.hpp"
#include "ckm/oracle.hpp"
#include "ckm/parallel.hpp"
#include "ckm/tree.hpp"
#include "ckm/uncap.hpp"

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

double wall_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

struct SolveOutcome {
    std::string status = "ok";
    double cost = -1.0;
    Assignment assignment;
    std::string diagnostics;
    bool has_assignment = false;
};

SolveOutcome run_algorithm(const Instance& inst, const AlgorithmSpec& alg, std::uint64_t seed) {
    SolveOutcome out;
    std::ostringstream diag;
    try {
        if (alg.name == "fpt") {
            CkmPipelineResult r = solve_ckm(inst, inst.k, alg.epsilon);
            out.cost = r.cost;
            out.assignment = r.assignment;
            out.has_assignment = true;
            diag << "ell=" << r.ell_used << ";uncap_cost=" << r.uncap_cost
                 << ";cost_d_ell=" << r.cost_d_ell << ";configs=" << r.configurations_tried
                 << ";d_values=" << r.d_candidates_tried;
        } else if (alg.name == "fpt-uniform") {
            CkmPipelineResult r = solve_ckm_uniform(inst, inst.k, alg.epsilon);
            out.cost = r.cost;
            out.assignment = r.assignment;
            out.has_assignment = true;
            diag << "ell=" << r.ell_used << ";uncap_cost=" << r.uncap_cost
                 << ";configs=" << r.configurations_tried;
        } else if (alg.name == "tree") {
            LogkResult r = solve_logk(inst, inst.k, alg.samples, seed);
            out.cost = r.cost;
            out.assignment = r.assignment;
            out.has_assignment = true;
            diag << "samples=" << r.samples_run << ";uncap_cost=" << r.uncap_cost;
        } else if (alg.name == "oracle") {
            OracleResult r = exact_ckm(inst);
            out.cost = r.cost;
            out.assignment = r.assignment;
            out.has_assignment = true;
        } else if (alg.name == "uncap-greedy") {
            UncapSolution r = bicriteria_greedy(inst, inst.k, alg.epsilon);
            out.cost = r.cost;
            diag << "open=" << r.open.size() << ";budget=" << r.ell_budget;
        } else if (alg.name == "uncap-local") {
            UncapSolution r = local_search_kmedian(inst, inst.k);
            out.cost = r.cost;
            diag << "open=" << r.open.size();
        } else {
            throw ParseError("unknown algorithm: " + alg.name);
        }
    } catch (const InfeasibleError& e) {
        out.status = "infeasible";
        out.diagnostics = e.what();
        return out;
    } catch (const RefusedScaleError& e) {
        out.status = "refused-scale";
        out.diagnostics = e.what();
        return out;
    }
    out.diagnostics = diag.str();

    // Capacitated solvers must hand back feasible assignments; a violation
    // here is a solver bug, not an experiment outcome.
    if (out.has_assignment) {
        auto violations = validate_assignment(inst, out.assignment);
        if (!violations.empty())
            throw std::logic_error("solver output failed validation: " + violations.front());
    }
    return out;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(origin + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("experiments") || !j.at("experiments").is_array())
        throw ParseError(origin + ": expected an object with an `experiments` array");

    ExperimentConfig config;
    int index = 0;
    for (const auto& je : j.at("experiments")) {
        const std::string where = origin + ": experiments[" + std::to_string(index++) + "]";
        ExperimentGroup group;
        if (!je.is_object()) throw ParseError(where + " must be an object");
        if (!je.contains("generator") || !je.at("generator").is_object())
            throw ParseError(where + ": missing `generator` object");
        const json& jg = je.at("generator");
        auto geti = [&](const char* name, int fallback) {
            if (!jg.contains(name)) return fallback;
            if (!jg.at(name).is_number_integer())
                throw ParseError(where + ": generator field `" + name + "` must be an integer");
            return jg.at(name).get<int>();
        };
        group.generator.n_facilities = geti("n_facilities", group.generator.n_facilities);
        group.generator.n_clients = geti("n_clients", group.generator.n_clients);
        group.generator.k = geti("k", group.generator.k);
        group.generator.cap_min = geti("cap_min", group.generator.cap_min);
        group.generator.cap_max = geti("cap_max", group.generator.cap_max);

        if (!je.contains("seeds") || !je.at("seeds").is_array())
            throw ParseError(where + ": missing `seeds` array");
        for (const auto& s : je.at("seeds")) {
            if (!s.is_number_integer()) throw ParseError(where + ": seeds must be integers");
            group.seeds.push_back(s.get<std::uint64_t>());
        }

        if (!je.contains("algorithms") || !je.at("algorithms").is_array())
            throw ParseError(where + ": missing `algorithms` array");
        for (const auto& a : je.at("algorithms")) {
            AlgorithmSpec spec;
            if (a.is_string()) {
                spec.name = a.get<std::string>();
            } else if (a.is_object() && a.contains("name")) {
                spec.name = a.at("name").get<std::string>();
                if (a.contains("epsilon")) spec.epsilon = a.at("epsilon").get<double>();
                if (a.contains("samples")) spec.samples = a.at("samples").get<int>();
            } else {
                throw ParseError(where + ": algorithm entries need a `name`");
            }
            static const char* known[] = {"fpt", "fpt-uniform", "tree", "oracle",
                                          "uncap-greedy", "uncap-local"};
            if (std::find_if(std::begin(known), std::end(known), [&](const char* k) {
                    return spec.name == k;
                }) == std::end(known))
                throw ParseError(where + ": unknown algorithm `" + spec.name + "`");
            group.algorithms.push_back(spec);
        }
        if (je.contains("oracle")) group.run_oracle = je.at("oracle").get<bool>();
        config.groups.push_back(std::move(group));
    }
    return config;
}

ExperimentConfig read_experiment_config(const std::string& path) {
    return parse_experiment_config(slurp(path), path);
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
    struct Job {
        RandomInstanceParams params;
        std::uint64_t seed;
        std::vector<AlgorithmSpec> algorithms;
        bool run_oracle;
        std::string id;
    };
    std::vector<Job> jobs;
    for (const auto& group : config.groups)
        for (std::uint64_t seed : group.seeds) {
            std::ostringstream id;
            id << "random-nf" << group.generator.n_facilities << "-nc"
               << group.generator.n_clients << "-k" << group.generator.k << "-s" << seed;
            jobs.push_back({group.generator, seed, group.algorithms, group.run_oracle, id.str()});
        }

    std::vector<std::vector<ExperimentRecord>> per_job(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t i) {
        const Job& job = jobs[i];
        Instance inst = gen_random_instance(job.params, job.seed);

        double oracle_cost = -1.0;
        if (job.run_oracle) {
            try {
                oracle_cost = exact_ckm(inst).cost;
            } catch (const RefusedScaleError&) {
            } catch (const InfeasibleError&) {
            }
        }
        for (const auto& alg : job.algorithms) {
            ExperimentRecord rec;
            rec.instance_id = job.id;
            rec.algorithm = alg.name;
            rec.seed = job.seed;
            rec.oracle_cost = oracle_cost;
            auto t0 = std::chrono::steady_clock::now();
            SolveOutcome out = run_algorithm(inst, alg, job.seed);
            rec.wall_ms = wall_since(t0);
            rec.status = out.status;
            rec.cost = out.cost;
            rec.diagnostics = out.diagnostics;
            if (rec.status == "ok" && oracle_cost > 0) rec.ratio = rec.cost / oracle_cost;
            if (rec.status == "ok" && rec.ratio >= 0 && rec.ratio < 1.0 - 1e-9)
                throw std::logic_error("experiment: solver beat the exact oracle on " + job.id);
            per_job[i].push_back(std::move(rec));
        }
    });

    ExperimentReport report;
    for (auto& recs : per_job)
        for (auto& r : recs) report.records.push_back(std::move(r));
    std::sort(report.records.begin(), report.records.end(),
              [](const ExperimentRecord& a, const ExperimentRecord& b) {
                  return std::tie(a.instance_id, a.algorithm) < std::tie(b.instance_id, b.algorithm);
              });
    return report;
}

std::string ExperimentReport::to_table() const {
    std::ostringstream out;
    out << std::left << std::setw(28) << "instance" << std::setw(14) << "algorithm"
        << std::setw(12) << "status" << std::setw(12) << "cost" << std::setw(12) << "oracle"
        << std::setw(10) << "ratio" << "wall_ms\n";
    for (const auto& r : records) {
        out << std::left << std::setw(28) << r.instance_id << std::setw(14) << r.algorithm
            << std::setw(12) << r.status;
        auto num = [&](double v) {
            std::ostringstream s;
            if (v < 0)
                s << "-";
            else
                s << std::setprecision(6) << v;
            return s.str();
        };
        out << std::setw(12) << num(r.cost) << std::setw(12) << num(r.oracle_cost)
            << std::setw(10) << num(r.ratio) << std::fixed << std::setprecision(2) << r.wall_ms
            << "\n";
        out.unsetf(std::ios_base::fixed);
    }
    return out.str();
}

std::string ExperimentReport::to_jsonl(bool include_wall_time) const {
    std::ostringstream out;
    for (const auto& r : records) {
        json j;
        j["instance"] = r.instance_id;
        j["algorithm"] = r.algorithm;
        j["status"] = r.status;
        j["cost"] = r.cost;
        j["oracle_cost"] = r.oracle_cost;
        j["ratio"] = r.ratio;
        j["seed"] = r.seed;
        j["diagnostics"] = r.diagnostics;
        if (include_wall_time) j["wall_ms"] = r.wall_ms;
        out << j.dump() << "\n";
    }
    return out.str();
}

}  // namespace ckm
