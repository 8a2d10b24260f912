#ifndef CKM_EXPERIMENT_HPP
#define CKM_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ckm/generators.hpp"

namespace ckm {

struct AlgorithmSpec {
    std::string name;      // fpt | fpt-uniform | tree | oracle | uncap-greedy | uncap-local
    double epsilon = 0.5;
    int samples = 20;      // tree only
};

struct ExperimentGroup {
    RandomInstanceParams generator;
    std::vector<std::uint64_t> seeds;
    std::vector<AlgorithmSpec> algorithms;
    bool run_oracle = true;  // compute the exact optimum for ratios when in guard range
};

struct ExperimentConfig {
    std::vector<ExperimentGroup> groups;
};

struct ExperimentRecord {
    std::string instance_id;
    std::string algorithm;
    std::string status;  // ok | infeasible | refused-scale
    double cost = -1.0;
    double oracle_cost = -1.0;  // -1 when unavailable
    double ratio = -1.0;        // cost / oracle_cost when both known
    double wall_ms = 0.0;
    std::uint64_t seed = 0;
    std::string diagnostics;  // compact per-stage details
};

struct ExperimentReport {
    std::vector<ExperimentRecord> records;

    std::string to_table() const;
    // One JSON record per line. Timing fields are reported but excluded
    // from determinism comparisons.
    std::string to_jsonl(bool include_wall_time = true) const;
};

ExperimentConfig parse_experiment_config(const std::string& text,
                                         const std::string& origin = "<string>");
ExperimentConfig read_experiment_config(const std::string& path);

// Runs the generator x algorithm cross product. Solver infeasibility is
// recorded, never thrown; records come out sorted by (instance id,
// algorithm). Every solver output is re-validated before its cost is
// trusted.
ExperimentReport run_experiment(const ExperimentConfig& config);

}  // namespace ckm

#endif  // CKM_EXPERIMENT_HPP
