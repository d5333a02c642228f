#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "warpsim/config.hpp"
#include "warpsim/report.hpp"
#include "warpsim/synth.hpp"

namespace warpsim {

struct PolicyPreset {
    InsertionPolicy insertion;
    BypassKind bypass;
    SchedulerKind scheduler;
};

// Named policy triples: baseline, the three warp-type-aware mechanisms on
// their own, their combination ("medic"), and the comparison baselines.
const std::map<std::string, PolicyPreset>& policy_presets();

struct WorkloadSpec {
    std::string name;
    std::string trace_path;                    // empty when synthetic
    std::optional<SyntheticSpec> synthetic;
    std::map<std::string, std::string> overrides;  // dotted key -> value text
};

struct ExperimentSpec {
    ordered_json base_config;  // may be empty: defaults apply
    std::vector<std::string> policies;
    std::string baseline = "baseline";
    std::vector<WorkloadSpec> workloads;

    void validate() const;
    static ExperimentSpec from_json(const ordered_json& j);
    static ExperimentSpec load_file(const std::string& path);
};

struct CompareRow {
    std::string workload;
    std::string policy;
    double ipc = 0.0;
    double speedup = 1.0;
    std::optional<double> rand_fraction;  // set for the swept rand policy
};

struct CompareResult {
    std::vector<CompareRow> rows;                       // spec order
    std::vector<std::pair<std::string, double>> harmonic;  // per policy
};

SimConfig config_for(const ExperimentSpec& spec, const WorkloadSpec& wl,
                     const std::string& policy);

CompareResult run_compare(const ExperimentSpec& spec, unsigned jobs);

std::string compare_csv(const CompareResult& result);

}  // namespace warpsim
