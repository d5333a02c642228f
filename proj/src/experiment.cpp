#include "warpsim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "warpsim/engine.hpp"
#include "warpsim/trace.hpp"

namespace warpsim {

const std::map<std::string, PolicyPreset>& policy_presets() {
    static const std::map<std::string, PolicyPreset> presets = {
        {"baseline", {InsertionPolicy::BaselineLru, BypassKind::None, SchedulerKind::FrFcfs}},
        {"wip", {InsertionPolicy::Wip, BypassKind::None, SchedulerKind::FrFcfs}},
        {"wms", {InsertionPolicy::BaselineLru, BypassKind::None, SchedulerKind::Wms}},
        {"wbyp", {InsertionPolicy::BaselineLru, BypassKind::WByp, SchedulerKind::FrFcfs}},
        {"medic", {InsertionPolicy::Wip, BypassKind::WByp, SchedulerKind::Wms}},
        {"eaf", {InsertionPolicy::Eaf, BypassKind::None, SchedulerKind::FrFcfs}},
        {"pcal", {InsertionPolicy::BaselineLru, BypassKind::Pcal, SchedulerKind::FrFcfs}},
        {"rand", {InsertionPolicy::BaselineLru, BypassKind::Rand, SchedulerKind::FrFcfs}},
        {"pcbyp", {InsertionPolicy::BaselineLru, BypassKind::PcByp, SchedulerKind::FrFcfs}},
    };
    return presets;
}

void ExperimentSpec::validate() const {
    if (workloads.empty()) throw ConfigError("experiment needs at least one workload");
    if (policies.empty()) throw ConfigError("experiment needs at least one policy");
    std::set<std::string> names;
    for (const auto& w : workloads)
        if (!names.insert(w.name).second)
            throw ConfigError("duplicate workload name: " + w.name);
    for (const auto& p : policies)
        if (!policy_presets().count(p)) throw ConfigError("unknown policy preset: " + p);
    if (std::find(policies.begin(), policies.end(), baseline) == policies.end())
        throw ConfigError("baseline policy '" + baseline + "' must appear in the policy list");
}

ExperimentSpec ExperimentSpec::from_json(const ordered_json& j) {
    ExperimentSpec spec;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (k == "config")
            spec.base_config = it.value();
        else if (k == "baseline")
            spec.baseline = it.value().get<std::string>();
        else if (k == "policies")
            spec.policies = it.value().get<std::vector<std::string>>();
        else if (k == "workloads") {
            for (const auto& wj : it.value()) {
                WorkloadSpec w;
                for (auto wit = wj.begin(); wit != wj.end(); ++wit) {
                    const std::string& wk = wit.key();
                    if (wk == "name")
                        w.name = wit.value().get<std::string>();
                    else if (wk == "trace")
                        w.trace_path = wit.value().get<std::string>();
                    else if (wk == "synthetic")
                        w.synthetic = SyntheticSpec::from_json(wit.value());
                    else if (wk == "overrides")
                        for (auto oit = wit.value().begin(); oit != wit.value().end(); ++oit)
                            w.overrides[oit.key()] = oit.value().is_string()
                                                         ? oit.value().get<std::string>()
                                                         : oit.value().dump();
                    else
                        throw ConfigError("unknown workload key: " + wk);
                }
                if (w.name.empty()) throw ConfigError("workload missing name");
                if (w.trace_path.empty() == !w.synthetic.has_value())
                    throw ConfigError("workload '" + w.name +
                                      "' needs exactly one of trace/synthetic");
                spec.workloads.push_back(std::move(w));
            }
        } else {
            throw ConfigError("unknown experiment key: " + k);
        }
    }
    spec.validate();
    return spec;
}

ExperimentSpec ExperimentSpec::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open experiment spec: " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("failed to parse experiment spec " + path + ": " + e.what());
    }
    return from_json(j);
}

SimConfig config_for(const ExperimentSpec& spec, const WorkloadSpec& wl,
                     const std::string& policy) {
    ordered_json j = spec.base_config.is_null() ? SimConfig().to_json() : spec.base_config;
    // Normalize through SimConfig so partial base configs gain defaults.
    j = SimConfig::from_json(j).to_json();
    for (const auto& [k, v] : wl.overrides) SimConfig::apply_override(j, k, v);
    const PolicyPreset& p = policy_presets().at(policy);
    j["policies"]["insertion"] = to_string(p.insertion);
    j["policies"]["bypass"] = to_string(p.bypass);
    j["policies"]["scheduler"] = to_string(p.scheduler);
    return SimConfig::from_json(j);
}

namespace {

double workload_speedup(const RunReport& run, const RunReport& base) {
    std::vector<double> ratios;
    for (std::size_t k = 0; k < run.per_kernel.size(); ++k)
        ratios.push_back(run.per_kernel[k].ipc_proxy / base.per_kernel[k].ipc_proxy);
    return harmonic_speedup(ratios);
}

double mean_ipc(const RunReport& run) {
    if (run.per_kernel.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& k : run.per_kernel) sum += k.ipc_proxy;
    return sum / static_cast<double>(run.per_kernel.size());
}

}  // namespace

CompareResult run_compare(const ExperimentSpec& spec, unsigned jobs) {
    spec.validate();
    if (jobs == 0) jobs = 1;

    // Traces are fixed per workload: policy choice never changes the input.
    std::vector<std::vector<TraceInstruction>> traces;
    for (const auto& wl : spec.workloads) {
        SimConfig cfg = config_for(spec, wl, spec.baseline);
        traces.push_back(wl.synthetic ? generate(*wl.synthetic, cfg)
                                      : load_trace_file(wl.trace_path, cfg.warp_width));
    }

    struct Task {
        std::size_t workload;
        std::string policy;
        std::optional<double> rand_fraction;
    };
    std::vector<Task> tasks;
    for (std::size_t wi = 0; wi < spec.workloads.size(); ++wi) {
        for (const auto& pol : spec.policies) {
            if (pol == "rand") {
                // "Idealized" random bypassing: sweep the fraction, report
                // the best per workload.
                for (int f = 1; f <= 9; ++f)
                    tasks.push_back({wi, pol, f / 10.0});
            } else {
                tasks.push_back({wi, pol, std::nullopt});
            }
        }
    }

    std::vector<RunReport> reports(tasks.size());
    std::vector<std::string> errors(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const Task& t = tasks[i];
            try {
                SimConfig cfg = config_for(spec, spec.workloads[t.workload], t.policy);
                if (t.rand_fraction) cfg.policies.rand_fraction = *t.rand_fraction;
                reports[i] = run_simulation(traces[t.workload], cfg);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    for (std::size_t i = 0; i < tasks.size(); ++i)
        if (!errors[i].empty())
            throw SimError("run failed (workload=" + spec.workloads[tasks[i].workload].name +
                           ", policy=" + tasks[i].policy + "): " + errors[i]);

    // Index baseline reports per workload.
    std::vector<const RunReport*> base(spec.workloads.size(), nullptr);
    for (std::size_t i = 0; i < tasks.size(); ++i)
        if (tasks[i].policy == spec.baseline && !tasks[i].rand_fraction)
            base[tasks[i].workload] = &reports[i];

    CompareResult result;
    std::map<std::string, std::vector<double>> per_policy_speedups;
    for (std::size_t wi = 0; wi < spec.workloads.size(); ++wi) {
        for (const auto& pol : spec.policies) {
            CompareRow row;
            row.workload = spec.workloads[wi].name;
            row.policy = pol;
            double best = -1.0;
            for (std::size_t i = 0; i < tasks.size(); ++i) {
                if (tasks[i].workload != wi || tasks[i].policy != pol) continue;
                double s = workload_speedup(reports[i], *base[wi]);
                if (s > best) {
                    best = s;
                    row.ipc = mean_ipc(reports[i]);
                    row.speedup = s;
                    row.rand_fraction = tasks[i].rand_fraction;
                }
            }
            per_policy_speedups[pol].push_back(row.speedup);
            result.rows.push_back(std::move(row));
        }
    }
    for (const auto& pol : spec.policies)
        result.harmonic.emplace_back(pol, harmonic_speedup(per_policy_speedups[pol]));
    return result;
}

std::string compare_csv(const CompareResult& result) {
    std::ostringstream out;
    out << "workload,policy,ipc_proxy,speedup,rand_fraction\n";
    for (const auto& r : result.rows) {
        out << r.workload << ',' << r.policy << ',' << r.ipc << ',' << r.speedup << ',';
        if (r.rand_fraction) out << *r.rand_fraction;
        out << '\n';
    }
    for (const auto& [pol, h] : result.harmonic)
        out << "HARMONIC," << pol << ",," << h << ",\n";
    return out.str();
}

}  // namespace warpsim
