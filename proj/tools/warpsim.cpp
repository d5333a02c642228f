#include <fstream>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "warpsim/engine.hpp"
#include "warpsim/experiment.hpp"
#include "warpsim/synth.hpp"
#include "warpsim/trace.hpp"

namespace {

using namespace warpsim;

SimConfig build_config(const std::string& config_path,
                       const std::vector<std::string>& overrides,
                       std::optional<std::uint64_t> seed) {
    ordered_json j = config_path.empty()
                         ? SimConfig().to_json()
                         : SimConfig::load_file(config_path).to_json();
    for (const auto& ov : overrides) {
        auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--override expects KEY=VALUE, got: " + ov);
        SimConfig::apply_override(j, ov.substr(0, eq), ov.substr(eq + 1));
    }
    if (seed) j["seed"] = *seed;
    return SimConfig::from_json(j);
}

int cmd_gen(const std::string& spec_path, const std::string& config_path,
            const std::vector<std::string>& overrides,
            std::optional<std::uint64_t> seed, const std::string& out_path) {
    SimConfig cfg = build_config(config_path, overrides, seed);
    SyntheticSpec spec = SyntheticSpec::load_file(spec_path);
    auto trace = generate(spec, cfg);
    save_trace_file(out_path, trace);

    auto assignment = spec.profile_of_warp();
    std::cout << "wrote " << trace.size() << " instructions to " << out_path << "\n";
    std::cout << "calibrated per-profile hit ratios (replayed alone through plain LRU):\n";
    for (std::size_t pi = 0; pi < spec.warp_profiles.size(); ++pi) {
        // One representative warp per profile keeps calibration output quick.
        std::optional<std::uint32_t> rep;
        for (std::uint32_t w = 0; w < spec.num_warps; ++w)
            if (assignment[w] == pi) { rep = w; break; }
        if (!rep) continue;
        double measured = measured_hit_ratio(trace, *rep, cfg);
        std::cout << "  profile " << pi << " (target "
                  << spec.warp_profiles[pi].target_hit_ratio << "): measured "
                  << std::fixed << std::setprecision(3) << measured << " (warp " << *rep
                  << ")\n";
    }
    return 0;
}

int cmd_run(const std::string& config_path, const std::string& trace_path,
            const std::vector<std::string>& overrides,
            std::optional<std::uint64_t> seed, const std::string& out_path,
            const std::string& csv_prefix) {
    SimConfig cfg = build_config(config_path, overrides, seed);
    auto trace = load_trace_file(trace_path, cfg.warp_width);
    std::cout << "config hash: 0x" << std::hex << cfg.hash() << std::dec << "\n";
    RunReport report = run_simulation(trace, cfg);
    if (out_path.empty())
        std::cout << report.serialize();
    else
        report.save_file(out_path);
    if (!csv_prefix.empty()) {
        write_queuing_csv(report, csv_prefix + "_queuing.csv");
        write_warp_type_csv(report, csv_prefix + "_warp_types.csv");
        write_per_warp_csv(report, csv_prefix + "_warps.csv");
    }
    std::cout << "cycles=" << report.total_cycles << " l2_hit_rate=" << std::fixed
              << std::setprecision(4) << report.l2.hit_rate
              << " mean_queuing_delay=" << report.l2.mean_queuing_delay
              << " row_hit_rate=" << report.dram.row_hit_rate << "\n";
    return 0;
}

int cmd_compare(const std::string& spec_path, unsigned jobs, const std::string& out_path) {
    ExperimentSpec spec = ExperimentSpec::load_file(spec_path);
    CompareResult result = run_compare(spec, jobs);
    std::string csv = compare_csv(result);
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw SimError("cannot open output file: " + out_path);
        out << csv;
    }
    std::cout << csv;
    return 0;
}

int cmd_report(const std::string& report_path) {
    RunReport r = RunReport::load_file(report_path);
    std::cout << "schema_version: " << r.schema_version << "\n";
    std::cout << "config_hash: 0x" << std::hex << r.config_hash << std::dec << "\n";
    std::cout << "total_cycles: " << r.total_cycles << "\n";
    for (const auto& k : r.per_kernel)
        std::cout << "kernel " << k.kernel_id << ": instructions=" << k.instructions
                  << " cycles=" << k.total_cycles << " ipc_proxy=" << k.ipc_proxy << "\n";
    std::cout << "l2: hits=" << r.l2.hits << " misses=" << r.l2.misses
              << " hit_rate=" << r.l2.hit_rate << " bypassed=" << r.l2.bypassed
              << " mean_queuing_delay=" << r.l2.mean_queuing_delay << "\n";
    std::cout << "dram: row_hit_rate=" << r.dram.row_hit_rate
              << " high_serviced=" << r.dram.high_serviced
              << " low_serviced=" << r.dram.low_serviced
              << " max_low_wait=" << r.dram.max_low_wait << "\n";
    std::cout << "queuing histogram (bucket_lo count):\n";
    for (std::size_t i = 0; i < r.l2.queuing.edges.size(); ++i)
        if (r.l2.queuing.counts[i] > 0)
            std::cout << "  " << r.l2.queuing.edges[i] << " " << r.l2.queuing.counts[i]
                      << "\n";
    std::cout << "warp types (final): ";
    std::uint64_t counts[6] = {0};
    for (const auto& w : r.per_warp) ++counts[static_cast<int>(w.final_type)];
    for (int t = 0; t < 6; ++t)
        std::cout << to_string(static_cast<WarpType>(t)) << "=" << counts[t] << " ";
    std::cout << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"trace-driven GPU shared cache + DRAM simulator"};
    app.require_subcommand(1);

    std::string config_path, trace_path, out_path, spec_path, csv_prefix, report_path;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    unsigned jobs = 1;

    auto* gen = app.add_subcommand("gen", "generate a synthetic trace");
    gen->add_option("--spec", spec_path, "synthetic workload spec (json)")->required();
    gen->add_option("--config", config_path, "simulator config (json)");
    gen->add_option("--out", out_path, "output trace path")->required();
    gen->add_option("--override", overrides, "config override KEY=VALUE");
    gen->add_option("--seed", seed, "override config seed");

    auto* run = app.add_subcommand("run", "run one simulation");
    run->add_option("--config", config_path, "simulator config (json)");
    run->add_option("--trace", trace_path, "input trace")->required();
    run->add_option("--out,-o", out_path, "report output path (default stdout)");
    run->add_option("--override", overrides, "config override KEY=VALUE");
    run->add_option("--seed", seed, "override config seed");
    run->add_option("--csv-prefix", csv_prefix, "also write CSV extracts with this prefix");

    auto* cmp = app.add_subcommand("compare", "run a policy matrix experiment");
    cmp->add_option("--spec", spec_path, "experiment spec (json)")->required();
    cmp->add_option("--out,-o", out_path, "CSV output path");
    cmp->add_option("--jobs,-j", jobs, "parallel simulation jobs");

    auto* rep = app.add_subcommand("report", "pretty-print a saved report");
    rep->add_option("report", report_path, "report json path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(spec_path, config_path, overrides, seed, out_path);
        if (run->parsed())
            return cmd_run(config_path, trace_path, overrides, seed, out_path, csv_prefix);
        if (cmp->parsed()) return cmd_compare(spec_path, jobs, out_path);
        if (rep->parsed()) return cmd_report(report_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
