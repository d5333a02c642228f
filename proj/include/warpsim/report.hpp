#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "warpsim/config.hpp"
#include "warpsim/types.hpp"

namespace warpsim {

struct IntervalSample {
    double hit_ratio;
    WarpType type;
};

struct WarpReport {
    std::uint32_t kernel_id = 0;
    std::uint32_t warp_id = 0;
    WarpType final_type = WarpType::Unknown;
    std::uint64_t completed_instructions = 0;
    std::uint64_t total_stall_cycles = 0;
    std::uint64_t l2_hits = 0;      // probed accesses that hit
    std::uint64_t l2_accesses = 0;  // probed accesses
    std::uint64_t bypassed = 0;
    std::uint64_t all_hit_loads = 0;  // load instructions whose requests all hit
    std::vector<IntervalSample> intervals;
};

struct KernelReport {
    std::uint32_t kernel_id = 0;
    std::uint64_t instructions = 0;
    std::uint64_t total_cycles = 0;
    double ipc_proxy = 0.0;  // completed memory instructions per cycle
};

struct Histogram {
    std::vector<std::uint64_t> edges;  // bucket i covers [edges[i], edges[i+1])
    std::vector<std::uint64_t> counts;  // size == edges.size(); last is open-ended
};

struct L2Report {
    std::uint64_t hits = 0;
    std::uint64_t misses = 0;
    double hit_rate = 0.0;
    std::uint64_t bypassed = 0;
    std::uint64_t probed_requests = 0;
    std::uint64_t queuing_delay_sum = 0;
    double mean_queuing_delay = 0.0;
    std::uint64_t occupancy_integral = 0;
    std::uint64_t structural_stalls = 0;
    Histogram queuing;
};

struct DramReport {
    std::uint64_t row_hits = 0;
    std::uint64_t row_misses = 0;
    double row_hit_rate = 0.0;
    std::uint64_t high_serviced = 0;
    std::uint64_t low_serviced = 0;
    std::uint64_t max_low_wait = 0;
};

struct LedgerReport {
    std::uint64_t requests_created = 0;
    std::uint64_t requests_completed = 0;
    std::uint64_t fate_counts[6] = {0, 0, 0, 0, 0, 0};  // indexed by RequestFate
    std::uint64_t checksum = 0;
};

struct RunReport {
    int schema_version = 1;
    ordered_json config;
    std::uint64_t config_hash = 0;
    std::uint64_t total_cycles = 0;
    std::vector<KernelReport> per_kernel;
    std::vector<WarpReport> per_warp;
    L2Report l2;
    DramReport dram;
    LedgerReport ledger;

    ordered_json to_json() const;
    static RunReport from_json(const ordered_json& j);
    std::string serialize() const;  // stable key order, deterministic bytes
    static RunReport load_file(const std::string& path);
    void save_file(const std::string& path) const;
};

// n / sum(1/s_i); throws SimError on empty input or non-positive entries.
double harmonic_speedup(const std::vector<double>& speedups);

// Default log2 bucket edges 0,1,2,4,...,4096.
std::vector<std::uint64_t> default_queuing_edges();
Histogram make_histogram(const std::vector<Cycle>& values,
                         const std::vector<std::uint64_t>& edges);

// Per sampling interval, count of warps per type. Row 0 is all Unknown;
// warps with fewer completed intervals keep their last known type.
std::vector<std::vector<std::uint64_t>> warp_type_histogram(const RunReport& report);

void write_queuing_csv(const RunReport& report, const std::string& path);
void write_warp_type_csv(const RunReport& report, const std::string& path);
void write_per_warp_csv(const RunReport& report, const std::string& path);

}  // namespace warpsim
