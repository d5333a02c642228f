#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"
#include "warpsim/types.hpp"

namespace warpsim {

using ordered_json = nlohmann::ordered_json;

enum class InsertionPolicy : std::uint8_t { BaselineLru, Wip, Eaf };
enum class BypassKind : std::uint8_t { None, WByp, Pcal, Rand, PcByp };
enum class SchedulerKind : std::uint8_t { FrFcfs, Wms };

struct L2Config {
    std::uint32_t num_banks = 8;
    std::uint32_t sets_per_bank = 64;
    std::uint32_t associativity = 16;
    std::uint32_t lookup_latency_cycles = 10;
    std::uint32_t ports_per_bank = 1;
    std::uint32_t mshrs_per_bank = 64;
    std::uint32_t queue_capacity = 256;

    std::uint64_t total_lines() const {
        return static_cast<std::uint64_t>(num_banks) * sets_per_bank * associativity;
    }
};

struct DramConfig {
    std::uint32_t num_banks = 8;
    std::uint32_t row_size_lines = 32;
    std::uint32_t row_hit_latency = 40;
    std::uint32_t row_miss_latency = 120;
    std::uint32_t bus_cycles_per_request = 4;
    bool strict_global = false;
};

struct ClassifierConfig {
    std::uint32_t sample_interval_accesses = 32;
    double theta_hi = 0.7;
    double theta_lo = 0.3;
    // Every forced_probe_period-th interval of a bypassing warp probes the
    // cache so its type can be re-evaluated. 0 disables forced probes.
    std::uint32_t forced_probe_period = 4;
};

struct PolicyConfig {
    InsertionPolicy insertion = InsertionPolicy::BaselineLru;
    BypassKind bypass = BypassKind::None;
    SchedulerKind scheduler = SchedulerKind::FrFcfs;
    std::uint32_t pcal_tokens = 8;
    double rand_fraction = 0.5;
    std::uint32_t pcbyp_table_size = 256;
    std::uint32_t pcbyp_counter_bits = 2;
};

struct SimConfig {
    std::uint32_t warp_width = 32;
    std::uint32_t line_size_bytes = 128;
    bool coalescing = true;
    std::uint64_t seed = 1;
    std::uint64_t deadlock_cycles = 1000000;
    L2Config l2;
    DramConfig dram;
    ClassifierConfig classifier;
    PolicyConfig policies;

    void validate() const;  // throws ConfigError

    ordered_json to_json() const;
    static SimConfig from_json(const ordered_json& j);  // unknown keys error
    static SimConfig load_file(const std::string& path);

    // Applies a dotted-path override such as "policies.bypass=wbyp".
    static void apply_override(ordered_json& j, const std::string& key,
                               const std::string& value);

    std::uint64_t hash() const;
};

struct BankSetTag {
    std::uint32_t bank;
    std::uint32_t set;
    std::uint64_t tag;
};

// Set-associative decomposition: bank from the low bits, set from the next,
// tag from the rest. Injective per (bank, set, tag).
inline BankSetTag map_address(std::uint64_t line_addr, const SimConfig& cfg) {
    std::uint64_t bank = line_addr % cfg.l2.num_banks;
    std::uint64_t rest = line_addr / cfg.l2.num_banks;
    return BankSetTag{static_cast<std::uint32_t>(bank),
                      static_cast<std::uint32_t>(rest % cfg.l2.sets_per_bank),
                      rest / cfg.l2.sets_per_bank};
}

inline std::uint64_t unmap_address(const BankSetTag& bst, const SimConfig& cfg) {
    return (bst.tag * cfg.l2.sets_per_bank + bst.set) * cfg.l2.num_banks + bst.bank;
}

const char* to_string(InsertionPolicy p);
const char* to_string(BypassKind b);
const char* to_string(SchedulerKind s);

}  // namespace warpsim
