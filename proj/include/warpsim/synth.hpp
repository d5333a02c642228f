#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "warpsim/config.hpp"
#include "warpsim/trace.hpp"

namespace warpsim {

struct WarpProfile {
    double fraction_of_warps = 1.0;
    double target_hit_ratio = 0.5;
    std::uint64_t working_set_lines = 16;
    std::uint64_t stride_lines = 1;
    std::optional<std::uint64_t> phase_shift_interval;  // instructions
    // Confines a warp's streaming misses to one L2 bank to provoke bank
    // conflicts; off by default.
    bool pin_to_bank = false;
};

struct SyntheticSpec {
    std::uint32_t num_warps = 8;
    std::uint64_t instructions_per_warp = 256;
    std::vector<WarpProfile> warp_profiles;
    double store_fraction = 0.1;

    void validate() const;  // throws ConfigError
    static SyntheticSpec from_json(const ordered_json& j);
    static SyntheticSpec load_file(const std::string& path);

    // Profile index for each warp id, assigned contiguously by fraction.
    std::vector<std::uint32_t> profile_of_warp() const;
};

// Deterministic function of (spec, cfg.seed). Throws ConfigError for
// infeasible profiles (reuse set larger than the cache with nonzero target).
std::vector<TraceInstruction> generate(const SyntheticSpec& spec, const SimConfig& cfg);

// Replays one warp's accesses alone through a plain LRU cache of the
// configured geometry; returns the measured hit ratio. Used by `gen` to
// print calibration results.
double measured_hit_ratio(const std::vector<TraceInstruction>& trace,
                          std::uint32_t warp_id, const SimConfig& cfg);

}  // namespace warpsim
