#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "warpsim/config.hpp"
#include "warpsim/rng.hpp"
#include "warpsim/types.hpp"

namespace warpsim {

enum class Route : std::uint8_t { ToCache, ToDram };

// Pre-cache routing decision plus the baseline policies' state: PCAL token
// holders and the PC-based predictor's saturating counters.
class BypassUnit {
public:
    BypassUnit(const PolicyConfig& cfg, std::uint64_t seed);

    // forced_probe overrides WByp bypassing so a warp's sample can refresh.
    Route decide(std::uint32_t warp_id, WarpType warp_type, bool forced_probe,
                 std::uint64_t instr_id);

    // Trains the PC-based predictor; bypassed requests train toward Miss at
    // decision time, probed requests at probe resolution.
    void pcbyp_update(std::uint64_t instr_id, bool hit);

    // Grants tokens to the num_tokens warps with the highest last-interval
    // hit counts; ties go to the lower warp id.
    void pcal_reassign_tokens(const std::vector<std::pair<std::uint32_t, std::uint32_t>>&
                                  warp_hit_counts);

    bool pcal_has_token(std::uint32_t warp_id) const {
        return tokens_.count(warp_id) != 0;
    }
    std::uint32_t pcbyp_counter(std::uint64_t instr_id) const;

private:
    PolicyConfig cfg_;
    Rng rng_;
    std::set<std::uint32_t> tokens_;
    bool tokens_assigned_ = false;
    std::vector<std::uint32_t> pcbyp_table_;
    std::uint32_t pcbyp_max_;
};

}  // namespace warpsim
