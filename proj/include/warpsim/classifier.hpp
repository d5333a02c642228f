#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "warpsim/config.hpp"
#include "warpsim/types.hpp"

namespace warpsim {

struct WarpCounters {
    std::uint32_t hits = 0;
    std::uint32_t accesses = 0;
    WarpType current_type = WarpType::Unknown;
    std::uint32_t intervals_completed = 0;
    // Bypassed accesses since the last classification; drives forced probes.
    std::uint64_t bypassed_since_reclass = 0;
    std::uint32_t last_interval_hits = 0;
};

struct ClassificationEvent {
    std::uint32_t kernel_id;
    std::uint32_t warp_id;
    std::uint32_t interval_index;  // 1-based
    double hit_ratio;
    WarpType new_type;
};

// Pure classification rule over one interval's counters.
// r=1 -> AllHit; theta_hi <= r < 1 -> MostlyHit; theta_lo < r < theta_hi ->
// Balanced; 0 < r <= theta_lo -> MostlyMiss; r=0 -> AllMiss.
WarpType classify(std::uint32_t hits, std::uint32_t accesses, double theta_lo,
                  double theta_hi);

// Online warp-type identification keyed by (kernel_id, warp_id). Counters
// reset implicitly at kernel boundaries because kernels key separately.
class Classifier {
public:
    explicit Classifier(const ClassifierConfig& cfg) : cfg_(cfg) {}

    void register_warp(std::uint32_t kernel_id, std::uint32_t warp_id);

    // Feed a cache-probe outcome; returns a classification event when the
    // interval fills.
    std::optional<ClassificationEvent> record_outcome(std::uint32_t kernel_id,
                                                      std::uint32_t warp_id, bool hit);

    // Bypassed requests never probe the cache and do not feed counters, but
    // they advance the forced-probe schedule.
    void note_bypassed(std::uint32_t kernel_id, std::uint32_t warp_id);

    // True while a bypassing warp is inside its periodic forced-probe window.
    bool forced_probe_active(std::uint32_t kernel_id, std::uint32_t warp_id) const;

    WarpType current_type(std::uint32_t kernel_id, std::uint32_t warp_id) const;
    const WarpCounters& counters(std::uint32_t kernel_id, std::uint32_t warp_id) const;

    const std::map<std::pair<std::uint32_t, std::uint32_t>, WarpCounters>& all() const {
        return warps_;
    }

private:
    WarpCounters& get(std::uint32_t kernel_id, std::uint32_t warp_id);
    const WarpCounters& get(std::uint32_t kernel_id, std::uint32_t warp_id) const;

    ClassifierConfig cfg_;
    std::map<std::pair<std::uint32_t, std::uint32_t>, WarpCounters> warps_;
};

}  // namespace warpsim
