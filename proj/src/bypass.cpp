#include "warpsim/bypass.hpp"

#include <algorithm>

namespace warpsim {

BypassUnit::BypassUnit(const PolicyConfig& cfg, std::uint64_t seed)
    : cfg_(cfg),
      rng_(make_stream(seed, "bypass/rand")),
      pcbyp_table_(cfg.pcbyp_table_size, 0),
      pcbyp_max_((1u << cfg.pcbyp_counter_bits) - 1) {
    // Counters start just below the bypass threshold: neutral, but biased
    // toward probing until misses accumulate.
    std::fill(pcbyp_table_.begin(), pcbyp_table_.end(), pcbyp_max_ / 2);
}

Route BypassUnit::decide(std::uint32_t warp_id, WarpType warp_type, bool forced_probe,
                         std::uint64_t instr_id) {
    switch (cfg_.bypass) {
        case BypassKind::None:
            return Route::ToCache;
        case BypassKind::WByp:
            if (forced_probe) return Route::ToCache;
            return (warp_type == WarpType::MostlyMiss || warp_type == WarpType::AllMiss)
                       ? Route::ToDram
                       : Route::ToCache;
        case BypassKind::Pcal:
            // Until the first token assignment every warp may use the cache.
            if (!tokens_assigned_) return Route::ToCache;
            return pcal_has_token(warp_id) ? Route::ToCache : Route::ToDram;
        case BypassKind::Rand:
            return rng_.next_bernoulli(cfg_.rand_fraction) ? Route::ToDram
                                                           : Route::ToCache;
        case BypassKind::PcByp:
            // Top half of the counter range predicts miss.
            return pcbyp_counter(instr_id) >= (pcbyp_max_ + 1) / 2 ? Route::ToDram
                                                                   : Route::ToCache;
    }
    return Route::ToCache;
}

std::uint32_t BypassUnit::pcbyp_counter(std::uint64_t instr_id) const {
    return pcbyp_table_[hash_mix(instr_id, 0x9e3779b9) % pcbyp_table_.size()];
}

void BypassUnit::pcbyp_update(std::uint64_t instr_id, bool hit) {
    std::uint32_t& c = pcbyp_table_[hash_mix(instr_id, 0x9e3779b9) % pcbyp_table_.size()];
    if (hit) {
        if (c > 0) --c;
    } else {
        if (c < pcbyp_max_) ++c;
    }
}

void BypassUnit::pcal_reassign_tokens(
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& warp_hit_counts) {
    // Sort by (hits desc, warp_id asc).
    auto sorted = warp_hit_counts;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    tokens_.clear();
    for (std::size_t i = 0; i < sorted.size() && i < cfg_.pcal_tokens; ++i)
        tokens_.insert(sorted[i].first);
    tokens_assigned_ = true;
}

}  // namespace warpsim
