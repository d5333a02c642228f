#include "warpsim/classifier.hpp"

namespace warpsim {

WarpType classify(std::uint32_t hits, std::uint32_t accesses, double theta_lo,
                  double theta_hi) {
    if (accesses == 0) throw SimError("classify called with zero accesses");
    if (hits == accesses) return WarpType::AllHit;
    if (hits == 0) return WarpType::AllMiss;
    double r = static_cast<double>(hits) / static_cast<double>(accesses);
    if (r >= theta_hi) return WarpType::MostlyHit;
    if (r > theta_lo) return WarpType::Balanced;
    return WarpType::MostlyMiss;
}

void Classifier::register_warp(std::uint32_t kernel_id, std::uint32_t warp_id) {
    warps_.try_emplace({kernel_id, warp_id});
}

WarpCounters& Classifier::get(std::uint32_t kernel_id, std::uint32_t warp_id) {
    auto it = warps_.find({kernel_id, warp_id});
    if (it == warps_.end()) throw SimError("unregistered warp");
    return it->second;
}

const WarpCounters& Classifier::get(std::uint32_t kernel_id,
                                    std::uint32_t warp_id) const {
    auto it = warps_.find({kernel_id, warp_id});
    if (it == warps_.end()) throw SimError("unregistered warp");
    return it->second;
}

std::optional<ClassificationEvent> Classifier::record_outcome(std::uint32_t kernel_id,
                                                              std::uint32_t warp_id,
                                                              bool hit) {
    WarpCounters& w = get(kernel_id, warp_id);
    ++w.accesses;
    if (hit) ++w.hits;
    if (w.accesses < cfg_.sample_interval_accesses) return std::nullopt;

    ClassificationEvent ev;
    ev.kernel_id = kernel_id;
    ev.warp_id = warp_id;
    ev.hit_ratio = static_cast<double>(w.hits) / static_cast<double>(w.accesses);
    ev.new_type = classify(w.hits, w.accesses, cfg_.theta_lo, cfg_.theta_hi);
    w.current_type = ev.new_type;
    w.last_interval_hits = w.hits;
    w.hits = 0;
    w.accesses = 0;
    w.bypassed_since_reclass = 0;
    ++w.intervals_completed;
    ev.interval_index = w.intervals_completed;
    return ev;
}

void Classifier::note_bypassed(std::uint32_t kernel_id, std::uint32_t warp_id) {
    ++get(kernel_id, warp_id).bypassed_since_reclass;
}

bool Classifier::forced_probe_active(std::uint32_t kernel_id,
                                     std::uint32_t warp_id) const {
    if (cfg_.forced_probe_period == 0) return false;
    const WarpCounters& w = get(kernel_id, warp_id);
    // After (period-1) intervals' worth of bypassed accesses, the next
    // interval's worth must probe so the sample refreshes.
    std::uint64_t budget = static_cast<std::uint64_t>(cfg_.forced_probe_period - 1) *
                           cfg_.sample_interval_accesses;
    return w.bypassed_since_reclass >= budget;
}

WarpType Classifier::current_type(std::uint32_t kernel_id, std::uint32_t warp_id) const {
    return get(kernel_id, warp_id).current_type;
}

const WarpCounters& Classifier::counters(std::uint32_t kernel_id,
                                         std::uint32_t warp_id) const {
    return get(kernel_id, warp_id);
}

}  // namespace warpsim
