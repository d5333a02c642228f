#include "warpsim/l2cache.hpp"

#include <algorithm>

namespace warpsim {

namespace {

// Lower class is evicted first.
int wip_class(WarpType t) {
    switch (t) {
        case WarpType::MostlyMiss:
        case WarpType::AllMiss:
            return 0;
        case WarpType::Balanced:
        case WarpType::Unknown:
            return 1;
        case WarpType::MostlyHit:
        case WarpType::AllHit:
            return 2;
    }
    return 1;
}

}  // namespace

std::uint32_t insertion_position(InsertionPolicy policy, WarpType warp_type,
                                 std::uint32_t associativity, bool eaf_present) {
    switch (policy) {
        case InsertionPolicy::BaselineLru:
            return 0;
        case InsertionPolicy::Wip:
            switch (warp_type) {
                case WarpType::AllHit:
                case WarpType::MostlyHit:
                    return 0;
                case WarpType::Balanced:
                case WarpType::Unknown:
                    return associativity / 2;
                case WarpType::MostlyMiss:
                case WarpType::AllMiss:
                    return associativity - 1;
            }
            return associativity / 2;
        case InsertionPolicy::Eaf:
            return eaf_present ? 0 : associativity - 1;
    }
    return 0;
}

std::uint32_t choose_victim(InsertionPolicy policy, const std::vector<CacheBlock>& set) {
    const std::uint32_t k = static_cast<std::uint32_t>(set.size());
    if (policy != InsertionPolicy::Wip) {
        for (std::uint32_t w = 0; w < k; ++w)
            if (set[w].valid && set[w].recency_rank == k - 1) return w;
        throw SimError("choose_victim called on a non-full set");
    }
    std::uint32_t best = k;
    for (std::uint32_t w = 0; w < k; ++w) {
        if (!set[w].valid) continue;
        if (best == k) {
            best = w;
            continue;
        }
        int cw = wip_class(set[w].warp_type_bits);
        int cb = wip_class(set[best].warp_type_bits);
        if (cw < cb || (cw == cb && set[w].recency_rank > set[best].recency_rank))
            best = w;
    }
    if (best == k) throw SimError("choose_victim called on an empty set");
    // Ordering property: a hit-typed block is never evicted while a
    // miss-typed block coexists in the set.
    if (wip_class(set[best].warp_type_bits) == 2) {
        for (const auto& b : set)
            if (b.valid && wip_class(b.warp_type_bits) == 0)
                throw SimError("WIP ordering violated: hit-typed victim with miss-typed block present");
    }
    return best;
}

SharedCache::SharedCache(const SimConfig& cfg)
    : cfg_(cfg), eaf_(cfg.l2.total_lines()) {
    banks_.resize(cfg.l2.num_banks);
    for (auto& b : banks_) {
        b.sets.assign(cfg.l2.sets_per_bank,
                      std::vector<CacheBlock>(cfg.l2.associativity));
    }
}

bool SharedCache::enqueue(std::vector<MemoryRequest>& ledger, std::uint64_t req_id,
                          Cycle now) {
    MemoryRequest& req = ledger[req_id];
    Bank& bank = banks_[map_address(req.line_addr, cfg_).bank];
    if (bank.input_queue.size() >= cfg_.l2.queue_capacity) return false;
    req.l2_enqueue_cycle = now;
    bank.input_queue.push_back(req_id);
    return true;
}

void SharedCache::service(std::vector<MemoryRequest>& ledger, Cycle now) {
    for (auto& bank : banks_) {
        std::uint32_t initiated = 0;
        while (initiated < cfg_.l2.ports_per_bank && !bank.input_queue.empty()) {
            // Conservative MSHR gate: in-flight probes may all turn out to
            // be misses, so room must exist for each of them.
            if (bank.mshrs.size() + bank.in_flight.size() >= cfg_.l2.mshrs_per_bank) {
                ++structural_stalls_;
                break;
            }
            std::uint64_t id = bank.input_queue.front();
            bank.input_queue.pop_front();
            MemoryRequest& req = ledger[id];
            req.l2_service_cycle = now;
            queuing_delays_.push_back(now - *req.l2_enqueue_cycle);
            bank.in_flight.push_back({id, now + cfg_.l2.lookup_latency_cycles});
            ++initiated;
        }
    }
}

void SharedCache::touch_mru(std::vector<CacheBlock>& set, std::uint32_t way) {
    std::uint32_t old = set[way].recency_rank;
    for (auto& b : set)
        if (b.valid && b.recency_rank < old) ++b.recency_rank;
    set[way].recency_rank = 0;
}

std::vector<ProbeOutcome> SharedCache::resolve(std::vector<MemoryRequest>& ledger,
                                               Cycle now) {
    std::vector<ProbeOutcome> out;
    for (auto& bank : banks_) {
        while (!bank.in_flight.empty() && bank.in_flight.front().resolve_at <= now) {
            std::uint64_t id = bank.in_flight.front().request_id;
            bank.in_flight.pop_front();
            MemoryRequest& req = ledger[id];
            auto bst = map_address(req.line_addr, cfg_);
            auto& set = bank.sets[bst.set];
            std::uint32_t way = cfg_.l2.associativity;
            for (std::uint32_t w = 0; w < set.size(); ++w)
                if (set[w].valid && set[w].tag == bst.tag) { way = w; break; }

            if (way < set.size()) {
                ++hits_;
                touch_mru(set, way);
                // Promote the block's warp-type tag on a hit, but never
                // demote it.  A fill-time-only tag goes stale: a working set
                // filled while its warp was still Unknown would rank below
                // later hit-typed transients and be evicted first, inverting
                // the intended protection.  Demoting on hit is unstable the
                // other way: one noisy low interval would mark the whole
                // working set evict-first, confirming the demotion.
                if (wip_class(req.warp_type_at_issue) >
                    wip_class(set[way].warp_type_bits))
                    set[way].warp_type_bits = req.warp_type_at_issue;
                out.push_back({id, req.kind == AccessKind::Load ? ProbeKind::Hit
                                                                : ProbeKind::StoreHit});
            } else if (req.kind == AccessKind::Store) {
                // Write-through no-allocate: misses go straight to memory.
                ++misses_;
                out.push_back({id, ProbeKind::StoreMiss});
            } else {
                ++misses_;
                auto it = bank.mshrs.find(req.line_addr);
                if (it != bank.mshrs.end()) {
                    it->second.push_back(id);
                    out.push_back({id, ProbeKind::Merged});
                } else {
                    bank.mshrs.emplace(req.line_addr, std::vector<std::uint64_t>{id});
                    out.push_back({id, ProbeKind::MissToDram});
                }
            }
        }
    }
    return out;
}

std::vector<std::uint64_t> SharedCache::fill(std::uint64_t line_addr,
                                             WarpType inserting_type) {
    auto bst = map_address(line_addr, cfg_);
    Bank& bank = banks_[bst.bank];
    auto& set = bank.sets[bst.set];
    const std::uint32_t k = cfg_.l2.associativity;

    std::uint32_t way = k;
    for (std::uint32_t w = 0; w < k; ++w)
        if (!set[w].valid) { way = w; break; }
    if (way == k) {
        way = choose_victim(cfg_.policies.insertion, set);
        std::uint64_t evicted = unmap_address({bst.bank, bst.set, set[way].tag}, cfg_);
        if (cfg_.policies.insertion == InsertionPolicy::Eaf) eaf_.on_evict(evicted);
        std::uint32_t gone = set[way].recency_rank;
        for (auto& b : set)
            if (b.valid && b.recency_rank > gone) --b.recency_rank;
        set[way].valid = false;
    }

    bool eaf_present = false;
    if (cfg_.policies.insertion == InsertionPolicy::Eaf && eaf_.contains(line_addr)) {
        eaf_present = true;
        eaf_.remove(line_addr);
    }
    std::uint32_t valid_count = 0;
    for (const auto& b : set)
        if (b.valid) ++valid_count;
    std::uint32_t pos = std::min(
        insertion_position(cfg_.policies.insertion, inserting_type, k, eaf_present),
        valid_count);
    for (auto& b : set)
        if (b.valid && b.recency_rank >= pos) ++b.recency_rank;
    set[way] = CacheBlock{bst.tag, true, pos, inserting_type};

    auto it = bank.mshrs.find(line_addr);
    if (it == bank.mshrs.end()) throw SimError("fill without MSHR entry");
    std::vector<std::uint64_t> chain = std::move(it->second);
    bank.mshrs.erase(it);
    return chain;
}

bool SharedCache::idle() const {
    for (const auto& b : banks_)
        if (!b.input_queue.empty() || !b.in_flight.empty() || !b.mshrs.empty())
            return false;
    return true;
}

std::optional<Cycle> SharedCache::next_resolve_cycle() const {
    std::optional<Cycle> best;
    for (const auto& b : banks_)
        if (!b.in_flight.empty()) {
            Cycle c = b.in_flight.front().resolve_at;
            if (!best || c < *best) best = c;
        }
    return best;
}

bool SharedCache::any_queue_nonempty() const {
    for (const auto& b : banks_)
        if (!b.input_queue.empty()) return true;
    return false;
}

std::uint64_t SharedCache::total_queue_len() const {
    std::uint64_t n = 0;
    for (const auto& b : banks_) n += b.input_queue.size();
    return n;
}

}  // namespace warpsim
