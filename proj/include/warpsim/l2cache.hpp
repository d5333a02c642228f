#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <unordered_set>
#include <vector>

#include "warpsim/config.hpp"
#include "warpsim/types.hpp"

namespace warpsim {

struct CacheBlock {
    std::uint64_t tag = 0;
    bool valid = false;
    std::uint32_t recency_rank = 0;  // 0 = MRU
    WarpType warp_type_bits = WarpType::Unknown;
};

// Exact evicted-address set; cleared wholesale when full, then the new
// address is inserted.
class EvictedAddressFilter {
public:
    explicit EvictedAddressFilter(std::size_t capacity) : capacity_(capacity) {}

    void on_evict(std::uint64_t line_addr) {
        if (set_.size() >= capacity_) set_.clear();
        set_.insert(line_addr);
    }
    bool contains(std::uint64_t line_addr) const { return set_.count(line_addr) != 0; }
    void remove(std::uint64_t line_addr) { set_.erase(line_addr); }
    std::size_t size() const { return set_.size(); }

private:
    std::size_t capacity_;
    std::unordered_set<std::uint64_t> set_;
};

// Recency rank a newly filled block receives. eaf_present is only
// meaningful under the EAF policy.
std::uint32_t insertion_position(InsertionPolicy policy, WarpType warp_type,
                                 std::uint32_t associativity, bool eaf_present);

// Way index of the victim in a full set. Under WIP, eviction priority is
// type class first (miss-typed blocks go first, hit-typed last), recency
// second. Throws if the WIP ordering property would be violated.
std::uint32_t choose_victim(InsertionPolicy policy,
                            const std::vector<CacheBlock>& set);

enum class ProbeKind : std::uint8_t { Hit, MissToDram, Merged, StoreHit, StoreMiss };

struct ProbeOutcome {
    std::uint64_t request_id;
    ProbeKind kind;
};

// Banked set-associative shared cache with per-bank input FIFOs, in-flight
// probe pipelines, and MSHRs. The engine drives it in phases: resolve()
// during completion, enqueue() during issue, service() afterwards, fill()
// when DRAM returns a line.
class SharedCache {
public:
    SharedCache(const SimConfig& cfg);

    // Returns false when the bank FIFO is full (backpressure).
    bool enqueue(std::vector<MemoryRequest>& ledger, std::uint64_t req_id, Cycle now);

    // Initiates up to ports_per_bank lookups per bank this cycle.
    void service(std::vector<MemoryRequest>& ledger, Cycle now);

    // Pops every probe whose lookup completes at or before `now`.
    std::vector<ProbeOutcome> resolve(std::vector<MemoryRequest>& ledger, Cycle now);

    // Installs a returned line; completes and returns the MSHR chain
    // (primary first, then merged requests).
    std::vector<std::uint64_t> fill(std::uint64_t line_addr, WarpType inserting_type);

    bool idle() const;
    std::optional<Cycle> next_resolve_cycle() const;
    bool any_queue_nonempty() const;
    std::uint64_t total_queue_len() const;

    // Stats
    std::uint64_t hits() const { return hits_; }
    std::uint64_t misses() const { return misses_; }
    std::uint64_t structural_stalls() const { return structural_stalls_; }
    const std::vector<Cycle>& queuing_delays() const { return queuing_delays_; }

    const std::vector<CacheBlock>& set_for_test(std::uint32_t bank, std::uint32_t set) const {
        return banks_[bank].sets[set];
    }
    const EvictedAddressFilter& eaf() const { return eaf_; }

private:
    struct Probe {
        std::uint64_t request_id;
        Cycle resolve_at;
    };
    struct Bank {
        std::vector<std::vector<CacheBlock>> sets;
        std::deque<std::uint64_t> input_queue;
        // line_addr -> request ids (primary first)
        std::map<std::uint64_t, std::vector<std::uint64_t>> mshrs;
        std::deque<Probe> in_flight;
    };

    void touch_mru(std::vector<CacheBlock>& set, std::uint32_t way);

    SimConfig cfg_;
    std::vector<Bank> banks_;
    EvictedAddressFilter eaf_;
    std::uint64_t hits_ = 0;
    std::uint64_t misses_ = 0;
    std::uint64_t structural_stalls_ = 0;
    std::vector<Cycle> queuing_delays_;
};

}  // namespace warpsim
