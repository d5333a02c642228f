#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "warpsim/config.hpp"
#include "warpsim/types.hpp"

namespace warpsim {

struct BankRow {
    std::uint32_t bank;
    std::uint64_t row;
};

inline BankRow row_of(std::uint64_t line_addr, const DramConfig& cfg) {
    return BankRow{static_cast<std::uint32_t>(line_addr % cfg.num_banks),
                   (line_addr / cfg.num_banks) / cfg.row_size_lines};
}

struct DramBank {
    std::optional<std::uint64_t> open_row;
    Cycle busy_until = 0;
    std::optional<std::uint64_t> in_service;  // request id
    Cycle done_at = 0;
};

// Banked DRAM with open-row state. FR-FCFS baseline uses one queue; the
// warp-type-aware scheduler (WMS) splits requests by the mostly-hit bit and
// gives the high queue strict per-bank priority.
class DramSubsystem {
public:
    DramSubsystem(const SimConfig& cfg);

    void enqueue(std::vector<MemoryRequest>& ledger, std::uint64_t req_id, Cycle now);

    // Per idle bank in index order, picks and starts one request.
    void step(std::vector<MemoryRequest>& ledger, Cycle now);

    // Requests whose service finishes at or before `now`.
    std::vector<std::uint64_t> pop_completed(Cycle now);

    bool idle() const;
    std::optional<Cycle> next_completion_cycle() const;

    std::uint64_t row_hits() const { return row_hits_; }
    std::uint64_t row_misses() const { return row_misses_; }
    std::uint64_t high_serviced() const { return high_serviced_; }
    std::uint64_t low_serviced() const { return low_serviced_; }
    Cycle max_low_wait() const { return max_low_wait_; }
    const std::vector<std::uint64_t>& service_order() const { return service_order_; }

private:
    // Oldest request in `queue` for `bank`, preferring open-row hits.
    std::optional<std::size_t> frfcfs_pick(const std::vector<MemoryRequest>& ledger,
                                           const std::deque<std::uint64_t>& queue,
                                           std::uint32_t bank) const;
    void start_service(std::vector<MemoryRequest>& ledger, std::uint64_t id,
                       std::uint32_t bank_idx, Cycle now, bool from_high);

    SimConfig cfg_;
    std::deque<std::uint64_t> high_;
    std::deque<std::uint64_t> low_;  // the only queue under plain FR-FCFS
    std::vector<DramBank> banks_;
    std::uint64_t row_hits_ = 0;
    std::uint64_t row_misses_ = 0;
    std::uint64_t high_serviced_ = 0;
    std::uint64_t low_serviced_ = 0;
    Cycle max_low_wait_ = 0;
    std::vector<std::uint64_t> service_order_;
};

}  // namespace warpsim
