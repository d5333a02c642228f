#include "warpsim/dram.hpp"

#include <algorithm>

namespace warpsim {

DramSubsystem::DramSubsystem(const SimConfig& cfg) : cfg_(cfg) {
    banks_.resize(cfg.dram.num_banks);
}

void DramSubsystem::enqueue(std::vector<MemoryRequest>& ledger, std::uint64_t req_id,
                            Cycle now) {
    MemoryRequest& req = ledger[req_id];
    req.dram_enqueue_cycle = now;
    if (cfg_.policies.scheduler == SchedulerKind::Wms && req.mostly_hit_bit)
        high_.push_back(req_id);
    else
        low_.push_back(req_id);
}

std::optional<std::size_t> DramSubsystem::frfcfs_pick(
    const std::vector<MemoryRequest>& ledger, const std::deque<std::uint64_t>& queue,
    std::uint32_t bank) const {
    std::optional<std::size_t> oldest;
    for (std::size_t i = 0; i < queue.size(); ++i) {
        BankRow br = row_of(ledger[queue[i]].line_addr, cfg_.dram);
        if (br.bank != bank) continue;
        if (banks_[bank].open_row && *banks_[bank].open_row == br.row) return i;
        if (!oldest) oldest = i;
    }
    return oldest;
}

void DramSubsystem::start_service(std::vector<MemoryRequest>& ledger, std::uint64_t id,
                                  std::uint32_t bank_idx, Cycle now, bool from_high) {
    DramBank& bank = banks_[bank_idx];
    BankRow br = row_of(ledger[id].line_addr, cfg_.dram);
    bool row_hit = bank.open_row && *bank.open_row == br.row;
    if (row_hit)
        ++row_hits_;
    else {
        ++row_misses_;
        bank.open_row = br.row;
    }
    Cycle lat = (row_hit ? cfg_.dram.row_hit_latency : cfg_.dram.row_miss_latency) +
                cfg_.dram.bus_cycles_per_request;
    bank.busy_until = now + lat;
    bank.done_at = now + lat;
    bank.in_service = id;
    service_order_.push_back(id);
    if (from_high)
        ++high_serviced_;
    else {
        ++low_serviced_;
        max_low_wait_ = std::max(max_low_wait_, now - *ledger[id].dram_enqueue_cycle);
    }
}

void DramSubsystem::step(std::vector<MemoryRequest>& ledger, Cycle now) {
    for (std::uint32_t b = 0; b < banks_.size(); ++b) {
        if (banks_[b].in_service || banks_[b].busy_until > now) continue;
        if (auto i = frfcfs_pick(ledger, high_, b)) {
            std::uint64_t id = high_[*i];
            high_.erase(high_.begin() + static_cast<std::ptrdiff_t>(*i));
            start_service(ledger, id, b, now, true);
            continue;
        }
        // Strict priority is per-bank by default: a low request may run on
        // an idle bank while high requests wait for a different busy bank.
        if (cfg_.dram.strict_global && !high_.empty()) continue;
        if (auto i = frfcfs_pick(ledger, low_, b)) {
            std::uint64_t id = low_[*i];
            low_.erase(low_.begin() + static_cast<std::ptrdiff_t>(*i));
            start_service(ledger, id, b, now, false);
        }
    }
}

std::vector<std::uint64_t> DramSubsystem::pop_completed(Cycle now) {
    std::vector<std::uint64_t> done;
    for (auto& bank : banks_) {
        if (bank.in_service && bank.done_at <= now) {
            done.push_back(*bank.in_service);
            bank.in_service.reset();
        }
    }
    return done;
}

bool DramSubsystem::idle() const {
    if (!high_.empty() || !low_.empty()) return false;
    for (const auto& b : banks_)
        if (b.in_service) return false;
    return true;
}

std::optional<Cycle> DramSubsystem::next_completion_cycle() const {
    std::optional<Cycle> best;
    for (const auto& b : banks_)
        if (b.in_service && (!best || b.done_at < *best)) best = b.done_at;
    return best;
}

}  // namespace warpsim
