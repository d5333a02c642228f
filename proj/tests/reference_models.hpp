#pragma once

// Test-only reference models, kept independent of the simulator's
// implementation path on purpose.

#include <cstdint>
#include <list>
#include <optional>
#include <vector>

namespace refmodel {

// Plain set-associative LRU cache; true/false per access = hit/miss.
class LruCache {
public:
    LruCache(std::uint64_t num_sets, std::uint32_t ways, std::uint64_t num_banks,
             std::uint64_t sets_per_bank)
        : ways_(ways), num_banks_(num_banks), sets_per_bank_(sets_per_bank),
          sets_(num_sets) {}

    bool access(std::uint64_t line_addr) {
        std::uint64_t bank = line_addr % num_banks_;
        std::uint64_t set = (line_addr / num_banks_) % sets_per_bank_;
        auto& s = sets_[bank * sets_per_bank_ + set];
        for (auto it = s.begin(); it != s.end(); ++it) {
            if (*it == line_addr) {
                s.erase(it);
                s.push_front(line_addr);
                return true;
            }
        }
        if (s.size() >= ways_) s.pop_back();
        s.push_front(line_addr);
        return false;
    }

private:
    std::uint32_t ways_;
    std::uint64_t num_banks_;
    std::uint64_t sets_per_bank_;
    std::vector<std::list<std::uint64_t>> sets_;
};

struct RefDramReq {
    std::uint32_t bank;
    std::uint64_t row;
    bool high;  // mostly-hit bit
};

struct RefDramTiming {
    std::uint64_t row_hit;
    std::uint64_t row_miss;
    std::uint64_t bus;
};

// Brute-force FR-FCFS / WMS schedule for requests all arriving at cycle 0 in
// stream order, evaluated per bank (priority between queues is per-bank).
// Returns completion cycle per request; service order per bank follows from
// ascending completion cycles.
inline std::vector<std::uint64_t> ref_dram_schedule(const std::vector<RefDramReq>& reqs,
                                                    std::uint32_t num_banks,
                                                    const RefDramTiming& timing,
                                                    bool warp_type_aware) {
    std::vector<std::uint64_t> completion(reqs.size(), 0);
    for (std::uint32_t b = 0; b < num_banks; ++b) {
        std::vector<std::size_t> high, low;
        for (std::size_t i = 0; i < reqs.size(); ++i) {
            if (reqs[i].bank != b) continue;
            if (warp_type_aware && reqs[i].high)
                high.push_back(i);
            else
                low.push_back(i);
        }
        std::uint64_t t = 0;
        std::optional<std::uint64_t> open_row;
        while (!high.empty() || !low.empty()) {
            auto& q = !high.empty() ? high : low;
            // Row-buffer hit first (oldest among hits), else oldest.
            std::size_t pick = q.size();
            for (std::size_t qi = 0; qi < q.size(); ++qi) {
                if (open_row && reqs[q[qi]].row == *open_row) {
                    pick = qi;
                    break;
                }
            }
            if (pick == q.size()) pick = 0;
            std::size_t idx = q[pick];
            bool row_hit = open_row && reqs[idx].row == *open_row;
            std::uint64_t lat = (row_hit ? timing.row_hit : timing.row_miss) + timing.bus;
            t += lat;
            completion[idx] = t;
            open_row = reqs[idx].row;
            q.erase(q.begin() + static_cast<std::ptrdiff_t>(pick));
        }
    }
    return completion;
}

}  // namespace refmodel
