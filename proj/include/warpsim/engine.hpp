#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "warpsim/bypass.hpp"
#include "warpsim/classifier.hpp"
#include "warpsim/config.hpp"
#include "warpsim/dram.hpp"
#include "warpsim/l2cache.hpp"
#include "warpsim/report.hpp"
#include "warpsim/trace.hpp"

namespace warpsim {

// Cycle-stepped orchestration. Warps issue memory instructions in order and
// stall until the slowest request of the instruction completes; requests run
// through bypass -> L2 banks -> DRAM. Kernels execute sequentially.
class Engine {
public:
    Engine(std::vector<TraceInstruction> trace, SimConfig cfg);

    RunReport run();

    // Request-level record of the finished run, for post-mortem inspection.
    const std::vector<MemoryRequest>& ledger() const { return ledger_; }
    const std::vector<RequestFate>& fates() const { return fates_; }

private:
    struct WarpRuntime {
        std::uint32_t warp_id = 0;
        std::vector<const TraceInstruction*> instrs;
        std::size_t next_instr = 0;
        std::vector<std::uint64_t> pending_route;  // ToCache requests awaiting a slot
        std::uint32_t outstanding = 0;             // in-flight load requests
        bool instr_open = false;
        bool instr_is_load = false;
        bool instr_all_hit = false;
        std::uint64_t completed_instructions = 0;
        std::uint64_t total_stall_cycles = 0;
        std::uint64_t l2_hits = 0;
        std::uint64_t l2_accesses = 0;
        std::uint64_t bypassed = 0;
        std::uint64_t all_hit_loads = 0;
        std::vector<IntervalSample> intervals;
    };

    void phase_completion(Cycle now);
    void phase_issue(Cycle now);
    void issue_instruction(WarpRuntime& w, Cycle now);
    void route_request(WarpRuntime& w, std::uint64_t id, Cycle now);
    void complete_request(std::uint64_t id, Cycle now);
    void record_probe_outcome(std::uint64_t id, bool hit);
    void check_instruction_done(WarpRuntime& w);
    bool kernel_work_remains() const;
    std::optional<Cycle> next_event_cycle(Cycle now) const;

    SimConfig cfg_;
    std::vector<TraceInstruction> trace_;
    std::vector<MemoryRequest> ledger_;
    std::vector<RequestFate> fates_;

    Classifier classifier_;
    BypassUnit bypass_;
    std::unique_ptr<SharedCache> cache_;
    std::unique_ptr<DramSubsystem> dram_;

    std::uint32_t current_kernel_ = 0;
    std::vector<WarpRuntime> warps_;  // ascending warp_id, current kernel
    std::map<std::uint32_t, std::size_t> warp_index_;

    std::uint64_t requests_completed_ = 0;
    std::uint64_t bypassed_total_ = 0;
    std::uint64_t occupancy_integral_ = 0;
    Cycle last_progress_ = 0;
    bool progressed_ = false;
};

// Convenience wrapper: build an engine and run it. When `ledger_out` is
// given it receives the per-request records of the run.
RunReport run_simulation(const std::vector<TraceInstruction>& trace, const SimConfig& cfg,
                         std::vector<MemoryRequest>* ledger_out = nullptr);

}  // namespace warpsim
