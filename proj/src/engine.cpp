#include "warpsim/engine.hpp"

#include <algorithm>

#include "warpsim/rng.hpp"

namespace warpsim {

namespace {

// Stand-in for a program counter: same instruction slot across warps of one
// kernel shares an identifier.
std::uint64_t instr_key(std::uint32_t kernel_id, std::uint64_t ordinal) {
    return (static_cast<std::uint64_t>(kernel_id) << 40) ^ ordinal;
}

}  // namespace

Engine::Engine(std::vector<TraceInstruction> trace, SimConfig cfg)
    : cfg_(std::move(cfg)),
      trace_(std::move(trace)),
      classifier_(cfg_.classifier),
      bypass_(cfg_.policies, cfg_.seed) {
    cfg_.validate();
    cache_ = std::make_unique<SharedCache>(cfg_);
    dram_ = std::make_unique<DramSubsystem>(cfg_);
}

void Engine::complete_request(std::uint64_t id, Cycle now) {
    MemoryRequest& req = ledger_[id];
    if (req.complete_cycle) throw SimError("request completed twice");
    req.complete_cycle = now;
    ++requests_completed_;
    progressed_ = true;
    if (req.kind == AccessKind::Load) {
        WarpRuntime& w = warps_[warp_index_.at(req.warp_id)];
        if (w.outstanding == 0) throw SimError("completion with no outstanding request");
        --w.outstanding;
        check_instruction_done(w);
    }
}

void Engine::check_instruction_done(WarpRuntime& w) {
    if (w.instr_open && w.pending_route.empty() && w.outstanding == 0) {
        w.instr_open = false;
        ++w.completed_instructions;
        if (w.instr_is_load && w.instr_all_hit) ++w.all_hit_loads;
    }
}

void Engine::record_probe_outcome(std::uint64_t id, bool hit) {
    const MemoryRequest& req = ledger_[id];
    WarpRuntime& w = warps_[warp_index_.at(req.warp_id)];
    ++w.l2_accesses;
    if (hit)
        ++w.l2_hits;
    else if (req.kind == AccessKind::Load)
        w.instr_all_hit = false;
    if (cfg_.policies.bypass == BypassKind::PcByp)
        bypass_.pcbyp_update(instr_key(req.kernel_id, req.instr_ordinal), hit);
    auto ev = classifier_.record_outcome(req.kernel_id, req.warp_id, hit);
    if (ev) {
        w.intervals.push_back({ev->hit_ratio, ev->new_type});
        if (cfg_.policies.bypass == BypassKind::Pcal) {
            std::vector<std::pair<std::uint32_t, std::uint32_t>> counts;
            counts.reserve(warps_.size());
            for (const auto& other : warps_)
                counts.emplace_back(
                    other.warp_id,
                    classifier_.counters(current_kernel_, other.warp_id).last_interval_hits);
            bypass_.pcal_reassign_tokens(counts);
        }
    }
}

void Engine::phase_completion(Cycle now) {
    for (std::uint64_t id : dram_->pop_completed(now)) {
        switch (fates_[id]) {
            case RequestFate::MissFill: {
                auto chain =
                    cache_->fill(ledger_[id].line_addr, ledger_[id].warp_type_at_issue);
                for (std::uint64_t cid : chain) complete_request(cid, now);
                break;
            }
            case RequestFate::Bypassed:
            case RequestFate::Store:
                complete_request(id, now);
                break;
            default:
                throw SimError("unexpected request fate at DRAM completion");
        }
    }
    for (const ProbeOutcome& out : cache_->resolve(ledger_, now)) {
        std::uint64_t id = out.request_id;
        switch (out.kind) {
            case ProbeKind::Hit:
                fates_[id] = RequestFate::Hit;
                record_probe_outcome(id, true);
                complete_request(id, now);
                break;
            case ProbeKind::StoreHit:
                // Write-through: the store still goes to memory.
                fates_[id] = RequestFate::Store;
                record_probe_outcome(id, true);
                dram_->enqueue(ledger_, id, now);
                break;
            case ProbeKind::StoreMiss:
                fates_[id] = RequestFate::Store;
                record_probe_outcome(id, false);
                dram_->enqueue(ledger_, id, now);
                break;
            case ProbeKind::Merged:
                fates_[id] = RequestFate::Merged;
                record_probe_outcome(id, false);
                break;
            case ProbeKind::MissToDram:
                fates_[id] = RequestFate::MissFill;
                record_probe_outcome(id, false);
                dram_->enqueue(ledger_, id, now);
                break;
        }
    }
}

void Engine::issue_instruction(WarpRuntime& w, Cycle now) {
    const TraceInstruction& ins = *w.instrs[w.next_instr];
    const std::uint64_t ordinal = w.next_instr;
    ++w.next_instr;
    w.instr_open = true;
    w.instr_is_load = ins.kind == AccessKind::Load;
    w.instr_all_hit = true;
    progressed_ = true;

    WarpType wt = classifier_.current_type(current_kernel_, w.warp_id);
    bool forced = classifier_.forced_probe_active(current_kernel_, w.warp_id);

    std::vector<std::uint64_t> lines;
    for (const auto& [lane, byte] : ins.lane_addrs) {
        std::uint64_t line = byte / cfg_.line_size_bytes;
        if (!cfg_.coalescing ||
            std::find(lines.begin(), lines.end(), line) == lines.end())
            lines.push_back(line);
    }

    for (std::uint64_t line : lines) {
        std::uint64_t id = ledger_.size();
        MemoryRequest req;
        req.request_id = id;
        req.warp_id = w.warp_id;
        req.kernel_id = ins.kernel_id;
        req.line_addr = line;
        req.kind = ins.kind;
        req.warp_type_at_issue = wt;
        req.mostly_hit_bit = mostly_hit_bit_for(wt);
        req.instr_ordinal = ordinal;
        req.issue_cycle = now;
        ledger_.push_back(req);
        fates_.push_back(RequestFate::Pending);

        Route route =
            bypass_.decide(w.warp_id, wt, forced, instr_key(ins.kernel_id, ordinal));
        if (ins.kind == AccessKind::Load) ++w.outstanding;
        if (route == Route::ToDram) {
            fates_[id] = RequestFate::Bypassed;
            ++bypassed_total_;
            ++w.bypassed;
            w.instr_all_hit = false;
            classifier_.note_bypassed(current_kernel_, w.warp_id);
            if (cfg_.policies.bypass == BypassKind::PcByp)
                bypass_.pcbyp_update(instr_key(ins.kernel_id, ordinal), false);
            dram_->enqueue(ledger_, id, now);
        } else if (!cache_->enqueue(ledger_, id, now)) {
            w.pending_route.push_back(id);
        }
    }
    check_instruction_done(w);  // stores complete at issue once fully routed
}

void Engine::phase_issue(Cycle now) {
    for (WarpRuntime& w : warps_) {
        if (!w.pending_route.empty()) {
            std::vector<std::uint64_t> still;
            for (std::uint64_t id : w.pending_route) {
                if (cache_->enqueue(ledger_, id, now))
                    progressed_ = true;
                else
                    still.push_back(id);
            }
            w.pending_route = std::move(still);
            check_instruction_done(w);
        }
        if (!w.instr_open && w.pending_route.empty() && w.outstanding == 0 &&
            w.next_instr < w.instrs.size())
            issue_instruction(w, now);
    }
}

bool Engine::kernel_work_remains() const {
    for (const auto& w : warps_)
        if (w.next_instr < w.instrs.size() || w.instr_open || w.outstanding > 0 ||
            !w.pending_route.empty())
            return true;
    return !cache_->idle() || !dram_->idle();
}

std::optional<Cycle> Engine::next_event_cycle(Cycle now) const {
    for (const auto& w : warps_) {
        if (!w.pending_route.empty()) return now + 1;
        if (!w.instr_open && w.outstanding == 0 && w.next_instr < w.instrs.size())
            return now + 1;
    }
    if (cache_->any_queue_nonempty()) return now + 1;
    std::optional<Cycle> best = cache_->next_resolve_cycle();
    if (auto d = dram_->next_completion_cycle(); d && (!best || *d < *best)) best = d;
    return best;
}

RunReport Engine::run() {
    // Group by kernel, then by warp, preserving trace order within a warp.
    std::map<std::uint32_t, std::map<std::uint32_t, std::vector<const TraceInstruction*>>>
        kernels;
    for (const auto& ins : trace_) kernels[ins.kernel_id][ins.warp_id].push_back(&ins);

    RunReport report;
    report.config = cfg_.to_json();
    report.config_hash = cfg_.hash();

    Cycle now = 0;
    for (auto& [kid, kwarps] : kernels) {
        current_kernel_ = kid;
        warps_.clear();
        warp_index_.clear();
        for (auto& [wid, instrs] : kwarps) {
            WarpRuntime w;
            w.warp_id = wid;
            w.instrs = std::move(instrs);
            warp_index_[wid] = warps_.size();
            warps_.push_back(std::move(w));
            classifier_.register_warp(kid, wid);
        }

        const Cycle kernel_start = now;
        Cycle kernel_end = now;
        last_progress_ = now;
        while (kernel_work_remains()) {
            progressed_ = false;
            phase_completion(now);
            phase_issue(now);
            cache_->service(ledger_, now);
            dram_->step(ledger_, now);
            occupancy_integral_ += cache_->total_queue_len();
            for (auto& w : warps_)
                if (w.outstanding > 0) ++w.total_stall_cycles;
            if (progressed_) last_progress_ = now;
            if (now - last_progress_ > cfg_.deadlock_cycles)
                throw SimError("deadlock: no progress for " +
                               std::to_string(cfg_.deadlock_cycles) + " cycles at cycle " +
                               std::to_string(now));
            if (!kernel_work_remains()) {
                kernel_end = now;
                break;
            }
            auto next = next_event_cycle(now);
            if (!next) throw SimError("deadlock: work remains but no pending events");
            // Queues are empty whenever cycles are skipped, so only warp
            // stall counters accrue over the gap.
            if (*next > now + 1) {
                Cycle gap = *next - now - 1;
                for (auto& w : warps_)
                    if (w.outstanding > 0) w.total_stall_cycles += gap;
            }
            now = *next;
        }

        KernelReport kr;
        kr.kernel_id = kid;
        kr.total_cycles = kernel_end - kernel_start + 1;
        for (const auto& w : warps_) kr.instructions += w.completed_instructions;
        kr.ipc_proxy =
            static_cast<double>(kr.instructions) / static_cast<double>(kr.total_cycles);
        report.per_kernel.push_back(kr);

        for (const auto& w : warps_) {
            WarpReport wr;
            wr.kernel_id = kid;
            wr.warp_id = w.warp_id;
            wr.final_type = classifier_.current_type(kid, w.warp_id);
            wr.completed_instructions = w.completed_instructions;
            wr.total_stall_cycles = w.total_stall_cycles;
            wr.l2_hits = w.l2_hits;
            wr.l2_accesses = w.l2_accesses;
            wr.bypassed = w.bypassed;
            wr.all_hit_loads = w.all_hit_loads;
            wr.intervals = w.intervals;
            report.per_warp.push_back(std::move(wr));
        }
        now = kernel_end + 1;
    }

    report.total_cycles = trace_.empty() ? 0 : now;

    report.l2.hits = cache_->hits();
    report.l2.misses = cache_->misses();
    std::uint64_t probes = cache_->hits() + cache_->misses();
    report.l2.hit_rate =
        probes == 0 ? 0.0 : static_cast<double>(cache_->hits()) / static_cast<double>(probes);
    report.l2.bypassed = bypassed_total_;
    report.l2.probed_requests = cache_->queuing_delays().size();
    for (Cycle d : cache_->queuing_delays()) report.l2.queuing_delay_sum += d;
    report.l2.mean_queuing_delay =
        report.l2.probed_requests == 0
            ? 0.0
            : static_cast<double>(report.l2.queuing_delay_sum) /
                  static_cast<double>(report.l2.probed_requests);
    report.l2.occupancy_integral = occupancy_integral_;
    report.l2.structural_stalls = cache_->structural_stalls();
    report.l2.queuing = make_histogram(cache_->queuing_delays(), default_queuing_edges());

    report.dram.row_hits = dram_->row_hits();
    report.dram.row_misses = dram_->row_misses();
    std::uint64_t serviced = dram_->row_hits() + dram_->row_misses();
    report.dram.row_hit_rate =
        serviced == 0 ? 0.0
                      : static_cast<double>(dram_->row_hits()) / static_cast<double>(serviced);
    report.dram.high_serviced = dram_->high_serviced();
    report.dram.low_serviced = dram_->low_serviced();
    report.dram.max_low_wait = dram_->max_low_wait();

    report.ledger.requests_created = ledger_.size();
    report.ledger.requests_completed = requests_completed_;
    if (report.ledger.requests_created != report.ledger.requests_completed)
        throw SimError("request conservation violated");
    std::uint64_t checksum = 0xcbf29ce484222325ULL;
    for (std::uint64_t id = 0; id < ledger_.size(); ++id) {
        ++report.ledger.fate_counts[static_cast<std::size_t>(fates_[id])];
        checksum = hash_mix(checksum, hash_mix(id, *ledger_[id].complete_cycle));
        checksum = hash_mix(checksum, static_cast<std::uint64_t>(fates_[id]));
    }
    report.ledger.checksum = checksum;
    return report;
}

RunReport run_simulation(const std::vector<TraceInstruction>& trace, const SimConfig& cfg,
                         std::vector<MemoryRequest>* ledger_out) {
    Engine engine(trace, cfg);
    RunReport report = engine.run();
    if (ledger_out) *ledger_out = engine.ledger();
    return report;
}

}  // namespace warpsim
