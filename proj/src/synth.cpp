#include "warpsim/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <list>
#include <unordered_map>

#include "warpsim/rng.hpp"

namespace warpsim {

void SyntheticSpec::validate() const {
    if (num_warps < 1) throw ConfigError("num_warps must be >= 1");
    if (instructions_per_warp < 1)
        throw ConfigError("instructions_per_warp must be >= 1");
    if (warp_profiles.empty()) throw ConfigError("warp_profiles must be nonempty");
    double sum = 0.0;
    for (const auto& p : warp_profiles) {
        if (p.target_hit_ratio < 0.0 || p.target_hit_ratio > 1.0)
            throw ConfigError("target_hit_ratio must be in [0,1]");
        if (p.working_set_lines < 1)
            throw ConfigError("working_set_lines must be >= 1");
        if (p.stride_lines < 1) throw ConfigError("stride_lines must be >= 1");
        if (p.phase_shift_interval && *p.phase_shift_interval < 1)
            throw ConfigError("phase_shift_interval must be >= 1");
        sum += p.fraction_of_warps;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ConfigError("warp profile fractions must sum to 1");
    if (store_fraction < 0.0 || store_fraction > 1.0)
        throw ConfigError("store_fraction must be in [0,1]");
}

SyntheticSpec SyntheticSpec::from_json(const ordered_json& j) {
    SyntheticSpec spec;
    spec.warp_profiles.clear();
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (k == "num_warps")
            spec.num_warps = it.value().get<std::uint32_t>();
        else if (k == "instructions_per_warp")
            spec.instructions_per_warp = it.value().get<std::uint64_t>();
        else if (k == "store_fraction")
            spec.store_fraction = it.value().get<double>();
        else if (k == "warp_profiles") {
            for (const auto& pj : it.value()) {
                WarpProfile p;
                for (auto pit = pj.begin(); pit != pj.end(); ++pit) {
                    const std::string& pk = pit.key();
                    if (pk == "fraction_of_warps")
                        p.fraction_of_warps = pit.value().get<double>();
                    else if (pk == "target_hit_ratio")
                        p.target_hit_ratio = pit.value().get<double>();
                    else if (pk == "working_set_lines")
                        p.working_set_lines = pit.value().get<std::uint64_t>();
                    else if (pk == "stride_lines")
                        p.stride_lines = pit.value().get<std::uint64_t>();
                    else if (pk == "phase_shift_interval")
                        p.phase_shift_interval = pit.value().get<std::uint64_t>();
                    else if (pk == "pin_to_bank")
                        p.pin_to_bank = pit.value().get<bool>();
                    else
                        throw ConfigError("unknown warp profile key: " + pk);
                }
                spec.warp_profiles.push_back(p);
            }
        } else {
            throw ConfigError("unknown synthetic spec key: " + k);
        }
    }
    spec.validate();
    return spec;
}

SyntheticSpec SyntheticSpec::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open synthetic spec: " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("failed to parse synthetic spec " + path + ": " + e.what());
    }
    return from_json(j);
}

std::vector<std::uint32_t> SyntheticSpec::profile_of_warp() const {
    std::vector<std::uint32_t> out(num_warps);
    double cum = 0.0;
    std::uint32_t start = 0;
    for (std::uint32_t pi = 0; pi < warp_profiles.size(); ++pi) {
        cum += warp_profiles[pi].fraction_of_warps;
        std::uint32_t end = (pi + 1 == warp_profiles.size())
                                ? num_warps
                                : static_cast<std::uint32_t>(std::llround(cum * num_warps));
        for (std::uint32_t w = start; w < end && w < num_warps; ++w) out[w] = pi;
        start = end;
    }
    return out;
}

std::vector<TraceInstruction> generate(const SyntheticSpec& spec, const SimConfig& cfg) {
    spec.validate();
    for (const auto& p : spec.warp_profiles) {
        if (p.target_hit_ratio > 0.0 && p.working_set_lines > cfg.l2.total_lines())
            throw ConfigError(
                "infeasible profile: reuse set of " +
                std::to_string(p.working_set_lines) + " lines exceeds cache capacity of " +
                std::to_string(cfg.l2.total_lines()) + " lines");
    }

    const std::uint32_t lines_per_instr = std::min<std::uint32_t>(8, cfg.warp_width);
    const auto assignment = spec.profile_of_warp();
    std::vector<std::uint64_t> stream_ptr(spec.num_warps, 0);

    std::vector<TraceInstruction> out;
    out.reserve(spec.num_warps * spec.instructions_per_warp);

    // Instructions are emitted round-robin across warps so that concurrent
    // warps interleave in the trace the way the engine will replay them.
    for (std::uint64_t ins_idx = 0; ins_idx < spec.instructions_per_warp; ++ins_idx) {
        for (std::uint32_t w = 0; w < spec.num_warps; ++w) {
            const WarpProfile& prof = spec.warp_profiles[assignment[w]];
            Rng rng = make_stream(cfg.seed,
                                  "trace/" + std::to_string(w) + "/" + std::to_string(ins_idx));
            double h = prof.target_hit_ratio;
            if (prof.phase_shift_interval &&
                (ins_idx / *prof.phase_shift_interval) % 2 == 1)
                h = 1.0 - h;

            TraceInstruction ins;
            ins.kernel_id = 0;
            ins.warp_id = w;
            ins.kind = rng.next_bernoulli(spec.store_fraction) ? AccessKind::Store
                                                               : AccessKind::Load;

            // The per-warp region base is offset by an odd stride so that
            // different warps' reuse sets land in different cache sets; a
            // bare power-of-two base would alias every warp onto set 0.
            const std::uint64_t region =
                ((static_cast<std::uint64_t>(w) + 1) << 40) + w * 977ULL;
            std::vector<std::uint64_t> lines(lines_per_instr);
            for (std::uint32_t li = 0; li < lines_per_instr; ++li) {
                std::uint64_t raw;
                if (h > 0.0 && rng.next_bernoulli(h)) {
                    raw = region + rng.next_below(prof.working_set_lines) * prof.stride_lines;
                } else {
                    raw = region + (1ULL << 32) + stream_ptr[w] * prof.stride_lines;
                    ++stream_ptr[w];
                }
                lines[li] = prof.pin_to_bank
                                ? raw * cfg.l2.num_banks + (w % cfg.l2.num_banks)
                                : raw;
            }

            const std::uint32_t lanes_per_line = cfg.warp_width / lines_per_instr;
            for (std::uint32_t lane = 0; lane < cfg.warp_width; ++lane) {
                std::uint32_t li = std::min(lane / std::max(1u, lanes_per_line),
                                            lines_per_instr - 1);
                std::uint64_t byte =
                    lines[li] * cfg.line_size_bytes +
                    (lane % std::max(1u, lanes_per_line)) *
                        (cfg.line_size_bytes / std::max(1u, lanes_per_line));
                ins.lane_addrs.emplace_back(lane, byte);
            }
            out.push_back(std::move(ins));
        }
    }
    return out;
}

double measured_hit_ratio(const std::vector<TraceInstruction>& trace,
                          std::uint32_t warp_id, const SimConfig& cfg) {
    const std::uint64_t num_sets =
        static_cast<std::uint64_t>(cfg.l2.num_banks) * cfg.l2.sets_per_bank;
    // Plain LRU, same geometry, no timing: sets keyed by (bank,set).
    std::vector<std::list<std::uint64_t>> sets(num_sets);
    std::uint64_t hits = 0, accesses = 0;
    for (const auto& ins : trace) {
        if (ins.warp_id != warp_id) continue;
        std::vector<std::uint64_t> lines;
        for (const auto& [lane, byte] : ins.lane_addrs) {
            std::uint64_t line = byte / cfg.line_size_bytes;
            if (std::find(lines.begin(), lines.end(), line) == lines.end())
                lines.push_back(line);
        }
        for (std::uint64_t line : lines) {
            auto bst = map_address(line, cfg);
            auto& s = sets[static_cast<std::uint64_t>(bst.bank) * cfg.l2.sets_per_bank +
                           bst.set];
            ++accesses;
            auto it = std::find(s.begin(), s.end(), line);
            if (it != s.end()) {
                ++hits;
                s.erase(it);
            } else if (s.size() >= cfg.l2.associativity) {
                s.pop_back();
            }
            s.push_front(line);
        }
    }
    return accesses == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(accesses);
}

}  // namespace warpsim
