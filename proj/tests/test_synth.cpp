#include <sstream>

#include "doctest.h"
#include "reference_models.hpp"
#include "warpsim/synth.hpp"
#include "warpsim/trace.hpp"

using namespace warpsim;

namespace {

// Independent calibration oracle: replay one warp's coalesced lines alone
// through the reference LRU model.
double oracle_hit_ratio(const std::vector<TraceInstruction>& trace, std::uint32_t warp,
                        const SimConfig& cfg) {
    refmodel::LruCache ref(
        static_cast<std::uint64_t>(cfg.l2.num_banks) * cfg.l2.sets_per_bank,
        cfg.l2.associativity, cfg.l2.num_banks, cfg.l2.sets_per_bank);
    std::uint64_t hits = 0, accesses = 0;
    for (const auto& ins : trace) {
        if (ins.warp_id != warp) continue;
        std::vector<std::uint64_t> lines;
        for (const auto& [lane, byte] : ins.lane_addrs) {
            std::uint64_t line = byte / cfg.line_size_bytes;
            bool seen = false;
            for (auto l : lines) seen = seen || l == line;
            if (!seen) lines.push_back(line);
        }
        for (auto line : lines) {
            ++accesses;
            if (ref.access(line)) ++hits;
        }
    }
    return accesses ? static_cast<double>(hits) / static_cast<double>(accesses) : 0.0;
}

SyntheticSpec one_profile(double h, std::uint64_t working_set, std::uint32_t warps = 1) {
    SyntheticSpec spec;
    spec.num_warps = warps;
    spec.instructions_per_warp = 512;
    spec.store_fraction = 0.0;
    spec.warp_profiles = {{1.0, h, working_set, 1, std::nullopt, false}};
    return spec;
}

}  // namespace

TEST_CASE("single-line reuse approaches hit ratio 1") {
    SimConfig cfg;
    auto trace = generate(one_profile(1.0, 1), cfg);
    CHECK(oracle_hit_ratio(trace, 0, cfg) > 0.99);
}

TEST_CASE("pure streaming yields hit ratio 0") {
    SimConfig cfg;
    SyntheticSpec spec = one_profile(0.0, 1);
    spec.warp_profiles[0].stride_lines = 64;
    auto trace = generate(spec, cfg);
    CHECK(oracle_hit_ratio(trace, 0, cfg) == 0.0);
}

TEST_CASE("calibration contract: measured ratio within 0.1 of target") {
    SimConfig cfg;
    for (double h : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        auto trace = generate(one_profile(h, 32), cfg);
        double measured = oracle_hit_ratio(trace, 0, cfg);
        CHECK(std::abs(measured - h) <= 0.1);
    }
}

TEST_CASE("bimodal spec forms two clusters straddling the thresholds") {
    SimConfig cfg;
    SyntheticSpec spec;
    spec.num_warps = 8;
    spec.instructions_per_warp = 512;
    spec.store_fraction = 0.0;
    spec.warp_profiles = {{0.5, 0.9, 32, 1, std::nullopt, false},
                          {0.5, 0.1, 32, 1, std::nullopt, false}};
    auto trace = generate(spec, cfg);
    auto assignment = spec.profile_of_warp();
    for (std::uint32_t w = 0; w < spec.num_warps; ++w) {
        double r = oracle_hit_ratio(trace, w, cfg);
        if (assignment[w] == 0)
            CHECK(r > cfg.classifier.theta_hi);
        else
            CHECK(r < cfg.classifier.theta_lo);
    }
}

TEST_CASE("generate is deterministic in (spec, seed)") {
    SimConfig cfg;
    cfg.seed = 42;
    auto spec = one_profile(0.5, 16, 4);
    auto a = generate(spec, cfg);
    auto b = generate(spec, cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);

    cfg.seed = 43;
    auto c = generate(spec, cfg);
    bool any_diff = false;
    for (std::size_t i = 0; i < a.size() && !any_diff; ++i) any_diff = !(a[i] == c[i]);
    CHECK(any_diff);
}

TEST_CASE("infeasible profile rejected") {
    SimConfig cfg;
    auto spec = one_profile(1.0, cfg.l2.total_lines() + 1);
    CHECK_THROWS_AS(generate(spec, cfg), ConfigError);
}

TEST_CASE("profile fractions must sum to one") {
    SyntheticSpec spec;
    spec.warp_profiles = {{0.5, 0.9, 32, 1, std::nullopt, false},
                          {0.4, 0.1, 32, 1, std::nullopt, false}};
    CHECK_THROWS_AS(spec.validate(), ConfigError);
}

TEST_CASE("spec json parsing rejects unknown keys") {
    ordered_json j = {{"num_warps", 4},
                      {"warp_profiles", {{{"fraction_of_warps", 1.0}}}},
                      {"bogus", 1}};
    CHECK_THROWS_AS(SyntheticSpec::from_json(j), ConfigError);
}
