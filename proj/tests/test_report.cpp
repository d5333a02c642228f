#include "doctest.h"
#include "warpsim/engine.hpp"
#include "warpsim/report.hpp"
#include "warpsim/synth.hpp"

using namespace warpsim;

TEST_CASE("harmonic speedup worked examples") {
    CHECK(harmonic_speedup({1.0, 1.0, 1.0}) == doctest::Approx(1.0));
    CHECK(harmonic_speedup({2.0, 2.0}) == doctest::Approx(2.0));
    CHECK(harmonic_speedup({1.0, 3.0}) == doctest::Approx(1.5));
    CHECK(harmonic_speedup({4.0}) == doctest::Approx(4.0));
    // The harmonic mean is dominated by the slow entry.
    CHECK(harmonic_speedup({0.5, 10.0}) < 1.0);
    CHECK_THROWS_AS(harmonic_speedup({}), SimError);
    CHECK_THROWS_AS(harmonic_speedup({1.0, 0.0}), SimError);
    CHECK_THROWS_AS(harmonic_speedup({-2.0}), SimError);
}

TEST_CASE("default queuing edges are log2 spaced") {
    auto edges = default_queuing_edges();
    REQUIRE(edges.size() == 14);
    CHECK(edges.front() == 0);
    CHECK(edges[1] == 1);
    CHECK(edges[2] == 2);
    CHECK(edges.back() == 4096);
}

TEST_CASE("histogram buckets are [lo, next) with an open-ended tail") {
    Histogram h = make_histogram({0, 0, 1, 2, 3, 4, 5000, 4096}, {0, 1, 2, 4, 4096});
    REQUIRE(h.counts.size() == 5);
    CHECK(h.counts[0] == 2);  // [0,1): two zeros
    CHECK(h.counts[1] == 1);  // [1,2)
    CHECK(h.counts[2] == 2);  // [2,4): 2 and 3
    CHECK(h.counts[3] == 1);  // [4,4096): 4
    CHECK(h.counts[4] == 2);  // [4096,inf): 4096 and 5000
}

TEST_CASE("warp type histogram starts all-unknown and carries the last type") {
    RunReport r;
    WarpReport a;  // two intervals: MostlyHit then AllHit
    a.intervals = {{0.8, WarpType::MostlyHit}, {1.0, WarpType::AllHit}};
    WarpReport b;  // one interval: AllMiss, then carried forward
    b.intervals = {{0.0, WarpType::AllMiss}};
    WarpReport c;  // never classified
    r.per_warp = {a, b, c};

    auto rows = warp_type_histogram(r);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0][static_cast<int>(WarpType::Unknown)] == 3);
    CHECK(rows[1][static_cast<int>(WarpType::MostlyHit)] == 1);
    CHECK(rows[1][static_cast<int>(WarpType::AllMiss)] == 1);
    CHECK(rows[1][static_cast<int>(WarpType::Unknown)] == 1);
    CHECK(rows[2][static_cast<int>(WarpType::AllHit)] == 1);
    CHECK(rows[2][static_cast<int>(WarpType::AllMiss)] == 1);  // carried
    CHECK(rows[2][static_cast<int>(WarpType::Unknown)] == 1);
}

TEST_CASE("run report JSON round trip is lossless") {
    SimConfig cfg;
    cfg.seed = 31;
    cfg.classifier.sample_interval_accesses = 8;
    SyntheticSpec spec;
    spec.num_warps = 4;
    spec.instructions_per_warp = 40;
    spec.store_fraction = 0.1;
    spec.warp_profiles = {{0.5, 0.8, 16, 1, std::nullopt, false},
                          {0.5, 0.2, 16, 2, std::nullopt, false}};
    RunReport r = run_simulation(generate(spec, cfg), cfg);
    REQUIRE(r.ledger.requests_created > 0);

    std::string bytes = r.serialize();
    RunReport back = RunReport::from_json(ordered_json::parse(bytes));
    CHECK(back.serialize() == bytes);
    CHECK(back.total_cycles == r.total_cycles);
    CHECK(back.ledger.checksum == r.ledger.checksum);
    CHECK(back.config_hash == r.config_hash);
    CHECK(back.per_warp.size() == r.per_warp.size());
}
