#include "doctest.h"
#include "warpsim/config.hpp"
#include "warpsim/rng.hpp"

using namespace warpsim;

TEST_CASE("map_address examples") {
    SimConfig cfg;
    cfg.l2.num_banks = 4;
    cfg.l2.sets_per_bank = 16;

    auto a = map_address(0, cfg);
    CHECK(a.bank == 0);
    CHECK(a.set == 0);
    CHECK(a.tag == 0);

    auto b = map_address(5, cfg);
    CHECK(b.bank == 1);
    CHECK(b.set == 1);
    CHECK(b.tag == 0);

    // line = tag*sets*banks + set*banks + bank = 3*16*4 + 2*4 + 3
    auto c = map_address(4 * 16 * 3 + 2 * 4 + 3, cfg);
    CHECK(c.bank == 3);
    CHECK(c.set == 2);
    CHECK(c.tag == 3);
}

TEST_CASE("map_address round-trips on random addresses") {
    SimConfig cfg;
    Rng rng(42);
    for (int i = 0; i < 10000; ++i) {
        std::uint64_t line = rng.next() >> 8;
        CHECK(unmap_address(map_address(line, cfg), cfg) == line);
    }
}

TEST_CASE("rng determinism and seed sensitivity") {
    Rng a(123), b(123);
    for (int i = 0; i < 1000; ++i) CHECK(a.next() == b.next());

    Rng c(7), d(8);
    bool differs = false;
    for (int i = 0; i < 10 && !differs; ++i) differs = c.next() != d.next();
    CHECK(differs);
}

TEST_CASE("named rng streams are independent") {
    Rng trace1 = make_stream(99, "trace");
    Rng policy = make_stream(99, "policy");
    (void)policy.next();
    Rng trace2 = make_stream(99, "trace");
    for (int i = 0; i < 100; ++i) CHECK(trace1.next() == trace2.next());
}

TEST_CASE("config validation") {
    SimConfig cfg;
    CHECK_NOTHROW(cfg.validate());

    SimConfig bad = cfg;
    bad.classifier.theta_lo = 0.8;  // lo > hi
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    bad = cfg;
    bad.l2.num_banks = 6;  // not a power of two
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    bad = cfg;
    bad.l2.lookup_latency_cycles = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("config json round-trip and unknown keys") {
    SimConfig cfg;
    cfg.seed = 777;
    cfg.policies.bypass = BypassKind::WByp;
    SimConfig back = SimConfig::from_json(cfg.to_json());
    CHECK(back.to_json() == cfg.to_json());

    ordered_json j = cfg.to_json();
    j["l2"]["nonsense"] = 1;
    CHECK_THROWS_AS(SimConfig::from_json(j), ConfigError);
    ordered_json j2 = cfg.to_json();
    j2["typo_key"] = true;
    CHECK_THROWS_AS(SimConfig::from_json(j2), ConfigError);
}

TEST_CASE("config overrides") {
    ordered_json j = SimConfig().to_json();
    SimConfig::apply_override(j, "policies.bypass", "wbyp");
    SimConfig::apply_override(j, "l2.num_banks", "4");
    SimConfig cfg = SimConfig::from_json(j);
    CHECK(cfg.policies.bypass == BypassKind::WByp);
    CHECK(cfg.l2.num_banks == 4);
}
