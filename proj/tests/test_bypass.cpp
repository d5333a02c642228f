#include "doctest.h"
#include "warpsim/bypass.hpp"

using namespace warpsim;

namespace {

PolicyConfig with_bypass(BypassKind kind) {
    PolicyConfig p;
    p.bypass = kind;
    return p;
}

}  // namespace

TEST_CASE("NoBypass always routes to cache") {
    BypassUnit u(with_bypass(BypassKind::None), 1);
    for (WarpType t : {WarpType::AllMiss, WarpType::MostlyMiss, WarpType::AllHit})
        CHECK(u.decide(0, t, false, 0) == Route::ToCache);
}

TEST_CASE("WByp bypasses miss-typed warps unless probing is forced") {
    BypassUnit u(with_bypass(BypassKind::WByp), 1);
    CHECK(u.decide(0, WarpType::MostlyMiss, false, 0) == Route::ToDram);
    CHECK(u.decide(0, WarpType::AllMiss, false, 0) == Route::ToDram);
    CHECK(u.decide(0, WarpType::AllHit, false, 0) == Route::ToCache);
    CHECK(u.decide(0, WarpType::MostlyHit, false, 0) == Route::ToCache);
    CHECK(u.decide(0, WarpType::Balanced, false, 0) == Route::ToCache);
    CHECK(u.decide(0, WarpType::Unknown, false, 0) == Route::ToCache);
    // Forced probe interval overrides the bypass.
    CHECK(u.decide(0, WarpType::AllMiss, true, 0) == Route::ToCache);
}

TEST_CASE("Rand fraction 0 never bypasses; fraction calibrated within 0.01") {
    PolicyConfig p = with_bypass(BypassKind::Rand);
    p.rand_fraction = 0.0;
    BypassUnit zero(p, 7);
    for (int i = 0; i < 10000; ++i)
        CHECK(zero.decide(0, WarpType::Balanced, false, 0) == Route::ToCache);

    for (double frac : {0.1, 0.5, 0.9}) {
        p.rand_fraction = frac;
        BypassUnit u(p, 7);
        int bypassed = 0;
        const int n = 100000;
        for (int i = 0; i < n; ++i)
            if (u.decide(0, WarpType::Balanced, false, 0) == Route::ToDram) ++bypassed;
        CHECK(std::abs(static_cast<double>(bypassed) / n - frac) <= 0.01);
    }
}

TEST_CASE("PCAL token holders keep cache access") {
    PolicyConfig p = with_bypass(BypassKind::Pcal);
    p.pcal_tokens = 1;
    BypassUnit u(p, 1);
    // Before any assignment everyone may probe.
    CHECK(u.decide(5, WarpType::Balanced, false, 0) == Route::ToCache);

    u.pcal_reassign_tokens({{0, 2}, {3, 9}, {7, 4}});
    CHECK(u.pcal_has_token(3));
    CHECK(u.decide(3, WarpType::Balanced, false, 0) == Route::ToCache);
    CHECK(u.decide(0, WarpType::Balanced, false, 0) == Route::ToDram);
    CHECK(u.decide(7, WarpType::AllHit, false, 0) == Route::ToDram);
}

TEST_CASE("PCAL ties break toward the lower warp id") {
    PolicyConfig p = with_bypass(BypassKind::Pcal);
    p.pcal_tokens = 1;
    BypassUnit u(p, 1);
    u.pcal_reassign_tokens({{4, 9}, {2, 9}, {6, 1}});
    CHECK(u.pcal_has_token(2));
    CHECK_FALSE(u.pcal_has_token(4));
}

TEST_CASE("PCAL with enough tokens degenerates to NoBypass") {
    PolicyConfig p = with_bypass(BypassKind::Pcal);
    p.pcal_tokens = 8;
    BypassUnit u(p, 1);
    u.pcal_reassign_tokens({{0, 1}, {1, 0}, {2, 5}});
    for (std::uint32_t w : {0u, 1u, 2u})
        CHECK(u.decide(w, WarpType::MostlyMiss, false, 0) == Route::ToCache);
}

TEST_CASE("PC-based predictor saturates and steers decisions") {
    PolicyConfig p = with_bypass(BypassKind::PcByp);
    p.pcbyp_counter_bits = 2;  // counters in [0,3], threshold 2
    BypassUnit u(p, 1);
    CHECK(u.decide(0, WarpType::Balanced, false, 42) == Route::ToCache);
    u.pcbyp_update(42, false);
    u.pcbyp_update(42, false);
    CHECK(u.pcbyp_counter(42) == 3);
    u.pcbyp_update(42, false);  // saturates
    CHECK(u.pcbyp_counter(42) == 3);
    CHECK(u.decide(0, WarpType::Balanced, false, 42) == Route::ToDram);
    // Hits walk it back below the threshold.
    u.pcbyp_update(42, true);
    u.pcbyp_update(42, true);
    CHECK(u.decide(0, WarpType::Balanced, false, 42) == Route::ToCache);
}

TEST_CASE("alternating outcomes oscillate around the midpoint") {
    PolicyConfig p = with_bypass(BypassKind::PcByp);
    BypassUnit u(p, 1);
    std::uint32_t start = u.pcbyp_counter(9);
    for (int i = 0; i < 20; ++i) {
        u.pcbyp_update(9, false);
        u.pcbyp_update(9, true);
    }
    CHECK(u.pcbyp_counter(9) == start);
}

TEST_CASE("instruction ids collide in a size-1 table") {
    PolicyConfig p = with_bypass(BypassKind::PcByp);
    p.pcbyp_table_size = 1;
    BypassUnit u(p, 1);
    u.pcbyp_update(100, false);
    u.pcbyp_update(100, false);
    // A different instruction shares the counter and inherits the bias.
    CHECK(u.decide(0, WarpType::Balanced, false, 200) == Route::ToDram);
}
