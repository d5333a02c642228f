#include <sstream>

#include "doctest.h"
#include "warpsim/rng.hpp"
#include "warpsim/trace.hpp"

using namespace warpsim;

TEST_CASE("empty trace") {
    std::istringstream in("");
    CHECK(load_trace(in, 32).empty());
}

TEST_CASE("single record with 128-byte lines") {
    std::istringstream in("0 7 L 0:0 1:128\n");
    auto t = load_trace(in, 32);
    REQUIRE(t.size() == 1);
    CHECK(t[0].kernel_id == 0);
    CHECK(t[0].warp_id == 7);
    CHECK(t[0].kind == AccessKind::Load);
    REQUIRE(t[0].lane_addrs.size() == 2);
    CHECK(t[0].lane_addrs[0] == std::pair<std::uint32_t, std::uint64_t>{0, 0});
    CHECK(t[0].lane_addrs[1].second / 128 == 1);
}

TEST_CASE("comments, commas and hex addresses") {
    std::istringstream in(
        "# header comment\n"
        "0 1 S 0:0x80,1:0x100  # trailing comment\n"
        "\n");
    auto t = load_trace(in, 32);
    REQUIRE(t.size() == 1);
    CHECK(t[0].kind == AccessKind::Store);
    CHECK(t[0].lane_addrs[0].second == 0x80);
    CHECK(t[0].lane_addrs[1].second == 0x100);
}

TEST_CASE("duplicate lane errors with line number") {
    std::istringstream in("0 0 L 0:0\n0 0 L 0:0 0:128\n");
    try {
        load_trace(in, 32);
        FAIL("expected TraceError");
    } catch (const TraceError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("lane out of range and malformed records") {
    std::istringstream big_lane("0 0 L 32:0\n");
    CHECK_THROWS_AS(load_trace(big_lane, 32), TraceError);
    std::istringstream no_kind("0 0 X 0:0\n");
    CHECK_THROWS_AS(load_trace(no_kind, 32), TraceError);
    std::istringstream bad_pair("0 0 L 0-0\n");
    CHECK_THROWS_AS(load_trace(bad_pair, 32), TraceError);
}

TEST_CASE("save then load is bit-identical") {
    Rng rng(5);
    std::vector<TraceInstruction> trace;
    for (int i = 0; i < 200; ++i) {
        TraceInstruction ins;
        ins.kernel_id = static_cast<std::uint32_t>(rng.next_below(3));
        ins.warp_id = static_cast<std::uint32_t>(rng.next_below(16));
        ins.kind = rng.next_bernoulli(0.2) ? AccessKind::Store : AccessKind::Load;
        int lanes = 1 + static_cast<int>(rng.next_below(32));
        for (int l = 0; l < lanes; ++l)
            ins.lane_addrs.emplace_back(static_cast<std::uint32_t>(l), rng.next() >> 20);
        trace.push_back(ins);
    }
    std::ostringstream out;
    save_trace(out, trace);
    std::istringstream in(out.str());
    auto back = load_trace(in, 32);
    REQUIRE(back.size() == trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i) CHECK(back[i] == trace[i]);
}
