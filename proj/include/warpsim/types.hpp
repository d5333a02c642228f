#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace warpsim {

using Cycle = std::uint64_t;

// Warp classification by sampled shared-cache hit ratio. Unknown is the
// pre-sampling state before the first completed interval.
enum class WarpType : std::uint8_t {
    AllHit,
    MostlyHit,
    Balanced,
    MostlyMiss,
    AllMiss,
    Unknown,
};

const char* to_string(WarpType t);
WarpType warp_type_from_string(const std::string& s);

// Ordering used by the monotonicity property: AllMiss < ... < AllHit.
int warp_type_rank(WarpType t);

inline bool mostly_hit_bit_for(WarpType t) {
    return t == WarpType::AllHit || t == WarpType::MostlyHit;
}

enum class AccessKind : std::uint8_t { Load, Store };

// One cache-line-granularity access flowing through bypass -> L2 -> DRAM.
struct MemoryRequest {
    std::uint64_t request_id = 0;
    std::uint32_t warp_id = 0;
    std::uint32_t kernel_id = 0;
    std::uint64_t line_addr = 0;
    AccessKind kind = AccessKind::Load;
    WarpType warp_type_at_issue = WarpType::Unknown;
    bool mostly_hit_bit = false;
    // Per-warp instruction ordinal; stands in for a program counter.
    std::uint64_t instr_ordinal = 0;
    Cycle issue_cycle = 0;
    std::optional<Cycle> l2_enqueue_cycle;
    std::optional<Cycle> l2_service_cycle;
    std::optional<Cycle> dram_enqueue_cycle;
    std::optional<Cycle> complete_cycle;
};

// Terminal category of a request; every request ends in exactly one.
enum class RequestFate : std::uint8_t {
    Pending,
    Hit,
    MissFill,
    Merged,
    Bypassed,
    Store,
};

const char* to_string(RequestFate f);

struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TraceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace warpsim
