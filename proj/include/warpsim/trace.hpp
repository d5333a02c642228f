#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "warpsim/types.hpp"

namespace warpsim {

// One warp-wide memory instruction as it appears in a trace file.
struct TraceInstruction {
    std::uint32_t kernel_id = 0;
    std::uint32_t warp_id = 0;
    AccessKind kind = AccessKind::Load;
    // (lane_index, byte_address); lane indices unique, each < warp_width.
    std::vector<std::pair<std::uint32_t, std::uint64_t>> lane_addrs;
};

bool operator==(const TraceInstruction& a, const TraceInstruction& b);

// Line-oriented text grammar: `kernel warp L|S lane:byteaddr ...`
// Lane pairs may be separated by spaces or commas; `#` starts a comment.
std::vector<TraceInstruction> load_trace(std::istream& in, std::uint32_t warp_width);
std::vector<TraceInstruction> load_trace_file(const std::string& path,
                                              std::uint32_t warp_width);

void save_trace(std::ostream& out, const std::vector<TraceInstruction>& trace);
void save_trace_file(const std::string& path, const std::vector<TraceInstruction>& trace);

}  // namespace warpsim
