#include "warpsim/trace.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace warpsim {

bool operator==(const TraceInstruction& a, const TraceInstruction& b) {
    return a.kernel_id == b.kernel_id && a.warp_id == b.warp_id && a.kind == b.kind &&
           a.lane_addrs == b.lane_addrs;
}

namespace {

[[noreturn]] void fail(std::size_t line_no, const std::string& msg) {
    throw TraceError("trace parse error at line " + std::to_string(line_no) + ": " + msg);
}

std::uint64_t parse_u64(const std::string& tok, std::size_t line_no) {
    try {
        std::size_t pos = 0;
        std::uint64_t v =
            tok.rfind("0x", 0) == 0 || tok.rfind("0X", 0) == 0
                ? std::stoull(tok.substr(2), &pos, 16)
                : std::stoull(tok, &pos, 10);
        std::size_t expect = tok.rfind("0x", 0) == 0 || tok.rfind("0X", 0) == 0
                                 ? tok.size() - 2
                                 : tok.size();
        if (pos != expect) fail(line_no, "bad integer: " + tok);
        return v;
    } catch (const TraceError&) {
        throw;
    } catch (const std::exception&) {
        fail(line_no, "bad integer: " + tok);
    }
}

}  // namespace

std::vector<TraceInstruction> load_trace(std::istream& in, std::uint32_t warp_width) {
    std::vector<TraceInstruction> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        // Commas between lane pairs are equivalent to spaces.
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;  // blank or comment-only line

        TraceInstruction ins;
        ins.kernel_id = static_cast<std::uint32_t>(parse_u64(tok, line_no));
        if (!(ls >> tok)) fail(line_no, "missing warp id");
        ins.warp_id = static_cast<std::uint32_t>(parse_u64(tok, line_no));
        if (!(ls >> tok)) fail(line_no, "missing access kind");
        if (tok == "L")
            ins.kind = AccessKind::Load;
        else if (tok == "S")
            ins.kind = AccessKind::Store;
        else
            fail(line_no, "access kind must be L or S, got: " + tok);

        std::set<std::uint32_t> seen;
        while (ls >> tok) {
            auto colon = tok.find(':');
            if (colon == std::string::npos) fail(line_no, "lane pair missing ':': " + tok);
            std::uint64_t lane = parse_u64(tok.substr(0, colon), line_no);
            std::uint64_t addr = parse_u64(tok.substr(colon + 1), line_no);
            if (lane >= warp_width)
                fail(line_no, "lane index " + std::to_string(lane) + " >= warp_width");
            if (!seen.insert(static_cast<std::uint32_t>(lane)).second)
                fail(line_no, "duplicate lane " + std::to_string(lane));
            ins.lane_addrs.emplace_back(static_cast<std::uint32_t>(lane), addr);
        }
        if (ins.lane_addrs.empty()) fail(line_no, "instruction has no lanes");
        out.push_back(std::move(ins));
    }
    return out;
}

std::vector<TraceInstruction> load_trace_file(const std::string& path,
                                              std::uint32_t warp_width) {
    std::ifstream in(path);
    if (!in) throw TraceError("cannot open trace file: " + path);
    return load_trace(in, warp_width);
}

void save_trace(std::ostream& out, const std::vector<TraceInstruction>& trace) {
    for (const auto& ins : trace) {
        out << ins.kernel_id << ' ' << ins.warp_id << ' '
            << (ins.kind == AccessKind::Load ? 'L' : 'S');
        for (const auto& [lane, addr] : ins.lane_addrs) out << ' ' << lane << ':' << addr;
        out << '\n';
    }
}

void save_trace_file(const std::string& path, const std::vector<TraceInstruction>& trace) {
    std::ofstream out(path);
    if (!out) throw TraceError("cannot open trace file for writing: " + path);
    save_trace(out, trace);
}

}  // namespace warpsim
