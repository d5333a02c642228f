#include "warpsim/report.hpp"

#include <algorithm>
#include <fstream>

namespace warpsim {

double harmonic_speedup(const std::vector<double>& speedups) {
    if (speedups.empty()) throw SimError("harmonic_speedup of empty list");
    double denom = 0.0;
    for (double s : speedups) {
        if (s <= 0.0) throw SimError("harmonic_speedup requires positive entries");
        denom += 1.0 / s;
    }
    return static_cast<double>(speedups.size()) / denom;
}

std::vector<std::uint64_t> default_queuing_edges() {
    std::vector<std::uint64_t> edges{0, 1};
    for (std::uint64_t e = 2; e <= 4096; e *= 2) edges.push_back(e);
    return edges;
}

Histogram make_histogram(const std::vector<Cycle>& values,
                         const std::vector<std::uint64_t>& edges) {
    Histogram h;
    h.edges = edges;
    h.counts.assign(edges.size(), 0);
    for (Cycle v : values) {
        // Last bucket whose lower edge is <= v.
        auto it = std::upper_bound(edges.begin(), edges.end(), v);
        ++h.counts[static_cast<std::size_t>(it - edges.begin()) - 1];
    }
    return h;
}

std::vector<std::vector<std::uint64_t>> warp_type_histogram(const RunReport& report) {
    std::size_t max_intervals = 0;
    for (const auto& w : report.per_warp)
        max_intervals = std::max(max_intervals, w.intervals.size());
    std::vector<std::vector<std::uint64_t>> rows(max_intervals + 1,
                                                 std::vector<std::uint64_t>(6, 0));
    for (const auto& w : report.per_warp) {
        for (std::size_t i = 0; i <= max_intervals; ++i) {
            WarpType t = WarpType::Unknown;
            if (i >= 1 && !w.intervals.empty())
                t = w.intervals[std::min(i, w.intervals.size()) - 1].type;
            ++rows[i][static_cast<std::size_t>(t)];
        }
    }
    return rows;
}

namespace {

ordered_json histogram_to_json(const Histogram& h) {
    return ordered_json{{"edges", h.edges}, {"counts", h.counts}};
}

Histogram histogram_from_json(const ordered_json& j) {
    Histogram h;
    h.edges = j.at("edges").get<std::vector<std::uint64_t>>();
    h.counts = j.at("counts").get<std::vector<std::uint64_t>>();
    return h;
}

}  // namespace

ordered_json RunReport::to_json() const {
    ordered_json j;
    j["schema_version"] = schema_version;
    j["config"] = config;
    j["config_hash"] = config_hash;
    j["total_cycles"] = total_cycles;

    j["per_kernel"] = ordered_json::array();
    for (const auto& k : per_kernel)
        j["per_kernel"].push_back({{"kernel_id", k.kernel_id},
                                   {"instructions", k.instructions},
                                   {"total_cycles", k.total_cycles},
                                   {"ipc_proxy", k.ipc_proxy}});

    j["per_warp"] = ordered_json::array();
    for (const auto& w : per_warp) {
        ordered_json intervals = ordered_json::array();
        for (const auto& s : w.intervals)
            intervals.push_back({{"hit_ratio", s.hit_ratio}, {"type", to_string(s.type)}});
        j["per_warp"].push_back({{"kernel_id", w.kernel_id},
                                 {"warp_id", w.warp_id},
                                 {"final_type", to_string(w.final_type)},
                                 {"completed_instructions", w.completed_instructions},
                                 {"total_stall_cycles", w.total_stall_cycles},
                                 {"l2_hits", w.l2_hits},
                                 {"l2_accesses", w.l2_accesses},
                                 {"bypassed", w.bypassed},
                                 {"all_hit_loads", w.all_hit_loads},
                                 {"intervals", intervals}});
    }

    j["l2"] = {{"hits", l2.hits},
               {"misses", l2.misses},
               {"hit_rate", l2.hit_rate},
               {"bypassed", l2.bypassed},
               {"probed_requests", l2.probed_requests},
               {"queuing_delay_sum", l2.queuing_delay_sum},
               {"mean_queuing_delay", l2.mean_queuing_delay},
               {"occupancy_integral", l2.occupancy_integral},
               {"structural_stalls", l2.structural_stalls},
               {"queuing_histogram", histogram_to_json(l2.queuing)}};

    j["dram"] = {{"row_hits", dram.row_hits},
                 {"row_misses", dram.row_misses},
                 {"row_hit_rate", dram.row_hit_rate},
                 {"high_serviced", dram.high_serviced},
                 {"low_serviced", dram.low_serviced},
                 {"max_low_wait", dram.max_low_wait}};

    ordered_json fates;
    for (int f = 0; f < 6; ++f)
        fates[to_string(static_cast<RequestFate>(f))] = ledger.fate_counts[f];
    j["ledger"] = {{"requests_created", ledger.requests_created},
                   {"requests_completed", ledger.requests_completed},
                   {"fates", fates},
                   {"checksum", ledger.checksum}};
    return j;
}

RunReport RunReport::from_json(const ordered_json& j) {
    RunReport r;
    r.schema_version = j.at("schema_version").get<int>();
    r.config = j.at("config");
    r.config_hash = j.at("config_hash").get<std::uint64_t>();
    r.total_cycles = j.at("total_cycles").get<std::uint64_t>();
    for (const auto& kj : j.at("per_kernel")) {
        KernelReport k;
        k.kernel_id = kj.at("kernel_id").get<std::uint32_t>();
        k.instructions = kj.at("instructions").get<std::uint64_t>();
        k.total_cycles = kj.at("total_cycles").get<std::uint64_t>();
        k.ipc_proxy = kj.at("ipc_proxy").get<double>();
        r.per_kernel.push_back(k);
    }
    for (const auto& wj : j.at("per_warp")) {
        WarpReport w;
        w.kernel_id = wj.at("kernel_id").get<std::uint32_t>();
        w.warp_id = wj.at("warp_id").get<std::uint32_t>();
        w.final_type = warp_type_from_string(wj.at("final_type").get<std::string>());
        w.completed_instructions = wj.at("completed_instructions").get<std::uint64_t>();
        w.total_stall_cycles = wj.at("total_stall_cycles").get<std::uint64_t>();
        w.l2_hits = wj.at("l2_hits").get<std::uint64_t>();
        w.l2_accesses = wj.at("l2_accesses").get<std::uint64_t>();
        w.bypassed = wj.at("bypassed").get<std::uint64_t>();
        w.all_hit_loads = wj.at("all_hit_loads").get<std::uint64_t>();
        for (const auto& sj : wj.at("intervals"))
            w.intervals.push_back({sj.at("hit_ratio").get<double>(),
                                   warp_type_from_string(sj.at("type").get<std::string>())});
        r.per_warp.push_back(std::move(w));
    }
    const auto& lj = j.at("l2");
    r.l2.hits = lj.at("hits").get<std::uint64_t>();
    r.l2.misses = lj.at("misses").get<std::uint64_t>();
    r.l2.hit_rate = lj.at("hit_rate").get<double>();
    r.l2.bypassed = lj.at("bypassed").get<std::uint64_t>();
    r.l2.probed_requests = lj.at("probed_requests").get<std::uint64_t>();
    r.l2.queuing_delay_sum = lj.at("queuing_delay_sum").get<std::uint64_t>();
    r.l2.mean_queuing_delay = lj.at("mean_queuing_delay").get<double>();
    r.l2.occupancy_integral = lj.at("occupancy_integral").get<std::uint64_t>();
    r.l2.structural_stalls = lj.at("structural_stalls").get<std::uint64_t>();
    r.l2.queuing = histogram_from_json(lj.at("queuing_histogram"));
    const auto& dj = j.at("dram");
    r.dram.row_hits = dj.at("row_hits").get<std::uint64_t>();
    r.dram.row_misses = dj.at("row_misses").get<std::uint64_t>();
    r.dram.row_hit_rate = dj.at("row_hit_rate").get<double>();
    r.dram.high_serviced = dj.at("high_serviced").get<std::uint64_t>();
    r.dram.low_serviced = dj.at("low_serviced").get<std::uint64_t>();
    r.dram.max_low_wait = dj.at("max_low_wait").get<std::uint64_t>();
    const auto& gj = j.at("ledger");
    r.ledger.requests_created = gj.at("requests_created").get<std::uint64_t>();
    r.ledger.requests_completed = gj.at("requests_completed").get<std::uint64_t>();
    for (int f = 0; f < 6; ++f)
        r.ledger.fate_counts[f] =
            gj.at("fates").at(to_string(static_cast<RequestFate>(f))).get<std::uint64_t>();
    r.ledger.checksum = gj.at("checksum").get<std::uint64_t>();
    return r;
}

std::string RunReport::serialize() const { return to_json().dump(2) + "\n"; }

void RunReport::save_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw SimError("cannot open report file for writing: " + path);
    out << serialize();
}

RunReport RunReport::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SimError("cannot open report file: " + path);
    ordered_json j;
    in >> j;
    return from_json(j);
}

void write_queuing_csv(const RunReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw SimError("cannot open csv for writing: " + path);
    out << "bucket_lo,count\n";
    for (std::size_t i = 0; i < report.l2.queuing.edges.size(); ++i)
        out << report.l2.queuing.edges[i] << ',' << report.l2.queuing.counts[i] << '\n';
}

void write_warp_type_csv(const RunReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw SimError("cannot open csv for writing: " + path);
    out << "interval,all_hit,mostly_hit,balanced,mostly_miss,all_miss,unknown\n";
    auto rows = warp_type_histogram(report);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out << i;
        for (int t = 0; t < 6; ++t) out << ',' << rows[i][static_cast<std::size_t>(t)];
        out << '\n';
    }
}

void write_per_warp_csv(const RunReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw SimError("cannot open csv for writing: " + path);
    out << "kernel_id,warp_id,final_type,completed_instructions,total_stall_cycles,"
           "l2_hits,l2_accesses,bypassed,all_hit_loads\n";
    for (const auto& w : report.per_warp)
        out << w.kernel_id << ',' << w.warp_id << ',' << to_string(w.final_type) << ','
            << w.completed_instructions << ',' << w.total_stall_cycles << ','
            << w.l2_hits << ',' << w.l2_accesses << ',' << w.bypassed << ','
            << w.all_hit_loads << '\n';
}

}  // namespace warpsim
