#include <fstream>
#include <sstream>

#include "warpsim/config.hpp"
#include "warpsim/rng.hpp"
#include "warpsim/types.hpp"

namespace warpsim {

const char* to_string(WarpType t) {
    switch (t) {
        case WarpType::AllHit: return "all-hit";
        case WarpType::MostlyHit: return "mostly-hit";
        case WarpType::Balanced: return "balanced";
        case WarpType::MostlyMiss: return "mostly-miss";
        case WarpType::AllMiss: return "all-miss";
        case WarpType::Unknown: return "unknown";
    }
    return "?";
}

WarpType warp_type_from_string(const std::string& s) {
    if (s == "all-hit") return WarpType::AllHit;
    if (s == "mostly-hit") return WarpType::MostlyHit;
    if (s == "balanced") return WarpType::Balanced;
    if (s == "mostly-miss") return WarpType::MostlyMiss;
    if (s == "all-miss") return WarpType::AllMiss;
    if (s == "unknown") return WarpType::Unknown;
    throw ConfigError("unknown warp type: " + s);
}

int warp_type_rank(WarpType t) {
    switch (t) {
        case WarpType::AllMiss: return 0;
        case WarpType::MostlyMiss: return 1;
        case WarpType::Balanced: return 2;
        case WarpType::Unknown: return 2;
        case WarpType::MostlyHit: return 3;
        case WarpType::AllHit: return 4;
    }
    return 2;
}

const char* to_string(RequestFate f) {
    switch (f) {
        case RequestFate::Pending: return "pending";
        case RequestFate::Hit: return "hit";
        case RequestFate::MissFill: return "miss_fill";
        case RequestFate::Merged: return "merged";
        case RequestFate::Bypassed: return "bypassed";
        case RequestFate::Store: return "store";
    }
    return "?";
}

std::uint64_t fnv1a(std::string_view s, std::uint64_t h) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t hash_mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Rng make_stream(std::uint64_t seed, std::string_view label) {
    return Rng(hash_mix(seed, fnv1a(label)));
}

const char* to_string(InsertionPolicy p) {
    switch (p) {
        case InsertionPolicy::BaselineLru: return "lru";
        case InsertionPolicy::Wip: return "wip";
        case InsertionPolicy::Eaf: return "eaf";
    }
    return "?";
}

const char* to_string(BypassKind b) {
    switch (b) {
        case BypassKind::None: return "none";
        case BypassKind::WByp: return "wbyp";
        case BypassKind::Pcal: return "pcal-simplified";
        case BypassKind::Rand: return "rand";
        case BypassKind::PcByp: return "pcbyp";
    }
    return "?";
}

const char* to_string(SchedulerKind s) {
    switch (s) {
        case SchedulerKind::FrFcfs: return "frfcfs";
        case SchedulerKind::Wms: return "wms";
    }
    return "?";
}

namespace {

InsertionPolicy insertion_from_string(const std::string& s) {
    if (s == "lru") return InsertionPolicy::BaselineLru;
    if (s == "wip") return InsertionPolicy::Wip;
    if (s == "eaf") return InsertionPolicy::Eaf;
    throw ConfigError("unknown insertion policy: " + s);
}

BypassKind bypass_from_string(const std::string& s) {
    if (s == "none") return BypassKind::None;
    if (s == "wbyp") return BypassKind::WByp;
    if (s == "pcal" || s == "pcal-simplified") return BypassKind::Pcal;
    if (s == "rand") return BypassKind::Rand;
    if (s == "pcbyp") return BypassKind::PcByp;
    throw ConfigError("unknown bypass policy: " + s);
}

SchedulerKind scheduler_from_string(const std::string& s) {
    if (s == "frfcfs") return SchedulerKind::FrFcfs;
    if (s == "wms") return SchedulerKind::Wms;
    throw ConfigError("unknown scheduler: " + s);
}

bool is_power_of_two(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

// Recursively reject keys that the default schema does not contain.
void check_unknown_keys(const ordered_json& input, const ordered_json& schema,
                        const std::string& prefix) {
    for (auto it = input.begin(); it != input.end(); ++it) {
        std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
        if (!schema.contains(it.key())) {
            throw ConfigError("unknown config key: " + path);
        }
        if (it.value().is_object()) {
            check_unknown_keys(it.value(), schema.at(it.key()), path);
        }
    }
}

template <typename T>
void get_if(const ordered_json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

void SimConfig::validate() const {
    if (warp_width < 1) throw ConfigError("warp_width must be >= 1");
    if (line_size_bytes < 1) throw ConfigError("line_size_bytes must be >= 1");
    if (l2.associativity < 1) throw ConfigError("l2.associativity must be >= 1");
    if (!is_power_of_two(l2.num_banks))
        throw ConfigError("l2.num_banks must be a power of two");
    if (!is_power_of_two(l2.sets_per_bank))
        throw ConfigError("l2.sets_per_bank must be a power of two");
    if (!is_power_of_two(dram.num_banks))
        throw ConfigError("dram.num_banks must be a power of two");
    if (l2.lookup_latency_cycles < 1 || dram.row_hit_latency < 1 ||
        dram.row_miss_latency < 1 || dram.bus_cycles_per_request < 1)
        throw ConfigError("all latencies must be >= 1");
    if (l2.ports_per_bank < 1) throw ConfigError("l2.ports_per_bank must be >= 1");
    if (l2.mshrs_per_bank < 1) throw ConfigError("l2.mshrs_per_bank must be >= 1");
    if (l2.queue_capacity < 1) throw ConfigError("l2.queue_capacity must be >= 1");
    if (dram.row_size_lines < 1) throw ConfigError("dram.row_size_lines must be >= 1");
    if (!(0.0 < classifier.theta_lo && classifier.theta_lo < classifier.theta_hi &&
          classifier.theta_hi < 1.0))
        throw ConfigError("require 0 < theta_lo < theta_hi < 1");
    if (classifier.sample_interval_accesses < 1)
        throw ConfigError("classifier.sample_interval_accesses must be >= 1");
    if (policies.pcbyp_table_size < 1)
        throw ConfigError("policies.pcbyp_table_size must be >= 1");
    if (policies.pcbyp_counter_bits < 1 || policies.pcbyp_counter_bits > 16)
        throw ConfigError("policies.pcbyp_counter_bits must be in [1,16]");
    if (policies.rand_fraction < 0.0 || policies.rand_fraction > 1.0)
        throw ConfigError("policies.rand_fraction must be in [0,1]");
}

ordered_json SimConfig::to_json() const {
    ordered_json j;
    j["warp_width"] = warp_width;
    j["line_size_bytes"] = line_size_bytes;
    j["coalescing"] = coalescing;
    j["seed"] = seed;
    j["deadlock_cycles"] = deadlock_cycles;
    j["l2"] = {{"num_banks", l2.num_banks},
               {"sets_per_bank", l2.sets_per_bank},
               {"associativity", l2.associativity},
               {"lookup_latency_cycles", l2.lookup_latency_cycles},
               {"ports_per_bank", l2.ports_per_bank},
               {"mshrs_per_bank", l2.mshrs_per_bank},
               {"queue_capacity", l2.queue_capacity}};
    j["dram"] = {{"num_banks", dram.num_banks},
                 {"row_size_lines", dram.row_size_lines},
                 {"row_hit_latency", dram.row_hit_latency},
                 {"row_miss_latency", dram.row_miss_latency},
                 {"bus_cycles_per_request", dram.bus_cycles_per_request},
                 {"strict_global", dram.strict_global}};
    j["classifier"] = {{"sample_interval_accesses", classifier.sample_interval_accesses},
                       {"theta_hi", classifier.theta_hi},
                       {"theta_lo", classifier.theta_lo},
                       {"forced_probe_period", classifier.forced_probe_period}};
    j["policies"] = {{"insertion", to_string(policies.insertion)},
                     {"bypass", to_string(policies.bypass)},
                     {"scheduler", to_string(policies.scheduler)},
                     {"pcal_tokens", policies.pcal_tokens},
                     {"rand_fraction", policies.rand_fraction},
                     {"pcbyp_table_size", policies.pcbyp_table_size},
                     {"pcbyp_counter_bits", policies.pcbyp_counter_bits}};
    return j;
}

SimConfig SimConfig::from_json(const ordered_json& j) {
    SimConfig cfg;
    check_unknown_keys(j, cfg.to_json(), "");
    get_if(j, "warp_width", cfg.warp_width);
    get_if(j, "line_size_bytes", cfg.line_size_bytes);
    get_if(j, "coalescing", cfg.coalescing);
    get_if(j, "seed", cfg.seed);
    get_if(j, "deadlock_cycles", cfg.deadlock_cycles);
    if (j.contains("l2")) {
        const auto& l = j.at("l2");
        get_if(l, "num_banks", cfg.l2.num_banks);
        get_if(l, "sets_per_bank", cfg.l2.sets_per_bank);
        get_if(l, "associativity", cfg.l2.associativity);
        get_if(l, "lookup_latency_cycles", cfg.l2.lookup_latency_cycles);
        get_if(l, "ports_per_bank", cfg.l2.ports_per_bank);
        get_if(l, "mshrs_per_bank", cfg.l2.mshrs_per_bank);
        get_if(l, "queue_capacity", cfg.l2.queue_capacity);
    }
    if (j.contains("dram")) {
        const auto& d = j.at("dram");
        get_if(d, "num_banks", cfg.dram.num_banks);
        get_if(d, "row_size_lines", cfg.dram.row_size_lines);
        get_if(d, "row_hit_latency", cfg.dram.row_hit_latency);
        get_if(d, "row_miss_latency", cfg.dram.row_miss_latency);
        get_if(d, "bus_cycles_per_request", cfg.dram.bus_cycles_per_request);
        get_if(d, "strict_global", cfg.dram.strict_global);
    }
    if (j.contains("classifier")) {
        const auto& c = j.at("classifier");
        get_if(c, "sample_interval_accesses", cfg.classifier.sample_interval_accesses);
        get_if(c, "theta_hi", cfg.classifier.theta_hi);
        get_if(c, "theta_lo", cfg.classifier.theta_lo);
        get_if(c, "forced_probe_period", cfg.classifier.forced_probe_period);
    }
    if (j.contains("policies")) {
        const auto& p = j.at("policies");
        if (p.contains("insertion"))
            cfg.policies.insertion = insertion_from_string(p.at("insertion").get<std::string>());
        if (p.contains("bypass"))
            cfg.policies.bypass = bypass_from_string(p.at("bypass").get<std::string>());
        if (p.contains("scheduler"))
            cfg.policies.scheduler = scheduler_from_string(p.at("scheduler").get<std::string>());
        get_if(p, "pcal_tokens", cfg.policies.pcal_tokens);
        get_if(p, "rand_fraction", cfg.policies.rand_fraction);
        get_if(p, "pcbyp_table_size", cfg.policies.pcbyp_table_size);
        get_if(p, "pcbyp_counter_bits", cfg.policies.pcbyp_counter_bits);
    }
    cfg.validate();
    return cfg;
}

SimConfig SimConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("failed to parse config " + path + ": " + e.what());
    }
    return from_json(j);
}

void SimConfig::apply_override(ordered_json& j, const std::string& key,
                               const std::string& value) {
    ordered_json* node = &j;
    std::stringstream ss(key);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, '.')) parts.push_back(part);
    if (parts.empty()) throw ConfigError("empty override key");
    for (size_t i = 0; i + 1 < parts.size(); ++i) node = &(*node)[parts[i]];
    ordered_json parsed = ordered_json::parse(value, nullptr, false);
    if (parsed.is_discarded() || parsed.is_string()) {
        (*node)[parts.back()] = value;
    } else {
        (*node)[parts.back()] = parsed;
    }
}

std::uint64_t SimConfig::hash() const { return fnv1a(to_json().dump()); }

}  // namespace warpsim
