#include "doctest.h"
#include "warpsim/experiment.hpp"

using namespace warpsim;

namespace {

SyntheticSpec tiny_workload() {
    SyntheticSpec s;
    s.num_warps = 4;
    s.instructions_per_warp = 32;
    s.store_fraction = 0.0;
    s.warp_profiles = {{0.5, 0.8, 16, 1, std::nullopt, false},
                       {0.5, 0.2, 16, 2, std::nullopt, false}};
    return s;
}

ExperimentSpec tiny_experiment(std::vector<std::string> policies) {
    ExperimentSpec spec;
    spec.policies = std::move(policies);
    WorkloadSpec wl;
    wl.name = "tiny";
    wl.synthetic = tiny_workload();
    spec.workloads = {wl};
    return spec;
}

}  // namespace

TEST_CASE("policy presets cover every policy bar") {
    const auto& presets = policy_presets();
    REQUIRE(presets.size() == 9);
    for (const char* name :
         {"baseline", "wip", "wms", "wbyp", "medic", "eaf", "pcal", "rand", "pcbyp"})
        CHECK(presets.count(name) == 1);

    CHECK(presets.at("baseline").insertion == InsertionPolicy::BaselineLru);
    CHECK(presets.at("baseline").bypass == BypassKind::None);
    CHECK(presets.at("baseline").scheduler == SchedulerKind::FrFcfs);
    CHECK(presets.at("medic").insertion == InsertionPolicy::Wip);
    CHECK(presets.at("medic").bypass == BypassKind::WByp);
    CHECK(presets.at("medic").scheduler == SchedulerKind::Wms);
    CHECK(presets.at("wip").insertion == InsertionPolicy::Wip);
    CHECK(presets.at("wms").scheduler == SchedulerKind::Wms);
    CHECK(presets.at("wbyp").bypass == BypassKind::WByp);
    CHECK(presets.at("eaf").insertion == InsertionPolicy::Eaf);
}

TEST_CASE("config_for layers defaults, overrides, then the preset") {
    ExperimentSpec spec = tiny_experiment({"baseline", "medic"});
    spec.workloads[0].overrides["l2.num_banks"] = "4";
    SimConfig cfg = config_for(spec, spec.workloads[0], "medic");
    CHECK(cfg.l2.num_banks == 4);
    CHECK(cfg.policies.insertion == InsertionPolicy::Wip);
    CHECK(cfg.policies.bypass == BypassKind::WByp);
    CHECK(cfg.policies.scheduler == SchedulerKind::Wms);
    // The preset wins over any policy override in the base config.
    spec.base_config = SimConfig().to_json();
    spec.base_config["policies"]["bypass"] = "pcal";
    CHECK(config_for(spec, spec.workloads[0], "baseline").policies.bypass ==
          BypassKind::None);
}

TEST_CASE("baseline-only comparison reports speedup exactly 1.0") {
    ExperimentSpec spec = tiny_experiment({"baseline"});
    CompareResult res = run_compare(spec, 2);
    REQUIRE(res.rows.size() == 1);
    CHECK(res.rows[0].speedup == 1.0);
    REQUIRE(res.harmonic.size() == 1);
    CHECK(res.harmonic[0].second == 1.0);
}

TEST_CASE("a policy listed twice matches itself exactly") {
    // Identical configs run in separate threads must land on speedup 1.0
    // bit-for-bit; anything else is a determinism bug.
    ExperimentSpec spec = tiny_experiment({"baseline", "baseline"});
    CompareResult res = run_compare(spec, 3);
    REQUIRE(res.rows.size() == 2);
    CHECK(res.rows[0].speedup == 1.0);
    CHECK(res.rows[1].speedup == 1.0);
}

TEST_CASE("rand rows carry the swept fraction") {
    ExperimentSpec spec = tiny_experiment({"baseline", "rand"});
    CompareResult res = run_compare(spec, 4);
    REQUIRE(res.rows.size() == 2);
    CHECK_FALSE(res.rows[0].rand_fraction.has_value());
    REQUIRE(res.rows[1].rand_fraction.has_value());
    CHECK(*res.rows[1].rand_fraction >= 0.1);
    CHECK(*res.rows[1].rand_fraction <= 0.9);
}

TEST_CASE("spec validation failures") {
    ExperimentSpec no_workloads;
    no_workloads.policies = {"baseline"};
    CHECK_THROWS_AS(no_workloads.validate(), ConfigError);

    ExperimentSpec bad_policy = tiny_experiment({"baseline", "nonesuch"});
    CHECK_THROWS_AS(bad_policy.validate(), ConfigError);

    ExperimentSpec missing_baseline = tiny_experiment({"wip"});
    CHECK_THROWS_AS(missing_baseline.validate(), ConfigError);

    ExperimentSpec dup = tiny_experiment({"baseline"});
    dup.workloads.push_back(dup.workloads[0]);
    CHECK_THROWS_AS(dup.validate(), ConfigError);
}

TEST_CASE("experiment json parsing") {
    ordered_json j = {
        {"policies", {"baseline", "wip"}},
        {"workloads",
         {{{"name", "w0"},
           {"synthetic",
            {{"num_warps", 2},
             {"instructions_per_warp", 8},
             {"warp_profiles",
              {{{"fraction_of_warps", 1.0},
                {"target_hit_ratio", 0.5},
                {"working_set_lines", 8}}}}}}}}}};
    ExperimentSpec spec = ExperimentSpec::from_json(j);
    CHECK(spec.policies.size() == 2);
    CHECK(spec.workloads[0].name == "w0");
    REQUIRE(spec.workloads[0].synthetic.has_value());
    CHECK(spec.workloads[0].synthetic->num_warps == 2);

    ordered_json bad = j;
    bad["frobnicate"] = 1;
    CHECK_THROWS_AS(ExperimentSpec::from_json(bad), ConfigError);

    ordered_json both = j;
    both["workloads"][0]["trace"] = "x.trace";
    CHECK_THROWS_AS(ExperimentSpec::from_json(both), ConfigError);
}

TEST_CASE("csv output has one row per cell plus harmonic summary") {
    ExperimentSpec spec = tiny_experiment({"baseline"});
    CompareResult res = run_compare(spec, 1);
    std::string csv = compare_csv(res);
    CHECK(csv.find("workload,policy,ipc_proxy,speedup,rand_fraction\n") == 0);
    CHECK(csv.find("tiny,baseline,") != std::string::npos);
    CHECK(csv.find("HARMONIC,baseline,") != std::string::npos);
}
