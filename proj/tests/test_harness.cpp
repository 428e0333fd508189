#include "multibid/errors.hpp"
#include "multibid/harness.hpp"
#include "multibid/instance_io.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace multibid;
namespace fs = std::filesystem;

namespace {

Instance point_instance(double price, double value, double budget, std::int64_t horizon)
{
    Instance inst;
    inst.platforms = {{PointMass{price}, PointMass{value}}};
    inst.budget = budget;
    inst.horizon = horizon;
    return validate_instance(std::move(inst));
}

Instance small_random()
{
    Instance inst;
    inst.platforms = {{Uniform{0.2, 0.9}, Beta{3, 2}}, {Discrete{{0.25, 0.5, 0.8}, {0.4, 0.4, 0.2}}, PointMass{0.6}},
                      {Uniform{0.3, 1.0}, Uniform{0.2, 0.9}}};
    inst.budget = 50;
    inst.horizon = 400;
    return validate_instance(std::move(inst));
}

fs::path scratch(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / ("multibid_harness_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

ExperimentConfig small_config(const fs::path& dir)
{
    save_instance(small_random(), dir / "inst.json");
    ExperimentConfig cfg;
    cfg.instance_path = dir / "inst.json";
    cfg.grid = "uniform:0.2";
    cfg.policies = {"primal_dual", "ucb", "lueker"};
    cfg.budgets = {10, 25, 50, 100};
    cfg.seeds = 5;
    cfg.master_seed = 99;
    cfg.output_dir = dir / "out";
    return cfg;
}

} // namespace

TEST_CASE("opt-out policy never spends")
{
    const auto inst = point_instance(0.3, 0.5, 10, 200);
    const auto res = run_episode(inst, BidGrid({0.0, 0.5}), "fixed:0", 1);
    CHECK(res.summary.total_reward == 0.0);
    CHECK(res.summary.total_spend == 0.0);
    CHECK(res.summary.stopping_time == 201);
    CHECK(res.summary.rounds_played == 200);
    CHECK(res.summary.status == "ok");
}

TEST_CASE("top bid exhausts the budget at the rejection round")
{
    const auto inst = point_instance(0.5, 0.8, 50, 1000);
    const auto res = run_episode(inst, BidGrid({0.0, 0.5, 1.0}), "fixed:top", 1);
    CHECK(res.summary.total_reward == doctest::Approx(80));
    CHECK(res.summary.total_spend == doctest::Approx(50));
    CHECK(res.summary.stopping_time == 101);
    CHECK(res.summary.rounds_played == 100);
    CHECK(res.trace.rejected_round == 101);
    REQUIRE_FALSE(res.trace.entries.empty());
    CHECK(res.trace.entries.back().rejected);
    CHECK(res.summary.regret == res.summary.opt_lp - res.summary.total_reward);
}

TEST_CASE("episodes are deterministic and respect the budget")
{
    const auto inst = small_random();
    const auto grid = uniform_grid(*inst.p0, 0.2);
    for (const std::string policy : {"primal_dual", "ucb", "lueker"}) {
        const auto a = run_episode(inst, grid, policy, 12345);
        const auto b = run_episode(inst, grid, policy, 12345);
        CHECK(identical(a.trace, b.trace));
        CHECK(a.summary.total_reward == b.summary.total_reward);
        CHECK(a.summary.total_spend <= inst.budget + 1e-9);
        CHECK(a.summary.stopping_time <= inst.horizon + 1);
        CHECK(a.summary.regret == a.summary.opt_lp - a.summary.total_reward);
    }
    const auto pd = run_episode(inst, grid, "primal_dual", 1);
    double prev1 = 0.0;
    double prev2 = 0.0;
    for (const auto& e : pd.trace.entries) {
        if (std::isnan(e.lambda1))
            continue;
        REQUIRE(e.lambda1 >= prev1);
        REQUIRE(e.lambda2 >= prev2);
        prev1 = e.lambda1;
        prev2 = e.lambda2;
    }
    CHECK(prev1 >= 1.0);
}

TEST_CASE("trace downsampling keeps the last entry")
{
    const auto inst = small_random();
    const auto grid = uniform_grid(*inst.p0, 0.2);
    EpisodeOptions opts;
    opts.downsample = 50;
    const auto full = run_episode(inst, grid, "ucb", 3);
    const auto thin = run_episode(inst, grid, "ucb", 3, opts);
    CHECK(thin.trace.entries.size() < full.trace.entries.size() / 10);
    CHECK(thin.trace.entries.back().t == full.trace.entries.back().t);
    CHECK(thin.summary.total_reward == full.summary.total_reward);
    const auto csv = trace_csv(thin.trace);
    CHECK(csv.rfind("#schema=v1", 0) == 0);
}

TEST_CASE("grid cardinality, aggregates and canonical order")
{
    const auto dir = scratch("grid");
    auto cfg = small_config(dir);
    const auto serial = run_grid(cfg);
    REQUIRE(serial.rows.size() == 60);
    REQUIRE(serial.aggregates.size() == 12);
    for (const auto& r : serial.rows) {
        CHECK(r.regret == r.opt_lp - r.total_reward);
        CHECK(r.total_spend <= r.budget + 1e-9);
        CHECK(r.status == "ok");
    }
    for (std::size_t g = 0; g < 12; ++g) {
        double sum = 0.0;
        for (std::size_t r = 0; r < 5; ++r) {
            CHECK(serial.rows[g * 5 + r].policy == serial.aggregates[g].policy);
            sum += serial.rows[g * 5 + r].total_reward;
        }
        CHECK(serial.aggregates[g].mean_reward == doctest::Approx(sum / 5));
        CHECK(serial.aggregates[g].runs == 5);
    }
    CHECK(serial.rows[0].policy == "primal_dual");
    CHECK(serial.rows[59].policy == "lueker");
    CHECK(serial.rows[59].replicate == 4);

    const auto first = slurp(cfg.output_dir / "summary.csv");
    CHECK(first.rfind("#schema=v1", 0) == 0);
    CHECK(fs::exists(cfg.output_dir / "aggregate.csv"));
    CHECK(fs::exists(cfg.output_dir / "metadata.json"));

    cfg.jobs = 4;
    run_grid(cfg);
    CHECK(slurp(cfg.output_dir / "summary.csv") == first);
    fs::remove_all(dir);
}

TEST_CASE("platform subsets and traces")
{
    const auto dir = scratch("subsets");
    auto cfg = small_config(dir);
    cfg.policies = {"ucb"};
    cfg.budgets = {30};
    cfg.seeds = 1;
    cfg.platform_subsets = {{0}, {0, 2}};
    cfg.traces = true;
    const auto res = run_grid(cfg);
    REQUIRE(res.rows.size() == 2);
    CHECK(res.rows[0].m_effective == 1);
    CHECK(res.rows[1].m_effective == 2);
    CHECK(res.rows[0].subset != res.rows[1].subset);
    CHECK(std::distance(fs::directory_iterator(cfg.output_dir / "traces"), fs::directory_iterator{}) == 2);
    fs::remove_all(dir);
}

TEST_CASE("seeds differ across cells")
{
    CHECK(derive_seed(1, "ucb", 10, "all", 0) != derive_seed(1, "ucb", 10, "all", 1));
    CHECK(derive_seed(1, "ucb", 10, "all", 0) != derive_seed(1, "lueker", 10, "all", 0));
    CHECK(derive_seed(1, "ucb", 10, "all", 0) != derive_seed(2, "ucb", 10, "all", 0));
    CHECK(derive_seed(1, "ucb", 10, "all", 0) == derive_seed(1, "ucb", 10, "all", 0));
}

TEST_CASE("config parsing")
{
    using nlohmann::json;
    const json ok = {{"instance_path", "inst.json"}, {"grid", "uniform:0.1"}, {"policies", {"ucb"}},
                     {"budgets", {10, 20}},          {"seeds", 3},           {"master_seed", 5},
                     {"output_dir", "out"},          {"c_rad_scale", 0.5}};
    const auto cfg = config_from_json(ok, "/base");
    CHECK(cfg.instance_path == fs::path("/base/inst.json"));
    CHECK(cfg.seeds == 3);
    CHECK(cfg.policy_params.c_rad_scale == 0.5);

    auto bad = ok;
    bad["sedes"] = 1;
    CHECK_THROWS_AS(config_from_json(bad), ConfigError);
    bad = ok;
    bad["seeds"] = 0;
    CHECK_THROWS_AS(config_from_json(bad), ConfigError);
    bad = ok;
    bad["budgets"] = json::array();
    CHECK_THROWS_AS(config_from_json(bad), ConfigError);
    bad = ok;
    bad["c_rad_scale"] = 0;
    CHECK_THROWS_AS(config_from_json(bad), ConfigError);
    auto listed = ok;
    listed["grid"] = {0.3, 0.6, 1.0};
    CHECK_NOTHROW(config_from_json(listed));
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("csv number format")
{
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0 / 3.0) == "0.333333333");
    CHECK(format_double(20001) == "20001");
}
