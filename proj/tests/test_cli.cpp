#include "multibid/cli.hpp"
#include "multibid/instance_io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace multibid;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "multibid");
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch()
{
    const auto dir = fs::temp_directory_path() / "multibid_cli";
    fs::create_directories(dir);
    return dir;
}

void write(const fs::path& p, const std::string& text)
{
    std::ofstream f(p);
    f << text;
}

} // namespace

TEST_CASE("opt prints the LP objective")
{
    const auto dir = scratch();
    // bid 0.5: rbar 0.5, cbar 0.25, so the budget binds after 40 rounds
    write(dir / "one.json", R"({"m": 1, "budget": 10, "horizon": 100, "platforms": [
        {"price": {"type": "discrete", "support": [0.5, 0.9], "probs": [0.5, 0.5]},
         "value": {"type": "point", "value": 1.0}}]})");
    auto r = cli({"opt", "--instance", (dir / "one.json").string(), "--grid", "list:0.5"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["objective"].get<double>() == doctest::Approx(20));
    CHECK(doc["S"].get<double>() == doctest::Approx(40));
    CHECK(doc["binding_constraint"] == "budget");

    r = cli({"opt", "--instance", (dir / "one.json").string(), "--grid", "list:0.5", "--budget", "1000",
             "--horizon", "50"});
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["objective"].get<double>() == doctest::Approx(25));
}

TEST_CASE("validate reports the offending platform")
{
    const auto dir = scratch();
    write(dir / "bad.json", R"({"m": 2, "budget": 1, "horizon": 10, "platforms": [
        {"price": {"type": "point", "value": 0.5}, "value": {"type": "point", "value": 0.5}},
        {"price": {"type": "discrete", "support": [0.2, 0.4], "probs": [0.5, 0.4]},
         "value": {"type": "point", "value": 0.5}}]})");
    const auto r = cli({"validate", "--instance", (dir / "bad.json").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("platform 1") != std::string::npos);

    write(dir / "good.json", R"({"m": 1, "budget": 100, "horizon": 10, "platforms": [
        {"price": {"type": "point", "value": 0.5}, "value": {"type": "point", "value": 0.5}}]})");
    const auto g = cli({"validate", "--instance", (dir / "good.json").string()});
    CHECK(g.code == 0);
    CHECK(g.out.find("warning") != std::string::npos);

    CHECK(cli({"validate", "--instance", (dir / "missing.json").string()}).code == 2);
}

TEST_CASE("usage errors exit with 2")
{
    CHECK(cli({}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"opt", "--instance", "x.json", "--grid", "uniform:0.1", "--bogus"}).code == 2);
    CHECK(cli({"opt", "--grid", "uniform:0.1"}).code == 2);
    CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("lower-bound generators")
{
    const auto dir = scratch();
    auto r = cli({"gen-lb", "discrete", "--m", "4", "--budget", "100", "--seed", "3", "--out",
                  (dir / "lb.json").string()});
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["opt"].get<double>() == doctest::Approx(120));
    const auto inst = load_instance(dir / "lb.json");
    CHECK(inst.m() == 4);
    CHECK(inst.horizon == 200);

    auto o = cli({"opt", "--instance", (dir / "lb.json").string(), "--grid", "list:1"});
    REQUIRE(o.code == 0);
    CHECK(nlohmann::json::parse(o.out)["objective"].get<double>() == doctest::Approx(120));

    CHECK(cli({"gen-lb", "discrete", "--m", "4", "--budget", "4", "--out", (dir / "x.json").string()}).code == 2);

    r = cli({"gen-lb", "continuous", "--xstar", "0.5", "--eps", "0.1", "--m", "2", "--points", "21", "--out",
             (dir / "bump.json").string()});
    REQUIRE(r.code == 0);
    std::ifstream f(dir / "bump.json");
    const auto bump = nlohmann::json::parse(f);
    CHECK(bump["mean_reward"].size() == 21);
    CHECK(bump["mean_reward"][10]["mu"].get<double>() == doctest::Approx(0.6));
}

TEST_CASE("run writes one row per cell")
{
    const auto dir = scratch();
    write(dir / "inst.json", R"({"m": 1, "budget": 20, "horizon": 200, "platforms": [
        {"price": {"type": "uniform", "lo": 0.2, "hi": 0.8}, "value": {"type": "point", "value": 0.7}}]})");
    write(dir / "cfg.json", R"({"instance_path": "inst.json", "grid": "uniform:0.2",
        "policies": ["ucb", "fixed:1"], "budgets": [20], "seeds": 1, "master_seed": 1, "output_dir": "out"})");
    const auto r = cli({"run", "--config", (dir / "cfg.json").string()});
    REQUIRE(r.code == 0);
    std::ifstream f(dir / "out" / "summary.csv");
    std::string line;
    int lines = 0;
    while (std::getline(f, line))
        ++lines;
    // schema line + header + 2 rows
    CHECK(lines == 4);

    write(dir / "broken.json", R"({"instance_path": "inst.json", "policies": ["nope"], "budgets": [1],
        "seeds": 1, "master_seed": 1, "output_dir": "out"})");
    CHECK(cli({"run", "--config", (dir / "broken.json").string()}).code == 2);
}
