#include "multibid/cli.hpp"

#include "multibid/benchmark.hpp"
#include "multibid/errors.hpp"
#include "multibid/harness.hpp"
#include "multibid/instance_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <optional>

namespace multibid {

namespace {

using nlohmann::json;

int cmd_run(const std::string& config_path, const std::string& out_dir, std::optional<std::size_t> jobs,
            std::ostream& out)
{
    auto cfg = load_config(config_path);
    if (!out_dir.empty())
        cfg.output_dir = out_dir;
    if (jobs)
        cfg.jobs = *jobs;
    const auto result = run_grid(cfg);
    out << "wrote " << result.rows.size() << " runs to " << cfg.output_dir.string() << '\n';
    return 0;
}

int cmd_opt(const std::string& instance_path, const std::string& grid_spec, std::optional<double> budget,
            std::optional<std::int64_t> horizon, std::ostream& out)
{
    Instance inst = load_instance(instance_path);
    if (budget)
        inst.budget = *budget;
    if (horizon)
        inst.horizon = *horizon;
    inst = validate_instance(std::move(inst));
    const BidGrid grid = parse_grid_spec(grid_spec, *inst.p0);
    const auto sol = opt_lp(mean_tables(inst, grid), inst.budget, static_cast<double>(inst.horizon));
    out << to_json(sol).dump() << '\n';
    return 0;
}

int cmd_validate(const std::string& instance_path, std::ostream& out)
{
    const Instance inst = load_instance(instance_path);
    json report = {{"m", inst.m()}, {"p0", *inst.p0}, {"v0", *inst.v0}, {"valid", true}};
    if (budget_is_vacuous(inst))
        report["warning"] = "budget >= m*T: the budget constraint can never bind";
    out << report.dump() << '\n';
    return 0;
}

void write_json(const std::string& path, const json& doc)
{
    std::ofstream f(path);
    if (!f)
        throw std::runtime_error("cannot write " + path);
    f << doc.dump(2) << '\n';
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Multi-platform budgeted bidding laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::optional<std::size_t> jobs;
    auto* run = app.add_subcommand("run", "Run an experiment grid from a JSON config");
    run->add_option("--config", config_path, "Experiment config JSON")->required();
    run->add_option("--out", out_dir, "Override the output directory");
    run->add_option("--jobs", jobs, "Episodes to run concurrently");

    std::string instance_path;
    std::string grid_spec;
    std::optional<double> budget;
    std::optional<std::int64_t> horizon;
    auto* opt = app.add_subcommand("opt", "Print the LP benchmark OPT_LP as JSON");
    opt->add_option("--instance", instance_path, "Instance JSON")->required();
    opt->add_option("--grid", grid_spec, "uniform:<eps> | hyperbolic:<eps> | list:<b1>,<b2>,...")->required();
    opt->add_option("--budget", budget, "Override the instance budget");
    opt->add_option("--horizon", horizon, "Override the instance horizon");

    auto* genlb = app.add_subcommand("gen-lb", "Generate lower-bound instances");
    genlb->require_subcommand(1);
    std::size_t lb_m = 1;
    double lb_budget = 0.0;
    std::uint64_t lb_seed = 0;
    std::string lb_out;
    auto* discrete = genlb->add_subcommand("discrete", "Hard instance with one bid per platform");
    discrete->add_option("--m", lb_m, "Platform count")->required();
    discrete->add_option("--budget", lb_budget, "Budget B (horizon is 2B)")->required();
    discrete->add_option("--seed", lb_seed, "Seed choosing the best platform");
    discrete->add_option("--out", lb_out, "Instance JSON to write")->required();

    double xstar = 0.5;
    double bump_eps = 0.1;
    std::size_t grid_points = 101;
    auto* continuous = genlb->add_subcommand("continuous", "Tabulate the Lipschitz bump mean-reward function");
    continuous->add_option("--xstar", xstar, "Bump centre")->required();
    continuous->add_option("--eps", bump_eps, "Bump half-width and height")->required();
    continuous->add_option("--m", lb_m, "Platform count")->required();
    continuous->add_option("--points", grid_points, "Tabulation points on [0,1]");
    continuous->add_option("--out", lb_out, "JSON file to write")->required();

    auto* validate = app.add_subcommand("validate", "Validate an instance file");
    validate->add_option("--instance", instance_path, "Instance JSON")->required();

    std::vector<std::string> argv(args.begin() + (args.empty() ? 0 : 1), args.end());
    std::reverse(argv.begin(), argv.end());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (run->parsed())
            return cmd_run(config_path, out_dir, jobs, out);
        if (opt->parsed())
            return cmd_opt(instance_path, grid_spec, budget, horizon, out);
        if (validate->parsed())
            return cmd_validate(instance_path, out);
        if (discrete->parsed()) {
            const auto lb = gen_lower_bound_discrete(lb_m, lb_budget, lb_seed);
            save_instance(lb.instance, lb_out);
            out << json{{"best_platform", lb.best_platform}, {"eps", lb.eps}, {"grid", "list:0,1"},
                        {"opt", (1.0 + lb.eps) * lb_budget}}
                       .dump()
                << '\n';
            return 0;
        }
        if (continuous->parsed()) {
            const auto bump = gen_lower_bound_continuous(xstar, bump_eps, lb_m);
            if (grid_points < 2)
                throw ConfigError("--points must be at least 2");
            json table = json::array();
            for (std::size_t k = 0; k < grid_points; ++k) {
                const double x = static_cast<double>(k) / static_cast<double>(grid_points - 1);
                table.push_back({{"x", x}, {"mu", bump.mean_reward(x)}});
            }
            write_json(lb_out, {{"type", "lipschitz_bump"},
                                {"x_star", xstar},
                                {"eps", bump_eps},
                                {"m", lb_m},
                                {"mean_reward", std::move(table)}});
            return 0;
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

} // namespace multibid
