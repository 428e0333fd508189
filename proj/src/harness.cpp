#include "multibid/harness.hpp"

#include "multibid/benchmark.hpp"
#include "multibid/env.hpp"
#include "multibid/errors.hpp"
#include "multibid/instance_io.hpp"
#include "multibid/rng.hpp"

#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

namespace multibid {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

std::string subset_label(const std::vector<std::size_t>& subset)
{
    if (subset.empty())
        return "all";
    std::string out;
    for (std::size_t k = 0; k < subset.size(); ++k) {
        if (k)
            out += '+';
        out += std::to_string(subset[k]);
    }
    return out;
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out)
        throw std::runtime_error("failed writing " + path.string());
}

} // namespace

bool identical(const EpisodeTrace& a, const EpisodeTrace& b)
{
    if (a.rejected_round != b.rejected_round || a.entries.size() != b.entries.size())
        return false;
    for (std::size_t k = 0; k < a.entries.size(); ++k) {
        const auto& x = a.entries[k];
        const auto& y = b.entries[k];
        if (x.t != y.t || !(x.bids == y.bids) || x.rejected != y.rejected || !same_bits(x.round_reward, y.round_reward) ||
            !same_bits(x.round_cost, y.round_cost) || !same_bits(x.cum_reward, y.cum_reward) ||
            !same_bits(x.cum_spend, y.cum_spend) || !same_bits(x.lambda1, y.lambda1) ||
            !same_bits(x.lambda2, y.lambda2) || !same_bits(x.ratio, y.ratio))
            return false;
    }
    return true;
}

EpisodeResult run_episode(const Instance& instance, const BidGrid& grid, const std::string& policy_name,
                          std::uint64_t seed, const EpisodeOptions& options)
{
    const auto started = std::chrono::steady_clock::now();
    EpisodeResult res;
    auto& s = res.summary;
    s.policy = policy_name;
    s.budget = instance.budget;
    s.m_effective = instance.m();
    s.seed = seed;
    s.opt_lp = options.opt_lp ? *options.opt_lp
                              : opt_lp(mean_tables(instance, grid), instance.budget,
                                       static_cast<double>(instance.horizon))
                                    .objective;

    const std::size_t stride = std::max<std::size_t>(1, options.downsample);
    const EpisodeRng rng(seed);
    BudgetLedger ledger;
    double reward = 0.0;

    try {
        auto policy = make_policy(policy_name, instance, grid, options.policy_params);
        for (std::int64_t t = 1; t <= instance.horizon; ++t) {
            const RoundContext ctx{t, ledger.residual(instance)};
            const BidVector bids = policy->next_bids(ctx);
            const auto outcome = play_round(instance, grid, bids, t, rng);
            const bool counted = ledger.charge(outcome, instance, t);

            EpisodeTraceEntry entry;
            entry.t = t;
            entry.bids = bids;
            entry.rejected = !counted;
            entry.ratio = policy->last_ratio().value_or(kNaN);
            if (counted) {
                reward += outcome.round_reward;
                entry.round_reward = outcome.round_reward;
                entry.round_cost = outcome.round_cost;
                policy->absorb(bids, outcome.feedback, ctx);
            }
            entry.cum_reward = reward;
            entry.cum_spend = ledger.spent();
            const auto duals = policy->duals();
            entry.lambda1 = duals ? (*duals)[0] : kNaN;
            entry.lambda2 = duals ? (*duals)[1] : kNaN;

            const bool last = ledger.stopped();
            if (!counted)
                res.trace.rejected_round = t;
            if (t % static_cast<std::int64_t>(stride) == 0 || last)
                res.trace.entries.push_back(std::move(entry));
            if (last)
                break;
        }
    } catch (const std::exception& e) {
        s.status = std::string("error: ") + e.what();
    }

    s.total_reward = reward;
    s.total_spend = ledger.spent();
    s.rounds_played = ledger.rounds_played();
    s.stopping_time = ledger.stopped_at().value_or(ledger.rounds_played() + 1);
    s.regret = regret(s.total_reward, s.opt_lp);
    s.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return res;
}

namespace {

template <class T>
T get_or(const json& doc, const char* key, T fallback)
{
    if (!doc.contains(key) || doc.at(key).is_null())
        return fallback;
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config: bad value for '") + key + "'");
    }
}

} // namespace

ExperimentConfig config_from_json(const json& doc, const fs::path& base_dir)
{
    static const std::set<std::string> known = {
        "instance_path", "grid",       "policies",  "budgets", "platform_subsets", "horizon",
        "seeds",         "master_seed", "output_dir", "downsample", "traces", "jobs",
        "c_rad_scale",   "c_rad"};
    if (!doc.is_object())
        throw ConfigError("config: expected a JSON object");
    for (const auto& [key, _] : doc.items())
        if (!known.count(key))
            throw ConfigError("config: unknown key '" + key + "'");

    ExperimentConfig cfg;
    const auto instance_path = get_or<std::string>(doc, "instance_path", "");
    if (instance_path.empty())
        throw ConfigError("config: 'instance_path' is required");
    cfg.instance_path = fs::path(instance_path).is_absolute() ? fs::path(instance_path) : base_dir / instance_path;

    if (doc.contains("grid")) {
        const auto& g = doc.at("grid");
        if (g.is_string()) {
            cfg.grid = g.get<std::string>();
        } else if (g.is_array()) {
            std::string spec = "list:";
            for (std::size_t k = 0; k < g.size(); ++k) {
                if (!g[k].is_number())
                    throw ConfigError("config: grid list must hold numbers");
                spec += (k ? "," : "") + format_double(g[k].get<double>());
            }
            cfg.grid = spec;
        } else {
            throw ConfigError("config: 'grid' must be a string or an array");
        }
    }

    cfg.policies = get_or<std::vector<std::string>>(doc, "policies", {});
    if (cfg.policies.empty())
        throw ConfigError("config: 'policies' must list at least one policy");
    cfg.budgets = get_or<std::vector<double>>(doc, "budgets", {});
    if (cfg.budgets.empty())
        throw ConfigError("config: 'budgets' must be nonempty");
    for (double b : cfg.budgets)
        if (!(b >= 0.0) || !std::isfinite(b))
            throw ConfigError("config: budgets must be nonnegative");
    cfg.platform_subsets = get_or<std::vector<std::vector<std::size_t>>>(doc, "platform_subsets", {});
    if (doc.contains("horizon") && !doc.at("horizon").is_null()) {
        const auto h = get_or<std::int64_t>(doc, "horizon", 0);
        if (h < 1)
            throw ConfigError("config: 'horizon' must be positive");
        cfg.horizon = h;
    }
    const auto seeds = get_or<std::int64_t>(doc, "seeds", 1);
    if (seeds < 1)
        throw ConfigError("config: 'seeds' must be >= 1");
    cfg.seeds = static_cast<std::size_t>(seeds);
    cfg.master_seed = get_or<std::uint64_t>(doc, "master_seed", 0);
    const auto out = get_or<std::string>(doc, "output_dir", "results");
    cfg.output_dir = fs::path(out).is_absolute() ? fs::path(out) : base_dir / out;
    const auto downsample = get_or<std::int64_t>(doc, "downsample", 1);
    if (downsample < 1)
        throw ConfigError("config: 'downsample' must be >= 1");
    cfg.downsample = static_cast<std::size_t>(downsample);
    cfg.traces = get_or<bool>(doc, "traces", false);
    const auto jobs = get_or<std::int64_t>(doc, "jobs", 1);
    if (jobs < 1)
        throw ConfigError("config: 'jobs' must be >= 1");
    cfg.jobs = static_cast<std::size_t>(jobs);
    cfg.policy_params.c_rad_scale = get_or<double>(doc, "c_rad_scale", 1.0);
    if (!(cfg.policy_params.c_rad_scale > 0.0))
        throw ConfigError("config: 'c_rad_scale' must be positive");
    if (doc.contains("c_rad") && !doc.at("c_rad").is_null())
        cfg.policy_params.c_rad = get_or<double>(doc, "c_rad", 1.0);
    return cfg;
}

ExperimentConfig load_config(const fs::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    return config_from_json(doc, path.parent_path());
}

std::uint64_t derive_seed(std::uint64_t master_seed, const std::string& policy, double budget,
                          const std::string& subset, std::size_t replicate)
{
    std::uint64_t h = splitmix_finalize(master_seed);
    h = hash_combine(h, hash_string(policy));
    h = hash_combine(h, std::bit_cast<std::uint64_t>(budget));
    h = hash_combine(h, hash_string(subset));
    h = hash_combine(h, replicate);
    return h;
}

namespace {

struct Cell {
    std::size_t policy;
    std::size_t budget;
    std::size_t subset;
    std::size_t replicate;
};

struct Scenario {
    Instance instance;
    double opt = 0.0;
    std::string label;
};

std::string cell_file_name(const RunSummary& s)
{
    std::string name = s.policy + "_B" + format_double(s.budget) + "_" + s.subset + "_r" + std::to_string(s.replicate);
    for (char& c : name)
        if (c == ':' || c == '/' || c == ' ')
            c = '-';
    return name + ".csv";
}

GridResult run_cells(const ExperimentConfig& config, const fs::path* trace_dir)
{
    Instance base = load_instance(config.instance_path);
    if (config.horizon)
        base.horizon = *config.horizon;
    const BidGrid grid = parse_grid_spec(config.grid, *base.p0);
    for (const auto& p : config.policies)
        check_policy_name(p, grid.size());

    std::vector<std::vector<std::size_t>> subsets = config.platform_subsets;
    if (subsets.empty())
        subsets.push_back({});

    // one instance and one OPT_LP per (budget, subset)
    std::vector<Scenario> scenarios;
    for (double budget : config.budgets) {
        for (const auto& subset : subsets) {
            Scenario sc;
            sc.instance = subset.empty() ? base : subset_instance(base, subset);
            sc.instance.budget = budget;
            sc.instance = validate_instance(std::move(sc.instance));
            sc.opt = opt_lp(mean_tables(sc.instance, grid), budget, static_cast<double>(sc.instance.horizon)).objective;
            sc.label = subset_label(subset);
            scenarios.push_back(std::move(sc));
        }
    }

    std::vector<Cell> cells;
    for (std::size_t p = 0; p < config.policies.size(); ++p)
        for (std::size_t b = 0; b < config.budgets.size(); ++b)
            for (std::size_t s = 0; s < subsets.size(); ++s)
                for (std::size_t r = 0; r < config.seeds; ++r)
                    cells.push_back({p, b, s, r});

    GridResult result;
    result.rows.resize(cells.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::string> failures(cells.size());

    auto worker = [&] {
        for (std::size_t k = next.fetch_add(1); k < cells.size(); k = next.fetch_add(1)) {
            const auto& c = cells[k];
            const auto& sc = scenarios[c.budget * subsets.size() + c.subset];
            const auto& policy = config.policies[c.policy];
            const auto seed = derive_seed(config.master_seed, policy, config.budgets[c.budget], sc.label, c.replicate);
            EpisodeOptions opts;
            opts.downsample = config.downsample;
            opts.policy_params = config.policy_params;
            opts.opt_lp = sc.opt;
            auto res = run_episode(sc.instance, grid, policy, seed, opts);
            res.summary.subset = sc.label;
            res.summary.replicate = c.replicate;
            if (trace_dir) {
                try {
                    write_text(*trace_dir / cell_file_name(res.summary), trace_csv(res.trace));
                } catch (const std::exception& e) {
                    failures[k] = e.what();
                }
            }
            result.rows[k] = std::move(res.summary);
        }
    };

    const std::size_t jobs = std::max<std::size_t>(1, std::min(config.jobs, cells.size()));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t j = 0; j < jobs; ++j)
            pool.emplace_back(worker);
    }
    for (const auto& f : failures)
        if (!f.empty())
            throw std::runtime_error(f);

    result.aggregates = aggregate(result.rows);
    return result;
}

} // namespace

GridResult run_grid_in_memory(const ExperimentConfig& config) { return run_cells(config, nullptr); }

GridResult run_grid(const ExperimentConfig& config)
{
    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec || !fs::is_directory(config.output_dir))
        throw std::runtime_error("cannot create output directory " + config.output_dir.string());
    const fs::path trace_dir = config.output_dir / "traces";
    if (config.traces) {
        fs::create_directories(trace_dir, ec);
        if (ec)
            throw std::runtime_error("cannot create " + trace_dir.string());
    }

    const auto wall_start = std::chrono::system_clock::now();
    auto result = run_cells(config, config.traces ? &trace_dir : nullptr);
    const auto wall_end = std::chrono::system_clock::now();

    write_text(config.output_dir / "summary.csv", summary_csv(result.rows));
    write_text(config.output_dir / "aggregate.csv", aggregate_csv(result.aggregates));

    json timings = json::array();
    for (const auto& r : result.rows)
        timings.push_back({{"policy", r.policy},
                           {"budget", r.budget},
                           {"subset", r.subset},
                           {"replicate", r.replicate},
                           {"wall_time_ms", r.wall_time_ms}});
    auto stamp = [](std::chrono::system_clock::time_point tp) {
        const std::time_t tt = std::chrono::system_clock::to_time_t(tp);
        std::tm tm{};
        gmtime_r(&tt, &tm);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        return std::string(buf);
    };
    const json meta = {{"started", stamp(wall_start)},
                       {"finished", stamp(wall_end)},
                       {"instance_path", config.instance_path.string()},
                       {"grid", config.grid},
                       {"jobs", config.jobs},
                       {"runs", timings}};
    write_text(config.output_dir / "metadata.json", meta.dump(2) + "\n");
    return result;
}

std::vector<AggregateRow> aggregate(const std::vector<RunSummary>& rows)
{
    std::vector<AggregateRow> out;
    std::vector<std::vector<const RunSummary*>> groups;
    for (const auto& r : rows) {
        auto it = std::find_if(out.begin(), out.end(), [&](const AggregateRow& a) {
            return a.policy == r.policy && same_bits(a.budget, r.budget) && a.subset == r.subset;
        });
        if (it == out.end()) {
            AggregateRow a;
            a.policy = r.policy;
            a.budget = r.budget;
            a.subset = r.subset;
            a.m_effective = r.m_effective;
            a.opt_lp = r.opt_lp;
            out.push_back(a);
            groups.emplace_back();
            it = std::prev(out.end());
        }
        groups[static_cast<std::size_t>(it - out.begin())].push_back(&r);
    }

    auto stats = [](const std::vector<const RunSummary*>& g, auto field) {
        double sum = 0.0;
        for (const auto* r : g)
            sum += field(*r);
        const double mu = sum / static_cast<double>(g.size());
        double ss = 0.0;
        for (const auto* r : g)
            ss += (field(*r) - mu) * (field(*r) - mu);
        const double sd = g.size() > 1 ? std::sqrt(ss / static_cast<double>(g.size() - 1)) : 0.0;
        return std::pair{mu, sd};
    };

    for (std::size_t k = 0; k < out.size(); ++k) {
        auto& a = out[k];
        const auto& g = groups[k];
        a.runs = g.size();
        for (const auto* r : g)
            if (r->status != "ok")
                ++a.errors;
        std::tie(a.mean_reward, a.std_reward) = stats(g, [](const RunSummary& r) { return r.total_reward; });
        std::tie(a.mean_spend, a.std_spend) = stats(g, [](const RunSummary& r) { return r.total_spend; });
        std::tie(a.mean_stopping_time, a.std_stopping_time) =
            stats(g, [](const RunSummary& r) { return static_cast<double>(r.stopping_time); });
        std::tie(a.mean_regret, a.std_regret) = stats(g, [](const RunSummary& r) { return r.regret; });
    }
    return out;
}

std::string format_double(double x)
{
    if (std::isnan(x))
        return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

std::string summary_csv(const std::vector<RunSummary>& rows)
{
    std::ostringstream os;
    os << "#schema=v1 floats=%.9g wall times in metadata.json\n";
    os << "policy,budget,subset,m,replicate,seed,total_reward,total_spend,stopping_time,rounds_played,opt_lp,regret,status\n";
    for (const auto& r : rows) {
        std::string status = r.status;
        for (char& c : status)
            if (c == ',' || c == '\n')
                c = ';';
        os << r.policy << ',' << format_double(r.budget) << ',' << r.subset << ',' << r.m_effective << ','
           << r.replicate << ',' << r.seed << ',' << format_double(r.total_reward) << ','
           << format_double(r.total_spend) << ',' << r.stopping_time << ',' << r.rounds_played << ','
           << format_double(r.opt_lp) << ',' << format_double(r.regret) << ',' << status << '\n';
    }
    return os.str();
}

std::string aggregate_csv(const std::vector<AggregateRow>& rows)
{
    std::ostringstream os;
    os << "#schema=v1 floats=%.9g std is the sample standard deviation over seeds\n";
    os << "policy,budget,subset,m,runs,errors,opt_lp,mean_reward,std_reward,mean_spend,std_spend,"
          "mean_stopping_time,std_stopping_time,mean_regret,std_regret\n";
    for (const auto& a : rows) {
        os << a.policy << ',' << format_double(a.budget) << ',' << a.subset << ',' << a.m_effective << ','
           << a.runs << ',' << a.errors << ',' << format_double(a.opt_lp) << ',' << format_double(a.mean_reward)
           << ',' << format_double(a.std_reward) << ',' << format_double(a.mean_spend) << ','
           << format_double(a.std_spend) << ',' << format_double(a.mean_stopping_time) << ','
           << format_double(a.std_stopping_time) << ',' << format_double(a.mean_regret) << ','
           << format_double(a.std_regret) << '\n';
    }
    return os.str();
}

std::string trace_csv(const EpisodeTrace& trace)
{
    std::ostringstream os;
    os << "#schema=v1 floats=%.9g\n";
    os << "t,cum_reward,cum_spend,lambda1,lambda2\n";
    for (const auto& e : trace.entries)
        os << e.t << ',' << format_double(e.cum_reward) << ',' << format_double(e.cum_spend) << ','
           << format_double(e.lambda1) << ',' << format_double(e.lambda2) << '\n';
    return os.str();
}

} // namespace multibid
