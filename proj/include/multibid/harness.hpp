#pragma once

#include "multibid/model.hpp"
#include "multibid/policies.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace multibid {

struct EpisodeTraceEntry {
    std::int64_t t = 0;
    BidVector bids;
    double round_reward = 0.0;
    double round_cost = 0.0;
    double cum_reward = 0.0;
    double cum_spend = 0.0;
    /// NaN for policies without duals / without a ratio objective.
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double ratio = 0.0;
    /// The round whose cost would have crossed B; not counted.
    bool rejected = false;
};

struct EpisodeTrace {
    std::vector<EpisodeTraceEntry> entries;
    std::optional<std::int64_t> rejected_round;
};

/// Bitwise comparison (NaN fields compare equal to NaN).
bool identical(const EpisodeTrace& a, const EpisodeTrace& b);

struct RunSummary {
    std::string policy;
    double budget = 0.0;
    std::size_t m_effective = 0;
    std::string subset = "all";
    std::size_t replicate = 0;
    std::uint64_t seed = 0;
    double total_reward = 0.0;
    double total_spend = 0.0;
    std::int64_t stopping_time = 0;
    std::int64_t rounds_played = 0;
    double opt_lp = 0.0;
    double regret = 0.0;
    double wall_time_ms = 0.0;
    std::string status = "ok";
};

struct EpisodeOptions {
    /// Keep every k-th trace entry (plus the last one and any rejection).
    std::size_t downsample = 1;
    PolicyParams policy_params;
    /// Precomputed OPT_LP; computed from the instance when absent.
    std::optional<double> opt_lp;
};

struct EpisodeResult {
    RunSummary summary;
    EpisodeTrace trace;
};

/// Drives the env/policy loop until the ledger stops. Policy exceptions are
/// caught and reported through `summary.status`.
EpisodeResult run_episode(const Instance& instance, const BidGrid& grid, const std::string& policy,
                          std::uint64_t seed, const EpisodeOptions& options = {});

struct ExperimentConfig {
    std::filesystem::path instance_path;
    std::string grid = "hyperbolic:0.1";
    std::vector<std::string> policies;
    std::vector<double> budgets;
    /// Empty means "all platforms".
    std::vector<std::vector<std::size_t>> platform_subsets;
    std::optional<std::int64_t> horizon;
    std::size_t seeds = 1;
    std::uint64_t master_seed = 0;
    std::filesystem::path output_dir = "results";
    std::size_t downsample = 1;
    bool traces = false;
    std::size_t jobs = 1;
    PolicyParams policy_params;
};

/// Keys: instance_path, grid (spec string or array of bids), policies,
/// budgets, platform_subsets?, horizon?, seeds, master_seed, output_dir,
/// downsample?, traces?, jobs?, c_rad_scale?, c_rad?. Relative paths
/// resolve against `base_dir`. Throws ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// hash(master_seed, policy, budget, subset, replicate)
std::uint64_t derive_seed(std::uint64_t master_seed, const std::string& policy, double budget,
                          const std::string& subset, std::size_t replicate);

struct AggregateRow {
    std::string policy;
    double budget = 0.0;
    std::string subset;
    std::size_t m_effective = 0;
    std::size_t runs = 0;
    std::size_t errors = 0;
    double opt_lp = 0.0;
    double mean_reward = 0.0;
    double std_reward = 0.0;
    double mean_spend = 0.0;
    double std_spend = 0.0;
    double mean_stopping_time = 0.0;
    double std_stopping_time = 0.0;
    double mean_regret = 0.0;
    double std_regret = 0.0;
};

struct GridResult {
    std::vector<RunSummary> rows;
    std::vector<AggregateRow> aggregates;
};

/// Runs every (policy, budget, subset, replicate) cell, `jobs` at a time.
/// Row order is canonical (config order), independent of completion order.
GridResult run_grid_in_memory(const ExperimentConfig& config);

/// run_grid_in_memory plus summary.csv, aggregate.csv, metadata.json and,
/// when requested, traces/*.csv under config.output_dir.
GridResult run_grid(const ExperimentConfig& config);

std::vector<AggregateRow> aggregate(const std::vector<RunSummary>& rows);

std::string format_double(double x);
std::string summary_csv(const std::vector<RunSummary>& rows);
std::string aggregate_csv(const std::vector<AggregateRow>& rows);
/// t, cum_reward, cum_spend, lambda1, lambda2
std::string trace_csv(const EpisodeTrace& trace);

} // namespace multibid
