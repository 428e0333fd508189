#include "multibid/estimation.hpp"

#include "multibid/errors.hpp"

#include <algorithm>
#include <cmath>

namespace multibid {

double c_rad_default(std::uint64_t m, std::uint64_t n, std::uint64_t T, double scale)
{
    if (m == 0 || n == 0 || T == 0)
        throw UsageError("c_rad_default needs m, n, T >= 1");
    const double mnT = static_cast<double>(m) * static_cast<double>(n) * static_cast<double>(T);
    return scale * (std::log(mnT) + 1.0);
}

namespace {

struct Radius {
    double mean;
    double width;
};

Radius radius(double sum, const ArmStats& stats, const ConfidenceParams& params)
{
    if (stats.pulls == 0)
        throw UsageError("confidence bound of an arm that was never pulled");
    const double n = static_cast<double>(stats.pulls);
    const double mu = sum / n;
    return {mu, std::sqrt(params.c_rad * std::max(mu, 0.0) / n) + params.c_rad / n};
}

} // namespace

double ucb_reward(const ArmStats& stats, const ConfidenceParams& params)
{
    const auto r = radius(stats.reward_sum, stats, params);
    return std::clamp(r.mean + r.width, 0.0, 1.0);
}

double lcb_cost(const ArmStats& stats, const ConfidenceParams& params)
{
    const auto r = radius(stats.cost_sum, stats, params);
    return std::clamp(r.mean - r.width, 0.0, 1.0);
}

void StatsTable::absorb(const BidVector& bids, std::span<const PlatformFeedback> feedback)
{
    for (std::size_t i = 0; i < bids.size(); ++i)
        at(i, bids[i]).record(feedback[i].value_observed, feedback[i].price_paid);
}

Matrix StatsTable::ucb_rewards(const ConfidenceParams& params) const
{
    Matrix out(platforms(), n_);
    for (std::size_t i = 0; i < out.rows(); ++i)
        for (std::size_t j = 0; j < n_; ++j)
            out(i, j) = ucb_reward(at(i, j), params);
    return out;
}

Matrix StatsTable::lcb_costs(const ConfidenceParams& params) const
{
    Matrix out(platforms(), n_);
    for (std::size_t i = 0; i < out.rows(); ++i)
        for (std::size_t j = 0; j < n_; ++j)
            out(i, j) = lcb_cost(at(i, j), params);
    return out;
}

void KaplanMeierTable::update(std::size_t platform, std::size_t bid_index, bool won)
{
    auto& c = cells_[platform * n_ + bid_index];
    ++c.trials;
    if (!won)
        ++c.losses;
    c.product *= 1.0 - static_cast<double>(c.losses) / static_cast<double>(c.trials);
}

double KaplanMeierTable::estimate(std::size_t platform, std::size_t bid_index) const
{
    const auto& c = cell(platform, bid_index);
    if (c.trials == 0)
        return 1.0;
    return std::clamp(1.0 - c.product, 0.0, 1.0);
}

} // namespace multibid
