#include "multibid/policies.hpp"

#include "multibid/errors.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <cmath>

namespace multibid {

namespace {

ConfidenceParams confidence_for(const Instance& instance, const BidGrid& grid, const PolicyParams& params)
{
    if (params.c_rad) {
        if (!(*params.c_rad > 0.0))
            throw ConfigError("c_rad must be positive");
        return {*params.c_rad};
    }
    return {c_rad_default(instance.m(), grid.size(), static_cast<std::uint64_t>(instance.horizon),
                          params.c_rad_scale)};
}

// The 0-bid is never estimated: its reward and cost are exactly 0.
void zero_opt_out_column(Matrix& mat)
{
    for (std::size_t i = 0; i < mat.rows(); ++i)
        mat(i, 0) = 0.0;
}

} // namespace

double DualState::default_eps(double budget)
{
    if (!(budget > 0.0))
        return 0.999;
    return std::min(0.999, std::sqrt(std::log(2.0) / budget));
}

double DualState::lambda(std::size_t k) const { return std::exp(log_lambda_[k]); }

std::array<double, 2> DualState::normalized() const
{
    const double top = std::max(log_lambda_[0], log_lambda_[1]);
    const double a = std::exp(log_lambda_[0] - top);
    const double b = std::exp(log_lambda_[1] - top);
    return {a / (a + b), b / (a + b)};
}

void DualState::update(const std::array<double, 2>& payoff)
{
    const double step = std::log1p(eps_);
    for (std::size_t k = 0; k < 2; ++k)
        log_lambda_[k] += step * payoff[k];
}

BidVector BootstrapPhase::bids(std::int64_t t) const
{
    return BidVector{std::vector<std::size_t>(m_, static_cast<std::size_t>(t))};
}

void BootstrapPhase::seed(StatsTable& stats) const
{
    for (std::size_t i = 0; i < m_; ++i)
        stats.at(i, 0).record(0.0, 0.0);
}

PrimalDualPolicy::PrimalDualPolicy(const Instance& instance, const BidGrid& grid, const PolicyParams& params)
    : m_(instance.m()),
      time_price_(instance.budget / static_cast<double>(instance.horizon)),
      bootstrap_(instance.m(), grid.size()),
      stats_(instance.m(), grid.size()),
      confidence_(confidence_for(instance, grid, params)),
      duals_(DualState::default_eps(instance.budget))
{
    if (instance.horizon < static_cast<std::int64_t>(grid.size()))
        throw ConfigError("primal_dual: horizon shorter than the bid grid");
    bootstrap_.seed(stats_);
}

RatioProblem PrimalDualPolicy::ratio_problem() const
{
    RatioProblem prob;
    prob.U = stats_.ucb_rewards(confidence_);
    prob.L = stats_.lcb_costs(confidence_);
    zero_opt_out_column(prob.U);
    zero_opt_out_column(prob.L);
    // Only lambda(1)/lambda(2) affects the argmax, and the normalized pair
    // stays finite where lambda itself would overflow.
    const auto y = duals_.normalized();
    prob.lambda1 = std::max(y[0], std::numeric_limits<double>::min());
    prob.lambda2 = std::max(y[1], std::numeric_limits<double>::min());
    prob.time_price = time_price_ > 0.0 ? time_price_ : std::numeric_limits<double>::min();
    return prob;
}

BidVector PrimalDualPolicy::next_bids(const RoundContext& ctx)
{
    if (bootstrap_.active(ctx.t)) {
        last_ratio_.reset();
        return bootstrap_.bids(ctx.t);
    }
    auto sel = select_arm(ratio_problem());
    last_ratio_ = sel.ratio_value;
    return std::move(sel.indices);
}

void PrimalDualPolicy::absorb(const BidVector& bids, std::span<const PlatformFeedback> feedback,
                              const RoundContext& ctx)
{
    stats_.absorb(bids, feedback);
    if (bootstrap_.active(ctx.t))
        return;

    double lcb_total = 0.0;
    for (std::size_t i = 0; i < m_; ++i)
        if (bids[i] != 0)
            lcb_total += lcb_cost(stats_.at(i, bids[i]), confidence_);
    // Both payoffs are divided by m: the budget payoff then lies in [0,1]
    // and the two coordinates keep the B/T balance of the undivided update.
    const double md = static_cast<double>(m_);
    duals_.update({std::clamp(lcb_total / md, 0.0, 1.0), std::clamp(time_price_ / md, 0.0, 1.0)});
}

UcbGreedyPolicy::UcbGreedyPolicy(const Instance& instance, const BidGrid& grid, const PolicyParams& params)
    : m_(instance.m()),
      bootstrap_(instance.m(), grid.size()),
      stats_(instance.m(), grid.size()),
      confidence_(confidence_for(instance, grid, params))
{
    if (instance.horizon < static_cast<std::int64_t>(grid.size()))
        throw ConfigError("ucb: horizon shorter than the bid grid");
    bootstrap_.seed(stats_);
}

BidVector UcbGreedyPolicy::next_bids(const RoundContext& ctx)
{
    if (bootstrap_.active(ctx.t))
        return bootstrap_.bids(ctx.t);
    BidVector out{std::vector<std::size_t>(m_, 0)};
    for (std::size_t i = 0; i < m_; ++i) {
        double best = 0.0;
        for (std::size_t j = 1; j < stats_.bids(); ++j) {
            const double u = ucb_reward(stats_.at(i, j), confidence_);
            if (u > best) {
                best = u;
                out.indices[i] = j;
            }
        }
    }
    return out;
}

void UcbGreedyPolicy::absorb(const BidVector& bids, std::span<const PlatformFeedback> feedback,
                             const RoundContext&)
{
    stats_.absorb(bids, feedback);
}

LuekerPolicy::LuekerPolicy(const Instance& instance, const BidGrid& grid)
    : grid_(grid), m_(instance.m()), horizon_(instance.horizon), km_(instance.m(), grid.size())
{
}

double LuekerPolicy::estimated_cost(std::size_t platform, std::size_t bid_index) const
{
    double win = 0.0;
    double cost = 0.0;
    for (std::size_t k = 1; k <= bid_index; ++k) {
        const double w = std::max(win, 1.0 - km_.estimate(platform, k));
        cost += (w - win) * grid_[k];
        win = w;
    }
    return cost;
}

BidVector LuekerPolicy::next_bids(const RoundContext& ctx)
{
    BidVector out{std::vector<std::size_t>(m_, 0)};
    if (!(ctx.residual_budget > 0.0))
        return out;
    const double rounds_left = static_cast<double>(horizon_ - ctx.t + 1);
    const double allowance = ctx.residual_budget / (static_cast<double>(m_) * rounds_left);
    for (std::size_t i = 0; i < m_; ++i) {
        // estimated cost is nondecreasing in the bid, so scan up to the first violation
        double win = 0.0;
        double cost = 0.0;
        for (std::size_t k = 1; k < grid_.size(); ++k) {
            const double w = std::max(win, 1.0 - km_.estimate(i, k));
            cost += (w - win) * grid_[k];
            win = w;
            if (cost > allowance)
                break;
            out.indices[i] = k;
        }
    }
    return out;
}

void LuekerPolicy::absorb(const BidVector& bids, std::span<const PlatformFeedback> feedback,
                          const RoundContext&)
{
    for (std::size_t i = 0; i < m_; ++i)
        km_.update(i, bids[i], feedback[i].won);
}

namespace {

std::optional<std::size_t> fixed_index(const std::string& name, std::size_t n)
{
    const std::string prefix = "fixed:";
    if (name.rfind(prefix, 0) != 0)
        return std::nullopt;
    const std::string arg = name.substr(prefix.size());
    if (arg == "top")
        return n - 1;
    std::size_t idx = 0;
    auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), idx);
    if (ec != std::errc{} || ptr != arg.data() + arg.size())
        throw ConfigError("bad fixed-bid policy '" + name + "'");
    if (idx >= n)
        throw ConfigError("fixed-bid index " + arg + " outside a grid of size " + std::to_string(n));
    return idx;
}

} // namespace

void check_policy_name(const std::string& name, std::size_t n)
{
    if (name == "primal_dual" || name == "ucb" || name == "lueker")
        return;
    if (!fixed_index(name, n))
        throw ConfigError("unknown policy '" + name + "'");
}

std::unique_ptr<Policy> make_policy(const std::string& name, const Instance& instance, const BidGrid& grid,
                                    const PolicyParams& params)
{
    if (name == "primal_dual")
        return std::make_unique<PrimalDualPolicy>(instance, grid, params);
    if (name == "ucb")
        return std::make_unique<UcbGreedyPolicy>(instance, grid, params);
    if (name == "lueker")
        return std::make_unique<LuekerPolicy>(instance, grid);
    if (auto idx = fixed_index(name, grid.size()))
        return std::make_unique<FixedBidPolicy>(instance.m(), *idx);
    throw ConfigError("unknown policy '" + name + "'");
}

} // namespace multibid
