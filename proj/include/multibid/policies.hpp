#pragma once

#include "multibid/armselect.hpp"
#include "multibid/estimation.hpp"
#include "multibid/model.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>

namespace multibid {

/// What a policy may know about the round it is asked to bid in.
struct RoundContext {
    std::int64_t t = 1;
    double residual_budget = 0.0;
};

/// A sequential bidder for one episode: asked for a bid vector each round,
/// then shown the censored feedback of that round.
class Policy {
public:
    virtual ~Policy() = default;

    virtual std::string name() const = 0;
    virtual BidVector next_bids(const RoundContext& ctx) = 0;
    virtual void absorb(const BidVector& bids, std::span<const PlatformFeedback> feedback,
                        const RoundContext& ctx) = 0;

    /// Dual prices (lambda(1), lambda(2)) for policies that keep them.
    virtual std::optional<std::array<double, 2>> duals() const { return std::nullopt; }
    /// Objective value of the last selection, when the policy optimizes one.
    virtual std::optional<double> last_ratio() const { return std::nullopt; }
};

struct PolicyParams {
    /// Multiplier on ln(mnT) inside c_rad.
    double c_rad_scale = 1.0;
    /// Overrides the default radius constant entirely.
    std::optional<double> c_rad;
};

/// Multiplicative-weights prices over d = 2 resources (budget, time). Kept in
/// log space: lambda grows like (1+eps)^(sum of payoffs), which overflows a
/// double over long horizons.
class DualState {
public:
    explicit DualState(double hedge_eps) : eps_(hedge_eps) {}

    /// min(0.999, sqrt(ln d / B)).
    static double default_eps(double budget);

    double eps() const noexcept { return eps_; }
    double lambda(std::size_t k) const;
    double log_lambda(std::size_t k) const { return log_lambda_[k]; }
    /// y = lambda / ||lambda||_1
    std::array<double, 2> normalized() const;

    /// lambda(k) <- lambda(k) * (1+eps)^payoff(k). Payoffs must lie in [0,1].
    void update(const std::array<double, 2>& payoff);

private:
    double eps_;
    std::array<double, 2> log_lambda_{0.0, 0.0};
};

/// Initialization shared by the UCB-based policies: the 0-bid cells are
/// known exactly (reward 0, cost 0) and seeded with one pull; rounds
/// 1..n-1 bid grid index t on every platform so every cell has N >= 1.
class BootstrapPhase {
public:
    BootstrapPhase(std::size_t m, std::size_t n) : m_(m), n_(n) {}

    std::int64_t rounds() const noexcept { return static_cast<std::int64_t>(n_) - 1; }
    bool active(std::int64_t t) const noexcept { return t <= rounds(); }
    BidVector bids(std::int64_t t) const;
    void seed(StatsTable& stats) const;

private:
    std::size_t m_;
    std::size_t n_;
};

/// Primal-dual bandits-with-knapsacks bidder. Each round picks the bid
/// vector maximizing the ratio of summed reward UCBs to dual-weighted summed
/// cost LCBs plus the time price B/T, then moves the duals by the LCB cost
/// of the chosen arm.
class PrimalDualPolicy final : public Policy {
public:
    /// Throws ConfigError when the horizon is shorter than the grid.
    PrimalDualPolicy(const Instance& instance, const BidGrid& grid, const PolicyParams& params = {});

    std::string name() const override { return "primal_dual"; }
    BidVector next_bids(const RoundContext& ctx) override;
    void absorb(const BidVector& bids, std::span<const PlatformFeedback> feedback,
                const RoundContext& ctx) override;
    std::optional<std::array<double, 2>> duals() const override
    {
        return std::array<double, 2>{duals_.lambda(0), duals_.lambda(1)};
    }
    std::optional<double> last_ratio() const override { return last_ratio_; }

    const DualState& dual_state() const noexcept { return duals_; }
    const StatsTable& stats() const noexcept { return stats_; }
    const ConfidenceParams& confidence() const noexcept { return confidence_; }

    /// The subproblem solved at the current state.
    RatioProblem ratio_problem() const;

private:
    std::size_t m_;
    double time_price_;
    BootstrapPhase bootstrap_;
    StatsTable stats_;
    ConfidenceParams confidence_;
    DualState duals_;
    std::optional<double> last_ratio_;
};

/// Budget-blind baseline: per platform, the bid with the largest reward UCB.
class UcbGreedyPolicy final : public Policy {
public:
    UcbGreedyPolicy(const Instance& instance, const BidGrid& grid, const PolicyParams& params = {});

    std::string name() const override { return "ucb"; }
    BidVector next_bids(const RoundContext& ctx) override;
    void absorb(const BidVector& bids, std::span<const PlatformFeedback> feedback,
                const RoundContext& ctx) override;

    const StatsTable& stats() const noexcept { return stats_; }

private:
    std::size_t m_;
    BootstrapPhase bootstrap_;
    StatsTable stats_;
    ConfidenceParams confidence_;
};

/// LuekerLearn run independently on every platform with the residual budget
/// split evenly each round. Each copy bids the largest grid bid whose
/// estimated per-round spend fits within B_t / (m (T - t + 1)).
class LuekerPolicy final : public Policy {
public:
    LuekerPolicy(const Instance& instance, const BidGrid& grid);

    std::string name() const override { return "lueker"; }
    BidVector next_bids(const RoundContext& ctx) override;
    void absorb(const BidVector& bids, std::span<const PlatformFeedback> feedback,
                const RoundContext& ctx) override;

    /// Estimated E[p 1{p <= b_j}] on one platform. The win curve is
    /// 1 - p_hat made monotone by a running max, and its increments serve
    /// as the price density on the grid.
    double estimated_cost(std::size_t platform, std::size_t bid_index) const;

    const KaplanMeierTable& km() const noexcept { return km_; }

private:
    const BidGrid grid_;
    std::size_t m_;
    std::int64_t horizon_;
    KaplanMeierTable km_;
};

class FixedBidPolicy final : public Policy {
public:
    FixedBidPolicy(std::size_t m, std::size_t bid_index) : bids_{std::vector<std::size_t>(m, bid_index)} {}

    std::string name() const override { return "fixed:" + std::to_string(bids_.indices.empty() ? 0 : bids_[0]); }
    BidVector next_bids(const RoundContext&) override { return bids_; }
    void absorb(const BidVector&, std::span<const PlatformFeedback>, const RoundContext&) override {}

private:
    BidVector bids_;
};

/// "primal_dual", "ucb", "lueker", "fixed:<index>" or "fixed:top".
std::unique_ptr<Policy> make_policy(const std::string& name, const Instance& instance, const BidGrid& grid,
                                    const PolicyParams& params = {});

/// Throws ConfigError if `name` does not resolve for a grid of size n.
void check_policy_name(const std::string& name, std::size_t n);

} // namespace multibid
