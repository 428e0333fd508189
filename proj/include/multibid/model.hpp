#pragma once

#include "multibid/distribution.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace multibid {

struct PlatformSpec {
    Distribution price;
    Distribution value;

    bool operator==(const PlatformSpec&) const = default;
};

/// Ground truth of one simulation: m platforms, budget B, horizon T.
/// `p0` is the smallest critical bid across platforms and `v0` the largest
/// expected value-if-won; both are filled in by validate_instance when the
/// source leaves them out.
struct Instance {
    std::vector<PlatformSpec> platforms;
    double budget = 0.0;
    std::int64_t horizon = 1;
    std::optional<double> p0;
    std::optional<double> v0;

    std::size_t m() const noexcept { return platforms.size(); }

    bool operator==(const Instance&) const = default;
};

/// Checks every invariant and fills p0/v0. Idempotent. Throws ConfigError
/// naming the offending platform index.
Instance validate_instance(Instance raw);

/// True when B >= m*T, i.e. the budget can never bind.
bool budget_is_vacuous(const Instance& instance);

/// Restricts an instance to the given platform indices, keeping p0/v0.
Instance subset_instance(const Instance& instance, std::span<const std::size_t> platforms);

/// The per-platform bid set. Index 0 is always the 0-bid.
class BidGrid {
public:
    /// Validates: starts at 0, strictly increasing, within [0,1].
    explicit BidGrid(std::vector<double> bids);

    std::size_t size() const noexcept { return bids_.size(); }
    double operator[](std::size_t j) const { return bids_[j]; }
    double top() const noexcept { return bids_.back(); }
    std::span<const double> bids() const noexcept { return bids_; }

    bool operator==(const BidGrid&) const = default;

private:
    std::vector<double> bids_;
};

/// {0} ∪ {p0, p0+eps, ...} ∩ [p0, 1], closed with 1.0 when the stride misses it.
BidGrid uniform_grid(double p0, double eps);

/// {0} ∪ {1/(1+eps*l) : l = 0, 1, ... while >= p0}, ascending.
BidGrid hyperbolic_grid(double eps, double p0);

/// Parses "uniform:<eps>", "hyperbolic:<eps>" or "list:<b1>,<b2>,...".
/// The list form gets a leading 0 inserted when absent.
BidGrid parse_grid_spec(const std::string& spec, double p0);

/// One arm: a grid index per platform.
struct BidVector {
    std::vector<std::size_t> indices;

    std::size_t size() const noexcept { return indices.size(); }
    std::size_t operator[](std::size_t i) const { return indices[i]; }

    bool operator==(const BidVector&) const = default;
};

/// Censored observation of one auction. A loss reveals nothing but the loss.
struct PlatformFeedback {
    bool won = false;
    double price_paid = 0.0;
    double value_observed = 0.0;

    bool operator==(const PlatformFeedback&) const = default;
};

struct RoundOutcome;

/// Budget accounting with the stopping time tau. A round whose cost would
/// take spend above B is rejected: it is neither paid for nor rewarded, and
/// tau is set to that round. Reaching round T sets tau = T+1.
class BudgetLedger {
public:
    double spent() const noexcept { return spent_; }
    std::int64_t rounds_played() const noexcept { return rounds_played_; }
    std::optional<std::int64_t> stopped_at() const noexcept { return stopped_at_; }
    bool stopped() const noexcept { return stopped_at_.has_value(); }
    double residual(const Instance& instance) const noexcept { return instance.budget - spent_; }

    /// Returns true when the round is counted, false when it was rejected.
    /// Throws UsageError once the ledger has stopped.
    bool charge(double round_cost, const Instance& instance, std::int64_t t);
    bool charge(const RoundOutcome& outcome, const Instance& instance, std::int64_t t);

private:
    double spent_ = 0.0;
    std::int64_t rounds_played_ = 0;
    std::optional<std::int64_t> stopped_at_;
};

} // namespace multibid
