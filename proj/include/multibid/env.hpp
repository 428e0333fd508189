#pragma once

#include "multibid/model.hpp"
#include "multibid/rng.hpp"

#include <cstdint>
#include <vector>

namespace multibid {

/// One round across all m auctions. `hidden_price` and `hidden_value` are the
/// uncensored draws; they exist for tests and oracles and must never reach a
/// policy.
struct RoundOutcome {
    std::vector<PlatformFeedback> feedback;
    double round_cost = 0.0;
    double round_reward = 0.0;
    std::vector<double> hidden_price;
    std::vector<double> hidden_value;
};

/// Plays round `t` (1-based). Win iff bid >= critical bid; the winner pays
/// the critical bid and observes the value. Both price and value are drawn
/// every round regardless of the outcome.
RoundOutcome play_round(const Instance& instance, const BidGrid& grid, const BidVector& bids,
                        std::int64_t t, const EpisodeRng& rng);

} // namespace multibid
