#include "multibid/env.hpp"

#include <cassert>

namespace multibid {

RoundOutcome play_round(const Instance& instance, const BidGrid& grid, const BidVector& bids,
                        std::int64_t t, const EpisodeRng& rng)
{
    const std::size_t m = instance.m();
    assert(bids.size() == m);

    RoundOutcome out;
    out.feedback.resize(m);
    out.hidden_price.resize(m);
    out.hidden_value.resize(m);

    for (std::size_t i = 0; i < m; ++i) {
        const auto round = static_cast<std::uint64_t>(t);
        auto price_engine = rng.engine(round, i, Channel::price);
        auto value_engine = rng.engine(round, i, Channel::value);
        const double price = sample(instance.platforms[i].price, price_engine);
        const double value = sample(instance.platforms[i].value, value_engine);
        out.hidden_price[i] = price;
        out.hidden_value[i] = value;

        assert(bids[i] < grid.size());
        // ties go to the advertiser
        if (grid[bids[i]] >= price) {
            out.feedback[i] = {true, price, value};
            out.round_cost += price;
            out.round_reward += value;
        }
    }
    return out;
}

} // namespace multibid
