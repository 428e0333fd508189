#include "multibid/model.hpp"

#include "multibid/env.hpp"
#include "multibid/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace multibid {

namespace {

constexpr double kGridTol = 1e-12;

std::string platform_label(std::size_t i, const char* channel)
{
    return "platform " + std::to_string(i) + " " + channel;
}

double parse_double(std::string_view text, const std::string& context)
{
    // std::from_chars for double is available in libstdc++ 11
    double out = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    while (first < last && *first == ' ')
        ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last)
        throw ConfigError("cannot parse number '" + std::string(text) + "' in " + context);
    return out;
}

} // namespace

Instance validate_instance(Instance raw)
{
    if (raw.platforms.empty())
        throw ConfigError("instance has no platforms");
    if (!std::isfinite(raw.budget) || raw.budget < 0.0)
        throw ConfigError("budget must be a nonnegative number");
    if (raw.horizon < 1)
        throw ConfigError("horizon must be a positive integer");

    for (std::size_t i = 0; i < raw.m(); ++i) {
        validate_distribution(raw.platforms[i].price, platform_label(i, "price"));
        validate_distribution(raw.platforms[i].value, platform_label(i, "value"));
    }

    double min_price = 1.0;
    double max_value = 0.0;
    std::size_t argmin_price = 0;
    for (std::size_t i = 0; i < raw.m(); ++i) {
        const double lo = support_min(raw.platforms[i].price);
        if (lo < min_price) {
            min_price = lo;
            argmin_price = i;
        }
        max_value = std::max(max_value, mean(raw.platforms[i].value));
    }

    if (raw.p0) {
        const double p0 = *raw.p0;
        if (!(p0 > 0.0 && p0 <= 1.0))
            throw ConfigError("p0 must lie in (0,1]");
        for (std::size_t i = 0; i < raw.m(); ++i)
            if (p0 > support_min(raw.platforms[i].price) + kGridTol)
                throw ConfigError(platform_label(i, "price") +
                                  ": support reaches below the declared p0");
    } else {
        if (!(min_price > 0.0))
            throw ConfigError(platform_label(argmin_price, "price") +
                              ": critical bids must be bounded away from 0 (p0 > 0)");
        raw.p0 = min_price;
    }

    if (raw.v0) {
        const double v0 = *raw.v0;
        if (!(v0 > 0.0 && v0 <= 1.0))
            throw ConfigError("v0 must lie in (0,1]");
        for (std::size_t i = 0; i < raw.m(); ++i)
            if (v0 + kGridTol < mean(raw.platforms[i].value))
                throw ConfigError(platform_label(i, "value") + ": mean exceeds the declared v0");
    } else {
        if (!(max_value > 0.0))
            throw ConfigError("every value distribution has mean 0 (v0 must be positive)");
        raw.v0 = max_value;
    }
    return raw;
}

bool budget_is_vacuous(const Instance& instance)
{
    return instance.budget >= static_cast<double>(instance.m()) * static_cast<double>(instance.horizon);
}

Instance subset_instance(const Instance& instance, std::span<const std::size_t> platforms)
{
    Instance out = instance;
    out.platforms.clear();
    for (std::size_t i : platforms) {
        if (i >= instance.m())
            throw ConfigError("platform subset index " + std::to_string(i) + " out of range");
        out.platforms.push_back(instance.platforms[i]);
    }
    if (out.platforms.empty())
        throw ConfigError("platform subset is empty");
    return out;
}

BidGrid::BidGrid(std::vector<double> bids) : bids_(std::move(bids))
{
    if (bids_.empty() || bids_.front() != 0.0)
        throw ConfigError("bid grid must start with the 0-bid");
    for (std::size_t j = 0; j < bids_.size(); ++j) {
        if (!std::isfinite(bids_[j]) || bids_[j] < 0.0 || bids_[j] > 1.0)
            throw ConfigError("bid grid value outside [0,1]");
        if (j > 0 && !(bids_[j] > bids_[j - 1]))
            throw ConfigError("bid grid must be strictly increasing");
    }
}

BidGrid uniform_grid(double p0, double eps)
{
    if (!(eps > 0.0 && eps <= 1.0) || !(p0 > 0.0 && p0 <= 1.0))
        throw ConfigError("uniform grid needs 0 < eps <= 1 and 0 < p0 <= 1");
    std::vector<double> bids{0.0};
    for (std::int64_t k = 0;; ++k) {
        const double b = p0 + static_cast<double>(k) * eps;
        if (b > 1.0 + kGridTol)
            break;
        bids.push_back(std::min(b, 1.0));
    }
    if (bids.back() < 1.0 - kGridTol)
        bids.push_back(1.0);
    else
        bids.back() = 1.0;
    return BidGrid(std::move(bids));
}

BidGrid hyperbolic_grid(double eps, double p0)
{
    if (!(eps > 0.0) || !(p0 > 0.0 && p0 <= 1.0))
        throw ConfigError("hyperbolic grid needs eps > 0 and 0 < p0 <= 1");
    std::vector<double> desc;
    for (std::int64_t l = 0;; ++l) {
        const double b = 1.0 / (1.0 + eps * static_cast<double>(l));
        if (b < p0 - kGridTol)
            break;
        desc.push_back(b);
    }
    std::vector<double> bids{0.0};
    bids.insert(bids.end(), desc.rbegin(), desc.rend());
    return BidGrid(std::move(bids));
}

BidGrid parse_grid_spec(const std::string& spec, double p0)
{
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw ConfigError("grid spec '" + spec + "' must look like kind:args");
    const std::string kind = spec.substr(0, colon);
    const std::string args = spec.substr(colon + 1);
    if (kind == "uniform")
        return uniform_grid(p0, parse_double(args, "grid spec"));
    if (kind == "hyperbolic")
        return hyperbolic_grid(parse_double(args, "grid spec"), p0);
    if (kind == "list") {
        std::vector<double> bids;
        std::size_t start = 0;
        while (start <= args.size()) {
            const auto comma = args.find(',', start);
            const auto end = comma == std::string::npos ? args.size() : comma;
            bids.push_back(parse_double(std::string_view(args).substr(start, end - start), "grid list"));
            start = end + 1;
        }
        if (bids.empty() || bids.front() != 0.0)
            bids.insert(bids.begin(), 0.0);
        return BidGrid(std::move(bids));
    }
    throw ConfigError("unknown grid kind '" + kind + "'");
}

bool BudgetLedger::charge(double round_cost, const Instance& instance, std::int64_t t)
{
    if (stopped_at_)
        throw UsageError("charge() called after the ledger stopped");
    if (t < 1 || t > instance.horizon)
        throw UsageError("round index outside [1, T]");
    if (spent_ + round_cost > instance.budget) {
        stopped_at_ = t;
        return false;
    }
    spent_ += round_cost;
    rounds_played_ = t;
    if (t == instance.horizon)
        stopped_at_ = instance.horizon + 1;
    return true;
}

bool BudgetLedger::charge(const RoundOutcome& outcome, const Instance& instance, std::int64_t t)
{
    return charge(outcome.round_cost, instance, t);
}

} // namespace multibid
