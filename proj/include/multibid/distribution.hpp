#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace multibid {

class SplitMix64;

struct Discrete {
    std::vector<double> support;
    std::vector<double> probs;

    bool operator==(const Discrete&) const = default;
};

struct Uniform {
    double lo = 0.0;
    double hi = 1.0;

    bool operator==(const Uniform&) const = default;
};

struct Beta {
    double alpha = 1.0;
    double beta = 1.0;

    bool operator==(const Beta&) const = default;
};

struct PointMass {
    double value = 0.0;

    bool operator==(const PointMass&) const = default;
};

/// A distribution over [0,1], used for both critical bids and values.
using Distribution = std::variant<Discrete, Uniform, Beta, PointMass>;

/// Throws ConfigError describing the first broken invariant. `where` is
/// prefixed to the message (e.g. "platform 2 price").
void validate_distribution(const Distribution& dist, const std::string& where);

double mean(const Distribution& dist);

/// Essential infimum of the support.
double support_min(const Distribution& dist);

/// Pr[X <= x].
double cdf(const Distribution& dist, double x);

/// E[X * 1{X <= x}]: expected payment of a bid x when X is the critical bid.
double partial_mean(const Distribution& dist, double x);

/// Analytic variance, used by sampling smoke tests.
double variance(const Distribution& dist);

/// Draws one value. Discrete, Uniform and PointMass consume exactly one
/// 64-bit word from the engine (inverse CDF); Beta uses two gamma variates.
double sample(const Distribution& dist, SplitMix64& engine);

std::string describe(const Distribution& dist);

} // namespace multibid
