#pragma once

#include "multibid/estimation.hpp"
#include "multibid/model.hpp"
#include "multibid/rng.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>

namespace multibid {

/// True per-cell expectations: rbar[i,j] = E[v(i) 1{b_j >= p(i)}] and
/// cbar[i,j] = E[p(i) 1{b_j >= p(i)}]. Price and value are independent, so
/// rbar = E[v] * Pr[p <= b]. Beta moments come from the regularized
/// incomplete beta function, so every table is exact.
struct MeanTables {
    Matrix rbar;
    Matrix cbar;
};

MeanTables mean_tables(const Instance& instance, const BidGrid& grid);

/// Solution of the decomposed LP relaxation. y[i,j] is the expected number
/// of rounds bidding b_j on platform i and S the common per-platform round
/// mass. Any y with equal row sums is a product mixture of arms, so the
/// optimum equals that of the LP over all n^m arms.
struct LpSolution {
    Matrix y;
    double S = 0.0;
    double objective = 0.0;
    /// "budget", "time" or "none".
    std::string binding_constraint = "none";
};

LpSolution opt_lp(const MeanTables& tables, double budget, double horizon);

/// The same LP stated over every arm. Throws UsageError when n^m > 1e4.
double opt_lp_bruteforce(const MeanTables& tables, double budget, double horizon);

/// {objective, S, y: [[i, j, value], ...] (nonzeros only), binding_constraint}
nlohmann::json to_json(const LpSolution& solution);

inline double regret(double episode_reward, double opt) { return opt - episode_reward; }

/// Hard discrete instance: one real bid per platform, every platform pays
/// 0.5 per win, rewards are Bernoulli with mean 0.5 except one platform with
/// mean 0.5(1 + eps), eps = sqrt(m/B), and T = 2B.
struct LowerBoundInstance {
    Instance instance;
    BidGrid grid;
    std::size_t best_platform = 0;
    double eps = 0.0;
};

/// Throws ConfigError when eps >= 1 (B <= m) or 2B is not an integer.
LowerBoundInstance gen_lower_bound_discrete(std::size_t m, double budget, std::uint64_t seed);

/// Lipschitz bump shared by all m platforms:
/// mu(x) = 1/2 + eps - |x - x*| inside the eps-window, 1/2 outside.
class ContinuousLowerBound {
public:
    ContinuousLowerBound(double x_star, double eps, std::size_t m);

    double x_star() const noexcept { return x_star_; }
    double eps() const noexcept { return eps_; }
    std::size_t m() const noexcept { return m_; }

    double mean_reward(double x) const noexcept;
    /// Bernoulli draw with mean mean_reward(x).
    double sample(double x, SplitMix64& engine) const noexcept;

private:
    double x_star_;
    double eps_;
    std::size_t m_;
};

ContinuousLowerBound gen_lower_bound_continuous(double x_star, double eps, std::size_t m);

struct DiscretizationTerms {
    /// B * eps * v0 / p0^2
    double added_regret_bound = 0.0;
    /// p0^(2/3) m^(1/3) / B^(1/3), the budget-limited grid step
    double eps_star_budget = 0.0;
    /// m p0^(4/3) T^(2/3) / (B v0^(2/3)), the horizon-limited grid step
    double eps_star_horizon = 0.0;
};

DiscretizationTerms discretization_terms(double eps, double budget, double v0, double p0, std::size_t m,
                                         double horizon);

} // namespace multibid
