#include "multibid/benchmark.hpp"

#include "multibid/errors.hpp"
#include "multibid/simplex.hpp"

#include <algorithm>
#include <cmath>

namespace multibid {

MeanTables mean_tables(const Instance& instance, const BidGrid& grid)
{
    const std::size_t m = instance.m();
    const std::size_t n = grid.size();
    MeanTables t{Matrix(m, n), Matrix(m, n)};
    for (std::size_t i = 0; i < m; ++i) {
        const auto& p = instance.platforms[i];
        const double value_mean = mean(p.value);
        // j = 0 is the opt-out bid and stays (0, 0)
        for (std::size_t j = 1; j < n; ++j) {
            t.rbar(i, j) = std::clamp(value_mean * cdf(p.price, grid[j]), 0.0, 1.0);
            t.cbar(i, j) = std::clamp(partial_mean(p.price, grid[j]), 0.0, 1.0);
        }
    }
    return t;
}

LpSolution opt_lp(const MeanTables& tables, double budget, double horizon)
{
    const std::size_t m = tables.rbar.rows();
    const std::size_t n = tables.rbar.cols();
    const std::size_t mn = m * n;
    const std::size_t s_col = mn;

    LinearProgram lp;
    lp.c.assign(mn + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            lp.c[i * n + j] = tables.rbar(i, j);

    // row sums equal S, as a pair of inequalities with zero right-hand side
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<double> le(mn + 1, 0.0);
        std::vector<double> ge(mn + 1, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            le[i * n + j] = 1.0;
            ge[i * n + j] = -1.0;
        }
        le[s_col] = -1.0;
        ge[s_col] = 1.0;
        lp.A.push_back(std::move(le));
        lp.b.push_back(0.0);
        lp.A.push_back(std::move(ge));
        lp.b.push_back(0.0);
    }
    {
        std::vector<double> time(mn + 1, 0.0);
        time[s_col] = 1.0;
        lp.A.push_back(std::move(time));
        lp.b.push_back(horizon);
    }
    {
        std::vector<double> spend(mn + 1, 0.0);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j)
                spend[i * n + j] = tables.cbar(i, j);
        lp.A.push_back(std::move(spend));
        lp.b.push_back(budget);
    }

    const auto res = solve_lp(lp);
    if (res.status != LpStatus::optimal)
        throw std::runtime_error("opt_lp: simplex reported an unbounded program");

    LpSolution sol;
    sol.y = Matrix(m, n);
    double spent = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            sol.y(i, j) = std::max(0.0, res.x[i * n + j]);
            spent += tables.cbar(i, j) * sol.y(i, j);
        }
    sol.S = res.x[s_col];
    sol.objective = res.objective;
    if (spent >= budget - 1e-9 * std::max(1.0, budget) && budget > 0.0 && sol.objective > 0.0)
        sol.binding_constraint = "budget";
    else if (sol.S >= horizon - 1e-9 * std::max(1.0, horizon))
        sol.binding_constraint = "time";
    return sol;
}

double opt_lp_bruteforce(const MeanTables& tables, double budget, double horizon)
{
    const std::size_t m = tables.rbar.rows();
    const std::size_t n = tables.rbar.cols();
    const double arms = std::pow(static_cast<double>(n), static_cast<double>(m));
    if (arms > 1e4)
        throw UsageError("opt_lp_bruteforce: n^m exceeds 1e4");

    LinearProgram lp;
    std::vector<double> cost_row;
    std::vector<double> time_row;
    const auto count = static_cast<std::size_t>(arms);
    for (std::size_t a = 0; a < count; ++a) {
        std::size_t code = a;
        double r = 0.0;
        double c = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t j = code % n;
            code /= n;
            r += tables.rbar(i, j);
            c += tables.cbar(i, j);
        }
        lp.c.push_back(r);
        cost_row.push_back(c);
        time_row.push_back(horizon > 0.0 ? budget / horizon : 0.0);
    }
    lp.A = {cost_row, time_row};
    lp.b = {budget, budget};
    if (budget == 0.0) {
        // B/T xi <= B degenerates to 0 <= 0; the time limit still applies
        lp.A[1].assign(count, 1.0);
        lp.b[1] = horizon;
    }
    const auto res = solve_lp(lp);
    if (res.status != LpStatus::optimal)
        throw std::runtime_error("opt_lp_bruteforce: unbounded program");
    return res.objective;
}

nlohmann::json to_json(const LpSolution& solution)
{
    nlohmann::json y = nlohmann::json::array();
    for (std::size_t i = 0; i < solution.y.rows(); ++i)
        for (std::size_t j = 0; j < solution.y.cols(); ++j)
            if (solution.y(i, j) > 1e-12)
                y.push_back({i, j, solution.y(i, j)});
    return {{"objective", solution.objective},
            {"S", solution.S},
            {"y", std::move(y)},
            {"binding_constraint", solution.binding_constraint}};
}

LowerBoundInstance gen_lower_bound_discrete(std::size_t m, double budget, std::uint64_t seed)
{
    if (m == 0)
        throw ConfigError("lower-bound instance needs m >= 1");
    if (!(budget > 0.0))
        throw ConfigError("lower-bound instance needs a positive budget");
    const double eps = std::sqrt(static_cast<double>(m) / budget);
    if (eps >= 1.0)
        throw ConfigError("lower-bound instance needs B > m (eps = sqrt(m/B) must be < 1)");
    const double horizon = 2.0 * budget;
    if (horizon != std::floor(horizon))
        throw ConfigError("lower-bound instance needs 2B to be an integer horizon");

    SplitMix64 engine(hash_combine(seed, m));
    const std::size_t best = static_cast<std::size_t>(engine() % m);

    LowerBoundInstance out{Instance{}, BidGrid({0.0, 1.0}), best, eps};
    out.instance.budget = budget;
    out.instance.horizon = static_cast<std::int64_t>(horizon);
    for (std::size_t i = 0; i < m; ++i) {
        const double mu = i == best ? 0.5 * (1.0 + eps) : 0.5;
        out.instance.platforms.push_back({PointMass{0.5}, Discrete{{0.0, 1.0}, {1.0 - mu, mu}}});
    }
    out.instance = validate_instance(std::move(out.instance));
    return out;
}

ContinuousLowerBound::ContinuousLowerBound(double x_star, double eps, std::size_t m)
    : x_star_(x_star), eps_(eps), m_(m)
{
    if (!(x_star >= 0.0 && x_star <= 1.0))
        throw ConfigError("x* must lie in [0,1]");
    if (!(eps > 0.0 && eps <= 0.5))
        throw ConfigError("bump width eps must lie in (0, 1/2]");
    if (m == 0)
        throw ConfigError("need at least one platform");
}

double ContinuousLowerBound::mean_reward(double x) const noexcept
{
    const double d = std::abs(x - x_star_);
    return d >= eps_ ? 0.5 : 0.5 + eps_ - d;
}

double ContinuousLowerBound::sample(double x, SplitMix64& engine) const noexcept
{
    return engine.uniform() < mean_reward(x) ? 1.0 : 0.0;
}

ContinuousLowerBound gen_lower_bound_continuous(double x_star, double eps, std::size_t m)
{
    return ContinuousLowerBound(x_star, eps, m);
}

DiscretizationTerms discretization_terms(double eps, double budget, double v0, double p0, std::size_t m,
                                         double horizon)
{
    if (!(p0 > 0.0) || !(v0 > 0.0) || !(budget > 0.0))
        throw ConfigError("discretization terms need positive B, v0, p0");
    const double md = static_cast<double>(m);
    DiscretizationTerms t;
    t.added_regret_bound = budget * eps * v0 / (p0 * p0);
    t.eps_star_budget = std::pow(p0, 2.0 / 3.0) * std::cbrt(md) / std::cbrt(budget);
    t.eps_star_horizon = md * std::pow(p0, 4.0 / 3.0) * std::pow(horizon, 2.0 / 3.0) /
                         (budget * std::pow(v0, 2.0 / 3.0));
    return t;
}

} // namespace multibid
