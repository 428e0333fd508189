#include "multibid/env.hpp"
#include "multibid/errors.hpp"
#include "multibid/policies.hpp"

#include <doctest.h>

#include <cmath>

using namespace multibid;

namespace {

Instance make(std::vector<PlatformSpec> platforms, double budget, std::int64_t horizon)
{
    Instance inst;
    inst.platforms = std::move(platforms);
    inst.budget = budget;
    inst.horizon = horizon;
    return validate_instance(std::move(inst));
}

// plays `rounds` rounds against the real environment, no budget stop
void drive(Policy& policy, const Instance& inst, const BidGrid& grid, std::int64_t rounds, std::uint64_t seed)
{
    const EpisodeRng rng(seed);
    double residual = inst.budget;
    for (std::int64_t t = 1; t <= rounds; ++t) {
        const RoundContext ctx{t, residual};
        const auto bids = policy.next_bids(ctx);
        const auto out = play_round(inst, grid, bids, t, rng);
        policy.absorb(bids, out.feedback, ctx);
        residual = std::max(0.0, residual - out.round_cost);
    }
}

} // namespace

TEST_CASE("bootstrap bids every grid bid once")
{
    const BootstrapPhase boot(3, 5);
    CHECK(boot.rounds() == 4);
    for (std::int64_t t = 1; t <= 4; ++t) {
        CHECK(boot.active(t));
        CHECK(boot.bids(t) == BidVector{{std::size_t(t), std::size_t(t), std::size_t(t)}});
    }
    CHECK_FALSE(boot.active(5));

    StatsTable stats(3, 5);
    boot.seed(stats);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(stats.at(i, 0).pulls == 1);
}

TEST_CASE("hedge step size and update")
{
    CHECK(DualState::default_eps(100) == doctest::Approx(0.08326).epsilon(1e-4));
    CHECK(DualState::default_eps(0.5) == 0.999);
    CHECK(DualState::default_eps(0.0) == 0.999);

    DualState a(0.1);
    a.update({1.0, 0.0});
    CHECK(a.lambda(0) == doctest::Approx(1.1));
    CHECK(a.lambda(1) == 1.0);
    // lambda = 2, g = 0.5
    DualState b(0.1);
    b.update({std::log(2.0) / std::log(1.1), 0.0});
    b.update({0.5, 0.0});
    CHECK(b.lambda(0) == doctest::Approx(2.0976).epsilon(1e-4));

    DualState c(0.08326);
    c.update({1.0, 1.0});
    CHECK(c.lambda(0) == doctest::Approx(1.08326));
    CHECK(c.normalized()[0] == doctest::Approx(0.5));

    // log space keeps ratios finite long after lambda itself overflows
    DualState d(0.5);
    for (int k = 0; k < 5000; ++k)
        d.update({1.0, 0.0});
    CHECK(std::isinf(d.lambda(0)));
    CHECK(d.normalized()[0] == doctest::Approx(1.0));
}

TEST_CASE("hedge regret inequality against fixed comparators")
{
    const int horizon = 1000;
    const double eps = std::sqrt(std::log(2.0) / horizon);
    SplitMix64 engine(17);
    int violations = 0;
    for (int seq = 0; seq < 100; ++seq) {
        DualState duals(eps);
        double learner = 0.0;
        double fixed[11] = {};
        double prev[2] = {duals.lambda(0), duals.lambda(1)};
        for (int t = 0; t < horizon; ++t) {
            const std::array<double, 2> g{engine.uniform(), engine.uniform()};
            const auto y = duals.normalized();
            learner += y[0] * g[0] + y[1] * g[1];
            for (int k = 0; k <= 10; ++k)
                fixed[k] += 0.1 * k * g[0] + (1 - 0.1 * k) * g[1];
            duals.update(g);
            REQUIRE(duals.lambda(0) >= prev[0]);
            REQUIRE(duals.lambda(1) >= prev[1]);
            prev[0] = duals.lambda(0);
            prev[1] = duals.lambda(1);
        }
        for (double f : fixed)
            if (learner < (1 - eps) * f - std::log(2.0) / eps - 1e-9)
                ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("primal-dual subproblem limits")
{
    SplitMix64 engine(8);
    for (int k = 0; k < 100; ++k) {
        RatioProblem p;
        p.U = Matrix(3, 5);
        p.L = Matrix(3, 5);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 1; j < 5; ++j) {
                p.U(i, j) = engine.uniform();
                p.L(i, j) = engine.uniform();
            }
        p.lambda1 = 1.0;
        p.lambda2 = 1e6;
        p.time_price = 0.05;
        const auto sel = select_arm(p);
        for (std::size_t i = 0; i < 3; ++i) {
            std::size_t best = 0;
            for (std::size_t j = 1; j < 5; ++j)
                if (p.U(i, j) > p.U(i, best))
                    best = j;
            REQUIRE(sel.indices[i] == best);
        }
    }

    RatioProblem zero;
    zero.U = Matrix(2, 4);
    zero.L = Matrix(2, 4, 0.3);
    CHECK(select_arm(zero).indices == BidVector{{0, 0}});
}

TEST_CASE("primal-dual after bootstrap")
{
    const PlatformSpec same{Uniform{0.2, 0.8}, PointMass{0.6}};
    const auto inst = make({same, same, same}, 100, 1000);
    const auto grid = uniform_grid(*inst.p0, 0.2);
    CHECK_THROWS_AS(PrimalDualPolicy(make({same}, 1, 2), grid), ConfigError);

    PrimalDualPolicy pd(inst, grid, {1.0, std::nullopt});
    drive(pd, inst, grid, grid.size() - 1, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < grid.size(); ++j)
            CHECK(pd.stats().at(i, j).pulls >= 1);
    CHECK(pd.dual_state().log_lambda(0) == 0.0);

    // identical deterministic platforms pick identical bids
    const PlatformSpec det{PointMass{0.3}, PointMass{0.6}};
    const auto sym = make({det, det, det}, 100, 1000);
    PrimalDualPolicy pd2(sym, grid);
    drive(pd2, sym, grid, grid.size() - 1, 3);
    const auto bids = pd2.next_bids({static_cast<std::int64_t>(grid.size()), 100});
    CHECK(bids[0] == bids[1]);
    CHECK(bids[1] == bids[2]);
    CHECK(pd2.last_ratio().has_value());

    double l1 = 1.0;
    double l2 = 1.0;
    drive(pd, inst, grid, 300, 3);
    CHECK(pd.duals()->at(0) >= l1);
    CHECK(pd.duals()->at(1) >= l2);
    CHECK(pd.confidence().c_rad == doctest::Approx(c_rad_default(3, grid.size(), 1000)));
}

TEST_CASE("ucb greedy")
{
    const auto inst = make({{PointMass{0.95}, PointMass{1.0}}}, 1e9, 500);
    const BidGrid grid({0.0, 0.5, 0.9, 1.0});
    UcbGreedyPolicy ucb(inst, grid, {0.1, std::nullopt});
    drive(ucb, inst, grid, 200, 1);
    CHECK(ucb.next_bids({201, 1e9}) == BidVector{{3}});

    // equal fresh statistics: the lowest index wins the tie
    const auto flat = make({{PointMass{0.99}, PointMass{1.0}}}, 10, 100);
    const BidGrid low({0.0, 0.3, 0.6});
    UcbGreedyPolicy tie(flat, low);
    drive(tie, flat, low, 2, 1);
    CHECK(tie.next_bids({3, 10}) == BidVector{{1}});
}

TEST_CASE("lueker pacing")
{
    const auto inst = make({{PointMass{0.4}, PointMass{0.7}}}, 5, 10);
    const BidGrid grid({0.0, 0.2, 0.3, 0.4, 0.6, 1.0});
    LuekerPolicy lk(inst, grid);
    CHECK(lk.next_bids({1, 0.0}) == BidVector{{0}});
    // before any data every bid looks like a certain loss, costing nothing
    CHECK(lk.next_bids({1, 5.0}) == BidVector{{5}});

    const std::vector<PlatformFeedback> lost{{false, 0, 0}};
    const std::vector<PlatformFeedback> won{{true, 0.4, 0.7}};
    for (std::size_t j = 1; j < grid.size(); ++j)
        lk.absorb(BidVector{{j}}, grid[j] >= 0.4 ? won : lost, {1, 5.0});
    CHECK(lk.estimated_cost(0, 2) == 0.0);
    CHECK(lk.estimated_cost(0, 3) == doctest::Approx(0.4));
    CHECK(lk.estimated_cost(0, 5) == doctest::Approx(0.4));

    // allowance B_t / (T - t + 1) = 1 / 5 = 0.2
    CHECK(lk.next_bids({6, 1.0}) == BidVector{{2}});
    // last round, plenty left
    CHECK(lk.next_bids({10, 5.0}) == BidVector{{5}});
}

TEST_CASE("fixed policies and the name registry")
{
    const auto inst = make({{PointMass{0.4}, PointMass{0.7}}, {PointMass{0.5}, PointMass{0.7}}}, 5, 10);
    const BidGrid grid({0.0, 0.45, 1.0});
    auto top = make_policy("fixed:top", inst, grid);
    CHECK(top->next_bids({1, 5}) == BidVector{{2, 2}});
    auto mid = make_policy("fixed:1", inst, grid);
    const auto out = play_round(inst, grid, mid->next_bids({1, 5}), 1, EpisodeRng(0));
    CHECK(out.feedback[0].won);
    CHECK_FALSE(out.feedback[1].won);
    CHECK(make_policy("fixed:0", inst, grid)->name() == "fixed:0");
    CHECK(make_policy("primal_dual", inst, grid)->name() == "primal_dual");
    CHECK(make_policy("ucb", inst, grid)->name() == "ucb");
    CHECK(make_policy("lueker", inst, grid)->name() == "lueker");
    CHECK_THROWS_AS(make_policy("greedy", inst, grid), ConfigError);
    CHECK_THROWS_AS(make_policy("fixed:3", inst, grid), ConfigError);
    CHECK_THROWS_AS(check_policy_name("fixed:x", 3), ConfigError);
    CHECK_NOTHROW(check_policy_name("fixed:2", 3));
}
