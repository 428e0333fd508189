#include "multibid/armselect.hpp"
#include "multibid/errors.hpp"
#include "multibid/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace multibid;

namespace {

RatioProblem random_problem(SplitMix64& engine, std::size_t m, std::size_t n)
{
    RatioProblem p;
    p.U = Matrix(m, n);
    p.L = Matrix(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 1; j < n; ++j) {
            // U and L both increase in j, like win-probability curves
            p.U(i, j) = std::min(1.0, p.U(i, j - 1) + engine.uniform() / double(n - 1));
            p.L(i, j) = std::min(1.0, p.L(i, j - 1) + engine.uniform() / double(n - 1));
        }
    p.lambda1 = 0.05 + engine.uniform();
    p.lambda2 = 0.05 + engine.uniform();
    p.time_price = 0.01 + 0.5 * engine.uniform();
    return p;
}

} // namespace

TEST_CASE("single platform example")
{
    RatioProblem p;
    p.U = Matrix(1, 2);
    p.L = Matrix(1, 2);
    p.U(0, 0) = 0.5;
    p.U(0, 1) = 0.9;
    p.L(0, 0) = 0.2;
    p.L(0, 1) = 0.8;
    p.time_price = 0.1;
    const auto sel = select_arm(p);
    CHECK(sel.indices == BidVector{{0}});
    CHECK(sel.ratio_value == doctest::Approx(5.0 / 3.0));

    const auto at_one = linearized_argmax(p, 1.0);
    CHECK(at_one.indices == BidVector{{0}});
    CHECK(at_one.F_value == doctest::Approx(0.5 - 0.2 - 0.1));
}

TEST_CASE("linearized argmax breaks ties toward the smaller bid")
{
    RatioProblem p;
    p.U = Matrix(2, 3, 0.4);
    p.L = Matrix(2, 3, 0.1);
    CHECK(linearized_argmax(p, 0.7).indices == BidVector{{0, 0}});
}

TEST_CASE("Dinkelbach matches brute force")
{
    SplitMix64 engine(2024);
    for (int k = 0; k < 300; ++k) {
        const std::size_t m = 1 + engine() % 4;
        const std::size_t n = 2 + engine() % 5;
        const auto p = random_problem(engine, m, n);
        const auto fast = select_arm(p);
        const auto slow = select_arm_bruteforce(p);
        REQUIRE(fast.ratio_value == doctest::Approx(slow.ratio_value).epsilon(1e-10));
        REQUIRE(p.ratio(fast.indices) == doctest::Approx(fast.ratio_value).epsilon(1e-12));
        REQUIRE(fast.iterations <= 10 * m * n);
        REQUIRE(fast.indices.size() == m);
    }
}

TEST_CASE("selection is invariant to a common rescaling of the duals")
{
    SplitMix64 engine(77);
    for (int k = 0; k < 200; ++k) {
        auto p = random_problem(engine, 3, 5);
        const auto base = select_arm(p);
        const double s = std::exp(8.0 * engine.uniform() - 4.0);
        p.lambda1 *= s;
        p.lambda2 *= s;
        const auto scaled = select_arm(p);
        REQUIRE(scaled.ratio_value == doctest::Approx(base.ratio_value / s).epsilon(1e-9));
        REQUIRE(p.ratio(base.indices) == doctest::Approx(scaled.ratio_value).epsilon(1e-9));
    }
}

TEST_CASE("brute force refuses huge arm sets")
{
    RatioProblem p;
    p.U = Matrix(7, 10);
    p.L = Matrix(7, 10);
    CHECK_THROWS_AS(select_arm_bruteforce(p), UsageError);
}
