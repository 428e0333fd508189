#include "multibid/armselect.hpp"

#include "multibid/errors.hpp"

#include <cassert>
#include <cmath>

namespace multibid {

namespace {

constexpr double kConvergenceTol = 1e-12;
constexpr double kBruteForceLimit = 1e6;

} // namespace

double RatioProblem::numerator(const BidVector& sel) const
{
    double acc = 0.0;
    for (std::size_t i = 0; i < sel.size(); ++i)
        acc += U(i, sel[i]);
    return acc;
}

double RatioProblem::denominator(const BidVector& sel) const
{
    double acc = 0.0;
    for (std::size_t i = 0; i < sel.size(); ++i)
        acc += L(i, sel[i]);
    return lambda1 * acc + lambda2 * time_price;
}

LinearizedArgmax linearized_argmax(const RatioProblem& prob, double q)
{
    const std::size_t m = prob.U.rows();
    const std::size_t n = prob.U.cols();
    const double cost_weight = q * prob.lambda1;

    LinearizedArgmax out;
    out.indices.indices.assign(m, 0);
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t best = 0;
        double best_score = prob.U(i, 0) - cost_weight * prob.L(i, 0);
        for (std::size_t j = 1; j < n; ++j) {
            const double score = prob.U(i, j) - cost_weight * prob.L(i, j);
            if (score > best_score) {
                best_score = score;
                best = j;
            }
        }
        out.indices.indices[i] = best;
        total += best_score;
    }
    out.F_value = total - q * prob.lambda2 * prob.time_price;
    return out;
}

Selection select_arm(const RatioProblem& prob)
{
    assert(prob.U.rows() == prob.L.rows() && prob.U.cols() == prob.L.cols());
    assert(prob.lambda2 * prob.time_price > 0.0);

    // q_k is the ratio of the previous candidate; the argmax at q_k has
    // ratio >= q_k, with equality exactly at the optimum. Each strict
    // increase retires a selection, so the loop is finite.
    double q = 0.0;
    BidVector previous;
    std::size_t iterations = 0;
    const std::size_t cap = 10 * prob.U.rows() * prob.U.cols() + 100;
    while (true) {
        auto step = linearized_argmax(prob, q);
        ++iterations;
        const double next = prob.ratio(step.indices);
        if (next <= q + kConvergenceTol || step.indices == previous || iterations >= cap)
            return {std::move(step.indices), next, iterations};
        previous = step.indices;
        q = next;
    }
}

Selection select_arm_bruteforce(const RatioProblem& prob)
{
    const std::size_t m = prob.U.rows();
    const std::size_t n = prob.U.cols();
    if (std::pow(static_cast<double>(n), static_cast<double>(m)) > kBruteForceLimit)
        throw UsageError("select_arm_bruteforce: n^m exceeds 1e6");

    BidVector current;
    current.indices.assign(m, 0);
    Selection best{current, prob.ratio(current), 0};
    // odometer in lexicographic order; strict > keeps the smallest on ties
    while (true) {
        std::size_t pos = m;
        while (pos > 0) {
            --pos;
            if (++current.indices[pos] < n)
                break;
            current.indices[pos] = 0;
            if (pos == 0) {
                return best;
            }
        }
        if (m == 0)
            return best;
        const double r = prob.ratio(current);
        if (r > best.ratio_value) {
            best.indices = current;
            best.ratio_value = r;
        }
    }
}

} // namespace multibid
