#pragma once

#include "multibid/estimation.hpp"
#include "multibid/model.hpp"

#include <cstddef>

namespace multibid {

/// Pick one bid per platform to maximize
///
///   sum_i U[i, j_i] / (lambda1 * sum_i L[i, j_i] + lambda2 * time_price).
///
/// The denominator is positive for every selection because
/// lambda2 * time_price > 0.
struct RatioProblem {
    Matrix U;
    Matrix L;
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    double time_price = 1.0;

    double numerator(const BidVector& sel) const;
    double denominator(const BidVector& sel) const;
    double ratio(const BidVector& sel) const { return numerator(sel) / denominator(sel); }
};

struct Selection {
    BidVector indices;
    double ratio_value = 0.0;
    /// Dinkelbach iterations spent (0 for the brute-force oracle).
    std::size_t iterations = 0;
};

struct LinearizedArgmax {
    BidVector indices;
    double F_value = 0.0;
};

/// For a fixed q, maximizes sum_i (U[i,j] - q*lambda1*L[i,j]) row by row,
/// breaking ties toward the smallest j. F_value subtracts q*lambda2*time_price.
LinearizedArgmax linearized_argmax(const RatioProblem& prob, double q);

/// Exact ratio maximizer by Dinkelbach iteration. Among optimal selections
/// returns the lexicographically smallest index vector.
Selection select_arm(const RatioProblem& prob);

/// Enumerates all n^m selections. Throws UsageError when n^m > 1e6.
Selection select_arm_bruteforce(const RatioProblem& prob);

} // namespace multibid
