#pragma once

#include <cstddef>
#include <vector>

namespace multibid {

/// maximize c.x  subject to  A x <= b,  x >= 0,  with b >= 0.
///
/// The origin is feasible by the sign of b, so a single phase suffices.
/// Dense tableau, Bland's rule (smallest-index entering and leaving), so
/// degenerate pivots cannot cycle.
struct LinearProgram {
    std::vector<double> c;
    std::vector<std::vector<double>> A;
    std::vector<double> b;
};

enum class LpStatus { optimal, unbounded };

struct LpResult {
    LpStatus status = LpStatus::optimal;
    double objective = 0.0;
    std::vector<double> x;
    std::size_t pivots = 0;
};

/// Throws UsageError on inconsistent dimensions or negative b.
LpResult solve_lp(const LinearProgram& lp, double pivot_tol = 1e-9);

} // namespace multibid
