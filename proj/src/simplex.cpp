#include "multibid/simplex.hpp"

#include "multibid/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace multibid {

LpResult solve_lp(const LinearProgram& lp, double pivot_tol)
{
    const std::size_t rows = lp.A.size();
    const std::size_t vars = lp.c.size();
    if (lp.b.size() != rows)
        throw UsageError("solve_lp: A and b disagree on row count");
    for (std::size_t r = 0; r < rows; ++r) {
        if (lp.A[r].size() != vars)
            throw UsageError("solve_lp: ragged constraint matrix");
        if (lp.b[r] < 0.0)
            throw UsageError("solve_lp: right-hand side must be nonnegative");
    }

    // Columns: structural vars, then one slack per row, then the rhs.
    const std::size_t cols = vars + rows;
    std::vector<std::vector<double>> T(rows, std::vector<double>(cols + 1, 0.0));
    std::vector<std::size_t> basis(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t k = 0; k < vars; ++k)
            T[r][k] = lp.A[r][k];
        T[r][vars + r] = 1.0;
        T[r][cols] = lp.b[r];
        basis[r] = vars + r;
    }
    // reduced costs of the maximization; objective value accumulates in z
    std::vector<double> reduced(cols, 0.0);
    for (std::size_t k = 0; k < vars; ++k)
        reduced[k] = lp.c[k];
    double z = 0.0;

    LpResult result;
    while (true) {
        std::size_t enter = cols;
        for (std::size_t k = 0; k < cols; ++k) {
            if (reduced[k] > pivot_tol) {
                enter = k;
                break;
            }
        }
        if (enter == cols)
            break;

        std::size_t leave = rows;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < rows; ++r) {
            if (T[r][enter] <= pivot_tol)
                continue;
            const double ratio = T[r][cols] / T[r][enter];
            const double slack = 1e-12 * std::max(1.0, std::abs(ratio));
            if (leave == rows || ratio < best_ratio - slack) {
                leave = r;
                best_ratio = ratio;
            } else if (ratio <= best_ratio + slack && basis[r] < basis[leave]) {
                leave = r;
                best_ratio = std::min(best_ratio, ratio);
            }
        }
        if (leave == rows) {
            result.status = LpStatus::unbounded;
            result.objective = std::numeric_limits<double>::infinity();
            return result;
        }

        const double pivot = T[leave][enter];
        for (auto& v : T[leave])
            v /= pivot;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == leave || T[r][enter] == 0.0)
                continue;
            const double f = T[r][enter];
            for (std::size_t k = 0; k <= cols; ++k)
                T[r][k] -= f * T[leave][k];
            if (T[r][cols] < 0.0 && T[r][cols] > -pivot_tol)
                T[r][cols] = 0.0;
        }
        const double f = reduced[enter];
        for (std::size_t k = 0; k < cols; ++k)
            reduced[k] -= f * T[leave][k];
        z += f * T[leave][cols];
        basis[leave] = enter;
        ++result.pivots;
    }

    result.x.assign(vars, 0.0);
    for (std::size_t r = 0; r < rows; ++r)
        if (basis[r] < vars)
            result.x[basis[r]] = T[r][cols];
    result.objective = z;
    return result;
}

} // namespace multibid
