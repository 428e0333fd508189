#pragma once

#include "multibid/model.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace multibid {

/// Sufficient statistics for one (platform, bid) cell.
struct ArmStats {
    std::uint64_t pulls = 0;
    double reward_sum = 0.0;
    double cost_sum = 0.0;

    void record(double reward, double cost) noexcept
    {
        ++pulls;
        reward_sum += reward;
        cost_sum += cost;
    }
};

struct ConfidenceParams {
    double c_rad = 1.0;
};

/// scale * (ln(m n T) + 1).
double c_rad_default(std::uint64_t m, std::uint64_t n, std::uint64_t T, double scale = 1.0);

/// mean + sqrt(c_rad * mean / N) + c_rad / N, clamped to [0,1]. The radius
/// uses the empirical mean since the true mean is not observable.
double ucb_reward(const ArmStats& stats, const ConfidenceParams& params);

/// mean - sqrt(c_rad * mean / N) - c_rad / N, clamped to [0,1].
double lcb_cost(const ArmStats& stats, const ConfidenceParams& params);

/// Row-major m x n matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill)
    {
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// m x n table of ArmStats, platform first, bid index second.
class StatsTable {
public:
    StatsTable(std::size_t m, std::size_t n) : n_(n), cells_(m * n) {}

    std::size_t platforms() const noexcept { return n_ == 0 ? 0 : cells_.size() / n_; }
    std::size_t bids() const noexcept { return n_; }

    ArmStats& at(std::size_t i, std::size_t j) { return cells_[i * n_ + j]; }
    const ArmStats& at(std::size_t i, std::size_t j) const { return cells_[i * n_ + j]; }

    /// Records the feedback of one round played with `bids`.
    void absorb(const BidVector& bids, std::span<const PlatformFeedback> feedback);

    Matrix ucb_rewards(const ConfidenceParams& params) const;
    Matrix lcb_costs(const ConfidenceParams& params) const;

private:
    std::size_t n_;
    std::vector<ArmStats> cells_;
};

/// Product-limit estimate of the loss probability of each (platform, bid)
/// from censored win/loss observations. For a cell with cumulative loss
/// count D and trial count N, each observation multiplies (1 - D/N) into a
/// running product; the estimate is 1 minus that product. Unobserved cells
/// report the prior 1.
class KaplanMeierTable {
public:
    KaplanMeierTable(std::size_t m, std::size_t n) : n_(n), cells_(m * n) {}

    void update(std::size_t platform, std::size_t bid_index, bool won);

    /// In [0,1]: 0 when the bid never lost, 1 before any observation or
    /// after an opening loss.
    double estimate(std::size_t platform, std::size_t bid_index) const;

    std::uint64_t losses(std::size_t platform, std::size_t bid_index) const { return cell(platform, bid_index).losses; }
    std::uint64_t trials(std::size_t platform, std::size_t bid_index) const { return cell(platform, bid_index).trials; }

private:
    struct Cell {
        std::uint64_t losses = 0;
        std::uint64_t trials = 0;
        double product = 1.0;
    };

    const Cell& cell(std::size_t i, std::size_t j) const { return cells_[i * n_ + j]; }

    std::size_t n_;
    std::vector<Cell> cells_;
};

} // namespace multibid
