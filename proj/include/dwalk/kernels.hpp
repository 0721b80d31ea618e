#pragma once

// Hot loops. Each kernel has a plain serial reference (kept for tests and the
// benchmark) and an OpenMP production version. Production kernels give
// results independent of the thread count.

#include <cstddef>
#include <span>
#include <vector>

#include "dwalk/chain.hpp"

namespace dwalk {

/// Dense row-major block of k distributions over n states.
struct RowBlock {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    RowBlock() = default;
    RowBlock(std::size_t k, std::size_t n) : rows(k), cols(n), data(k * n, 0.0) {}

    std::span<double> row(std::size_t i) noexcept { return {data.data() + i * cols, cols}; }
    std::span<const double> row(std::size_t i) const noexcept { return {data.data() + i * cols, cols}; }
};

namespace kernels {

namespace serial {

/// y = x P, scattering each row (push).
void propagate(const Chain& c, std::span<const double> x, std::span<double> y);
void propagate_many(const Chain& c, const RowBlock& x, RowBlock& y);
/// max over row pairs of (1/2) sum_x |a_x - b_x|; 0 for fewer than two rows.
double max_pairwise_tv(const RowBlock& rows);
/// max over rows and states of |row(x) - pi(x)|.
double max_abs_deviation(const RowBlock& rows, std::span<const double> pi);

} // namespace serial

/// y = x P, gathering each column (pull); parallel over states.
void propagate(const Chain& c, std::span<const double> x, std::span<double> y);
/// Row-wise propagation, parallel over rows.
void propagate_many(const Chain& c, const RowBlock& x, RowBlock& y);
/// Cache-blocked, parallel over block pairs.
double max_pairwise_tv(const RowBlock& rows);
double max_abs_deviation(const RowBlock& rows, std::span<const double> pi);
/// Per-row max |row(x) - pi(x)|.
std::vector<double> row_abs_deviation(const RowBlock& rows, std::span<const double> pi);

/// Threads the parallel kernels may use (DWALK_THREADS caps it).
int thread_count();

} // namespace kernels
} // namespace dwalk
