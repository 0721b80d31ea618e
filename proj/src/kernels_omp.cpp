#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include <omp.h>

#include "dwalk/kernels.hpp"

namespace dwalk::kernels {

int thread_count() {
    int threads = omp_get_max_threads();
    if (const char* cap = std::getenv("DWALK_THREADS")) {
        const int v = std::atoi(cap);
        if (v > 0) threads = std::min(threads, v);
    }
    return std::max(threads, 1);
}

namespace {

inline double gather(const Chain& c, std::span<const double> x, Vertex y) {
    auto src = c.col_sources(y);
    auto p = c.col_probs(y);
    double s = 0.0;
    for (std::size_t k = 0; k < src.size(); ++k) {
        s += x[src[k]] * p[k];
    }
    return s;
}

inline double l1_diff(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
#pragma omp simd reduction(+ : s)
    for (std::size_t x = 0; x < n; ++x) {
        s += std::abs(a[x] - b[x]);
    }
    return s;
}

constexpr std::size_t kTvBlock = 32;

} // namespace

void propagate(const Chain& c, std::span<const double> x, std::span<double> y) {
    const auto n = static_cast<std::ptrdiff_t>(c.n_states());
#pragma omp parallel for schedule(static) num_threads(thread_count()) if (n > 4096)
    for (std::ptrdiff_t v = 0; v < n; ++v) {
        y[v] = gather(c, x, static_cast<Vertex>(v));
    }
}

void propagate_many(const Chain& c, const RowBlock& x, RowBlock& y) {
    const auto k = static_cast<std::ptrdiff_t>(x.rows);
    const std::size_t n = c.n_states();
#pragma omp parallel for schedule(dynamic, 4) num_threads(thread_count())
    for (std::ptrdiff_t i = 0; i < k; ++i) {
        auto in = x.row(static_cast<std::size_t>(i));
        auto out = y.row(static_cast<std::size_t>(i));
        for (std::size_t v = 0; v < n; ++v) {
            out[v] = gather(c, in, static_cast<Vertex>(v));
        }
    }
}

double max_pairwise_tv(const RowBlock& rows) {
    const std::size_t k = rows.rows;
    const std::size_t n = rows.cols;
    if (k < 2) return 0.0;
    const std::size_t blocks = (k + kTvBlock - 1) / kTvBlock;
    // Enumerate upper-triangular block pairs so the parallel loop is flat.
    std::vector<std::pair<std::size_t, std::size_t>> tiles;
    tiles.reserve(blocks * (blocks + 1) / 2);
    for (std::size_t bi = 0; bi < blocks; ++bi) {
        for (std::size_t bj = bi; bj < blocks; ++bj) tiles.emplace_back(bi, bj);
    }
    double best = 0.0;
    const auto tile_count = static_cast<std::ptrdiff_t>(tiles.size());
#pragma omp parallel for schedule(dynamic, 1) reduction(max : best) num_threads(thread_count())
    for (std::ptrdiff_t t = 0; t < tile_count; ++t) {
        const auto [bi, bj] = tiles[static_cast<std::size_t>(t)];
        const std::size_t i_end = std::min(k, (bi + 1) * kTvBlock);
        const std::size_t j_end = std::min(k, (bj + 1) * kTvBlock);
        for (std::size_t i = bi * kTvBlock; i < i_end; ++i) {
            const double* a = rows.data.data() + i * n;
            const std::size_t j_begin = bi == bj ? i + 1 : bj * kTvBlock;
            for (std::size_t j = j_begin; j < j_end; ++j) {
                best = std::max(best, 0.5 * l1_diff(a, rows.data.data() + j * n, n));
            }
        }
    }
    return best;
}

std::vector<double> row_abs_deviation(const RowBlock& rows, std::span<const double> pi) {
    std::vector<double> dev(rows.rows, 0.0);
    const auto k = static_cast<std::ptrdiff_t>(rows.rows);
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (std::ptrdiff_t i = 0; i < k; ++i) {
        auto a = rows.row(static_cast<std::size_t>(i));
        double m = 0.0;
        for (std::size_t x = 0; x < rows.cols; ++x) {
            m = std::max(m, std::abs(a[x] - pi[x]));
        }
        dev[static_cast<std::size_t>(i)] = m;
    }
    return dev;
}

double max_abs_deviation(const RowBlock& rows, std::span<const double> pi) {
    auto dev = row_abs_deviation(rows, pi);
    return dev.empty() ? 0.0 : *std::max_element(dev.begin(), dev.end());
}

} // namespace dwalk::kernels
