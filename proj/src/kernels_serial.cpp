#include <algorithm>
#include <cmath>

#include "dwalk/kernels.hpp"

namespace dwalk::kernels::serial {

void propagate(const Chain& c, std::span<const double> x, std::span<double> y) {
    std::fill(y.begin(), y.end(), 0.0);
    for (Vertex u = 0; u < c.n_states(); ++u) {
        const double mass = x[u];
        if (mass == 0.0) continue;
        auto t = c.row_targets(u);
        auto p = c.row_probs(u);
        for (std::size_t k = 0; k < t.size(); ++k) {
            y[t[k]] += mass * p[k];
        }
    }
}

void propagate_many(const Chain& c, const RowBlock& x, RowBlock& y) {
    for (std::size_t i = 0; i < x.rows; ++i) {
        propagate(c, x.row(i), y.row(i));
    }
}

double max_pairwise_tv(const RowBlock& rows) {
    double best = 0.0;
    for (std::size_t i = 0; i < rows.rows; ++i) {
        auto a = rows.row(i);
        for (std::size_t j = i + 1; j < rows.rows; ++j) {
            auto b = rows.row(j);
            double s = 0.0;
            for (std::size_t x = 0; x < rows.cols; ++x) {
                s += std::abs(a[x] - b[x]);
            }
            best = std::max(best, 0.5 * s);
        }
    }
    return best;
}

double max_abs_deviation(const RowBlock& rows, std::span<const double> pi) {
    double best = 0.0;
    for (std::size_t i = 0; i < rows.rows; ++i) {
        auto a = rows.row(i);
        for (std::size_t x = 0; x < rows.cols; ++x) {
            best = std::max(best, std::abs(a[x] - pi[x]));
        }
    }
    return best;
}

} // namespace dwalk::kernels::serial
