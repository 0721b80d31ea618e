#include <algorithm>
#include <cmath>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "dwalk/chain.hpp"
#include "dwalk/error.hpp"

namespace dwalk {

HittingTimes hitting_time(const Chain& c, Vertex target) {
    const std::size_t n = c.n_states();
    if (target >= n) throw ValidationError("target state out of range");

    HittingTimes out;
    out.steps.assign(n, 0.0);
    out.reachable.assign(n, false);

    // States that can reach the target: reverse search along columns.
    std::vector<Vertex> stack{target};
    out.reachable[target] = true;
    while (!stack.empty()) {
        const Vertex y = stack.back();
        stack.pop_back();
        for (Vertex x : c.col_sources(y)) {
            if (!out.reachable[x]) {
                out.reachable[x] = true;
                stack.push_back(x);
            }
        }
    }
    // A state that can reach the target but may also wander into a region that
    // cannot has infinite expected time too.
    bool changed = true;
    while (changed) {
        changed = false;
        for (Vertex x = 0; x < n; ++x) {
            if (!out.reachable[x] || x == target) continue;
            for (Vertex y : c.row_targets(x)) {
                if (!out.reachable[y]) {
                    out.reachable[x] = false;
                    changed = true;
                    break;
                }
            }
        }
    }

    std::vector<std::ptrdiff_t> index(n, -1);
    std::vector<Vertex> states;
    for (Vertex x = 0; x < n; ++x) {
        if (out.reachable[x] && x != target) {
            index[x] = static_cast<std::ptrdiff_t>(states.size());
            states.push_back(x);
        }
    }
    for (Vertex x = 0; x < n; ++x) {
        if (!out.reachable[x]) out.steps[x] = std::numeric_limits<double>::infinity();
    }
    if (states.empty()) return out;

    const auto m = static_cast<Eigen::Index>(states.size());
    std::vector<Eigen::Triplet<double>> trip;
    for (Eigen::Index i = 0; i < m; ++i) {
        const Vertex x = states[static_cast<std::size_t>(i)];
        trip.emplace_back(i, i, 1.0);
        auto t = c.row_targets(x);
        auto p = c.row_probs(x);
        for (std::size_t k = 0; k < t.size(); ++k) {
            if (index[t[k]] >= 0) trip.emplace_back(i, index[t[k]], -p[k]);
        }
    }
    Eigen::SparseMatrix<double> a(m, m);
    a.setFromTriplets(trip.begin(), trip.end());
    a.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success) throw RuntimeError("hitting_time: sparse factorization failed");
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m);
    Eigen::VectorXd h = lu.solve(ones);
    // One round of iterative refinement.
    Eigen::VectorXd r = ones - a * h;
    h += lu.solve(r);
    r = ones - a * h;
    out.residual = r.cwiseAbs().maxCoeff();

    for (Eigen::Index i = 0; i < m; ++i) out.steps[states[static_cast<std::size_t>(i)]] = h(i);
    return out;
}

} // namespace dwalk
