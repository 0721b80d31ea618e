#include "dwalk/chain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "dwalk/error.hpp"
#include "dwalk/kernels.hpp"

namespace dwalk {

Dist::Dist(std::vector<double> probs) : probs_(std::move(probs)) {
    double total = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0)) throw ValidationError("distribution has a negative or NaN entry");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw ValidationError("distribution mass " + std::to_string(total) + " differs from 1");
    }
}

Dist Dist::point(std::size_t n, Vertex v) {
    if (v >= n) throw ValidationError("point mass outside state space");
    std::vector<double> p(n, 0.0);
    p[v] = 1.0;
    return unchecked(std::move(p));
}

Dist Dist::uniform(std::size_t n) { return unchecked(std::vector<double>(n, 1.0 / static_cast<double>(n))); }

Dist Dist::unchecked(std::vector<double> probs) {
    Dist d;
    d.probs_ = std::move(probs);
    return d;
}

Chain Chain::from_rows(std::size_t n, std::vector<std::size_t> offsets, std::vector<Vertex> targets,
                       std::vector<double> probs, ChainOrigin origin) {
    Chain c;
    for (std::size_t u = 0; u < n; ++u) {
        double sum = 0.0;
        for (std::size_t k = offsets[u]; k < offsets[u + 1]; ++k) {
            if (!(probs[k] > 0.0 && probs[k] <= 1.0)) {
                throw InvariantError("transition probability outside (0,1] in row " + std::to_string(u));
            }
            sum += probs[k];
        }
        if (std::abs(sum - 1.0) > 1e-12) {
            throw InvariantError("row " + std::to_string(u) + " sums to " + std::to_string(sum));
        }
    }
    c.offsets_ = std::move(offsets);
    c.targets_ = std::move(targets);
    c.probs_ = std::move(probs);
    c.origin_ = origin;

    c.col_offsets_.assign(n + 1, 0);
    for (Vertex t : c.targets_) ++c.col_offsets_[t + 1];
    for (std::size_t i = 0; i < n; ++i) c.col_offsets_[i + 1] += c.col_offsets_[i];
    c.col_sources_.resize(c.targets_.size());
    c.col_probs_.resize(c.targets_.size());
    std::vector<std::size_t> fill(c.col_offsets_.begin(), c.col_offsets_.end() - 1);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t k = c.offsets_[u]; k < c.offsets_[u + 1]; ++k) {
            const std::size_t slot = fill[c.targets_[k]]++;
            c.col_sources_[slot] = static_cast<Vertex>(u);
            c.col_probs_[slot] = c.probs_[k];
        }
    }
    return c;
}

double Chain::prob(Vertex x, Vertex y) const noexcept {
    auto t = row_targets(x);
    auto it = std::lower_bound(t.begin(), t.end(), y);
    if (it == t.end() || *it != y) return 0.0;
    return row_probs(x)[static_cast<std::size_t>(it - t.begin())];
}

Chain chain_from(const Digraph& g) {
    const std::size_t n = g.n();
    std::vector<std::size_t> offsets(n + 1, 0);
    std::vector<Vertex> targets;
    std::vector<double> probs;
    targets.reserve(g.edge_count());
    probs.reserve(g.edge_count());
    for (Vertex u = 0; u < n; ++u) {
        const std::size_t deg = g.out_degree(u);
        if (deg == 0) {
            throw ValidationError("walk undefined at sink vertex " + std::to_string(u));
        }
        const double p = 1.0 / static_cast<double>(deg);
        for (Vertex v : g.out(u)) {
            targets.push_back(v);
            probs.push_back(p);
        }
        offsets[u + 1] = targets.size();
    }
    return Chain::from_rows(n, std::move(offsets), std::move(targets), std::move(probs));
}

Dist step(const Chain& c, const Dist& d) {
    if (d.size() != c.n_states()) throw ValidationError("distribution size does not match chain");
    std::vector<double> out(c.n_states());
    kernels::propagate(c, d.probs(), out);
    return Dist::unchecked(std::move(out));
}

namespace {

std::size_t reach(const Chain& c, bool forward) {
    const std::size_t n = c.n_states();
    std::vector<char> seen(n, 0);
    std::vector<Vertex> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        const Vertex u = stack.back();
        stack.pop_back();
        for (Vertex w : forward ? c.row_targets(u) : c.col_sources(u)) {
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                stack.push_back(w);
            }
        }
    }
    return count;
}

} // namespace

bool is_irreducible(const Chain& c) {
    if (c.n_states() == 0) return false;
    return reach(c, true) == c.n_states() && reach(c, false) == c.n_states();
}

double stationary_residual(const Chain& c, std::span<const double> d) {
    std::vector<double> next(c.n_states());
    kernels::propagate(c, d, next);
    double r = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) r += std::abs(next[i] - d[i]);
    return r;
}

StationaryResult stationary(const Chain& c, double tol, std::size_t max_iters) {
    if (!(tol > 0.0)) throw ValidationError("stationary tolerance must be positive");
    if (!is_irreducible(c)) throw ValidationError("chain is not irreducible (digraph not strongly connected)");
    const std::size_t n = c.n_states();
    std::vector<double> x(n, 1.0 / static_cast<double>(n));
    std::vector<double> y(n);

    bool averaged = false;
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_at = 0;
    double residual = best;
    constexpr std::size_t kStallWindow = 200;

    for (std::size_t it = 0; it < max_iters; ++it) {
        kernels::propagate(c, x, y);
        residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) residual += std::abs(y[i] - x[i]);
        if (residual <= tol) {
            return {Dist::unchecked(std::move(x)), residual, it, averaged};
        }
        if (residual < 0.5 * best) {
            best = residual;
            best_at = it;
        } else if (!averaged && it - best_at > kStallWindow) {
            averaged = true;
            best_at = it;
        }
        if (averaged) {
            for (std::size_t i = 0; i < n; ++i) x[i] = 0.5 * (x[i] + y[i]);
        } else {
            x.swap(y);
        }
        if (it % 64 == 63) {
            const double total = std::accumulate(x.begin(), x.end(), 0.0);
            for (double& v : x) v /= total;
        }
    }
    throw StationaryCapError("stationary: no convergence after " + std::to_string(max_iters) +
                                 " iterations (last residual " + std::to_string(residual) + ")",
                             residual);
}

Dist stationary_dense(const Chain& c) {
    const auto n = static_cast<Eigen::Index>(c.n_states());
    if (n > 2000) throw ValidationError("dense stationary solve limited to n <= 2000");
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index u = 0; u < n; ++u) {
        auto t = c.row_targets(static_cast<Vertex>(u));
        auto p = c.row_probs(static_cast<Vertex>(u));
        for (std::size_t k = 0; k < t.size(); ++k) a(t[k], u) += p[k];  // (P^T)
    }
    a -= Eigen::MatrixXd::Identity(n, n);
    a.row(n - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(n - 1) = 1.0;
    Eigen::VectorXd pi = a.fullPivLu().solve(b);
    std::vector<double> out(pi.data(), pi.data() + n);
    for (double& v : out) v = std::max(v, 0.0);
    const double total = std::accumulate(out.begin(), out.end(), 0.0);
    for (double& v : out) v /= total;
    return Dist::unchecked(std::move(out));
}

std::vector<double> avoid_trace(const Chain& c, const Dist& start, std::span<const Vertex> taboo,
                                std::size_t from_step, std::size_t to_step) {
    if (start.size() != c.n_states()) throw ValidationError("start distribution size does not match chain");
    for (Vertex t : taboo) {
        if (t >= c.n_states()) throw ValidationError("taboo state out of range");
    }
    if (from_step > to_step) return {};
    std::vector<double> x(start.vec());
    std::vector<double> y(x.size());
    for (std::size_t s = 0; s < from_step; ++s) {
        kernels::propagate(c, x, y);
        x.swap(y);
    }
    std::vector<double> survival;
    survival.reserve(to_step - from_step + 1);
    for (std::size_t s = from_step;; ++s) {
        for (Vertex t : taboo) x[t] = 0.0;
        survival.push_back(std::accumulate(x.begin(), x.end(), 0.0));
        if (s == to_step) break;
        kernels::propagate(c, x, y);
        x.swap(y);
    }
    return survival;
}

double avoid_prob(const Chain& c, const Dist& start, std::span<const Vertex> taboo, std::size_t from_step,
                  std::size_t to_step) {
    if (from_step > to_step) return 1.0;
    return avoid_trace(c, start, taboo, from_step, to_step).back();
}

double avoid_prob(const Chain& c, const Dist& start, Vertex taboo, std::size_t from_step, std::size_t to_step) {
    const Vertex t[] = {taboo};
    return avoid_prob(c, start, t, from_step, to_step);
}

Vertex contracted_index(const ChainOrigin& origin, Vertex x) {
    if (x == origin.v || x == origin.w) return origin.sigma;
    return x > origin.removed ? x - 1 : x;
}

Chain contract(const Chain& c, Vertex v, Vertex w) {
    const std::size_t n = c.n_states();
    if (v >= n || w >= n) throw ValidationError("contract: state out of range");
    if (v == w) throw ValidationError("contract: v and w must differ");
    if (!c.is_plain()) throw ValidationError("contract: chain must be plain (uncontracted)");

    ChainOrigin origin{true, v, w, std::min(v, w), std::max(v, w)};
    const std::size_t m = n - 1;
    std::vector<std::size_t> offsets(m + 1, 0);
    std::vector<Vertex> targets;
    std::vector<double> probs;
    targets.reserve(c.nnz());
    probs.reserve(c.nnz());

    std::vector<std::pair<Vertex, double>> row;
    auto append = [&](Vertex src, double weight) {
        auto t = c.row_targets(src);
        auto p = c.row_probs(src);
        for (std::size_t k = 0; k < t.size(); ++k) row.emplace_back(contracted_index(origin, t[k]), weight * p[k]);
    };
    for (Vertex x = 0; x < n; ++x) {
        if (x == origin.removed) continue;
        row.clear();
        if (x == origin.sigma) {
            append(v, 0.5);
            append(w, 0.5);
        } else {
            append(x, 1.0);
        }
        std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (!targets.empty() && targets.size() > offsets[contracted_index(origin, x)] &&
                targets.back() == row[k].first) {
                probs.back() += row[k].second;
            } else {
                targets.push_back(row[k].first);
                probs.push_back(row[k].second);
            }
        }
        offsets[contracted_index(origin, x) + 1] = targets.size();
    }
    return Chain::from_rows(m, std::move(offsets), std::move(targets), std::move(probs), origin);
}

} // namespace dwalk
