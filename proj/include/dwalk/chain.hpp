#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dwalk/digraph.hpp"

namespace dwalk {

/// Probability vector over states.
class Dist {
public:
    Dist() = default;
    /// Checks entries >= 0 and total mass 1 within 1e-12.
    explicit Dist(std::vector<double> probs);

    static Dist point(std::size_t n, Vertex v);
    static Dist uniform(std::size_t n);
    /// No validation; for intermediate results known to be stochastic.
    static Dist unchecked(std::vector<double> probs);

    std::size_t size() const noexcept { return probs_.size(); }
    double operator[](std::size_t i) const noexcept { return probs_[i]; }
    std::span<const double> probs() const noexcept { return probs_; }
    const std::vector<double>& vec() const noexcept { return probs_; }

private:
    std::vector<double> probs_;
};

/// Records how a chain was built. For a contraction, `sigma` is the index of
/// the merged state in the new chain and `removed` the dropped original id.
struct ChainOrigin {
    bool contracted = false;
    Vertex v = 0;
    Vertex w = 0;
    Vertex sigma = 0;
    Vertex removed = 0;
};

/// Row-stochastic sparse transition operator. Stores rows and, for pull-style
/// kernels, the transpose.
class Chain {
public:
    Chain() = default;

    /// Rows given as CSR with strictly increasing targets per row. Throws
    /// InvariantError if a row does not sum to 1 within 1e-12 or holds a
    /// probability outside (0,1].
    static Chain from_rows(std::size_t n, std::vector<std::size_t> offsets, std::vector<Vertex> targets,
                           std::vector<double> probs, ChainOrigin origin = {});

    std::size_t n_states() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t nnz() const noexcept { return targets_.size(); }

    std::span<const Vertex> row_targets(Vertex u) const noexcept {
        return {targets_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
    }
    std::span<const double> row_probs(Vertex u) const noexcept {
        return {probs_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
    }
    std::span<const Vertex> col_sources(Vertex y) const noexcept {
        return {col_sources_.data() + col_offsets_[y], col_offsets_[y + 1] - col_offsets_[y]};
    }
    std::span<const double> col_probs(Vertex y) const noexcept {
        return {col_probs_.data() + col_offsets_[y], col_offsets_[y + 1] - col_offsets_[y]};
    }

    /// P(x, y); zero when absent.
    double prob(Vertex x, Vertex y) const noexcept;

    const ChainOrigin& origin() const noexcept { return origin_; }
    bool is_plain() const noexcept { return !origin_.contracted; }

private:
    std::vector<std::size_t> offsets_;
    std::vector<Vertex> targets_;
    std::vector<double> probs_;
    std::vector<std::size_t> col_offsets_;
    std::vector<Vertex> col_sources_;
    std::vector<double> col_probs_;
    ChainOrigin origin_;
};

/// Simple random walk: row u uniform over the out-neighbours of u. Throws
/// ValidationError naming the first sink.
Chain chain_from(const Digraph& g);

/// One application of P.
Dist step(const Chain& c, const Dist& d);

/// True iff the directed support graph of the chain is strongly connected.
bool is_irreducible(const Chain& c);

struct StationaryResult {
    Dist pi;
    double residual = 0.0;  // ||pi P - pi||_1
    std::size_t iterations = 0;
    bool averaged = false;  // switched to iterate averaging (periodic chain)
};

/// Power iteration from the uniform start. If plain iteration stalls, the
/// iterate sequence is smoothed by averaging consecutive iterates; the chain
/// itself is unchanged. Throws ValidationError if the chain is reducible and
/// RuntimeError (carrying the last residual) if max_iters is exceeded.
StationaryResult stationary(const Chain& c, double tol = 1e-12, std::size_t max_iters = 100000);

/// Dense direct solve of pi P = pi, sum pi = 1. Cross-check oracle, n <= 2000.
Dist stationary_dense(const Chain& c);

/// L1 residual ||d P - d||_1.
double stationary_residual(const Chain& c, std::span<const double> d);

/// Exact probability that the walk from `start` avoids every taboo state at
/// each step in [from_step, to_step]. Returns 1 for an empty interval.
double avoid_prob(const Chain& c, const Dist& start, std::span<const Vertex> taboo, std::size_t from_step,
                  std::size_t to_step);
double avoid_prob(const Chain& c, const Dist& start, Vertex taboo, std::size_t from_step, std::size_t to_step);

/// Survival probabilities for every s in [from_step, to_step]: entry i is
/// avoid_prob(..., from_step, from_step + i).
std::vector<double> avoid_trace(const Chain& c, const Dist& start, std::span<const Vertex> taboo,
                                std::size_t from_step, std::size_t to_step);

struct HittingTimes {
    std::vector<double> steps;
    std::vector<bool> reachable;  // false: target unreachable, expected time infinite
    double residual = 0.0;        // max |h - 1 - P h| over reachable non-target states
};

/// Expected steps to reach `target`: h(target) = 0, h(x) = 1 + sum_y P(x,y) h(y).
/// States that cannot reach the target are flagged, never given a sentinel value.
HittingTimes hitting_time(const Chain& c, Vertex target);

/// Merges states v and w into one state. The merged state takes index
/// min(v,w); max(v,w) is removed and later ids shift down by one.
/// Row of the merged state is (P(v,.) + P(w,.))/2; column is P(.,v) + P(.,w).
Chain contract(const Chain& c, Vertex v, Vertex w);

/// Index in the contracted chain of original state x (v and w map to sigma).
Vertex contracted_index(const ChainOrigin& origin, Vertex x);

struct MixOptions {
    double threshold = 1e-9;
    /// nullopt: propagate every point mass (exact). Otherwise a seeded sample
    /// of this many sources.
    std::optional<std::size_t> sample_sources;
    std::uint64_t seed = 0;
    std::size_t step_cap = 10000;
    /// Compute the pairwise variation distance trace.
    bool record_dbar = true;
};

struct MixReport {
    std::size_t T = 0;
    double threshold = 0.0;
    std::vector<double> d_trace;     // d(t), t = 0..T
    std::vector<double> dbar_trace;  // dbar(t), t = 0..T over the source set
    bool sampled = false;
    std::vector<Vertex> sources;
    /// max_x |P_u^(t)(x) - pi_x| per source u at t = T, in source order
    std::vector<double> final_source_deviation;
};

/// Default threshold min(n^-3, 1e-9).
double default_mix_threshold(std::size_t n);

/// T = min{t : max_u max_x |P_u^(t)(x) - pi_x| <= threshold}. Throws
/// ValidationError for threshold <= 0 and MixingCapError at the step cap.
MixReport mixing(const Chain& c, const Dist& pi, const MixOptions& opts);

/// Violations of dbar(s+t) <= dbar(s) dbar(t) (1 + slack) + abs_floor;
/// returns the offending (s, t) pairs. abs_floor absorbs rounding noise when
/// the inequality is tight at tiny values (e.g. K_n, where it is an equality).
std::vector<std::pair<std::size_t, std::size_t>> submultiplicativity_violations(const std::vector<double>& dbar,
                                                                               double slack = 1e-9,
                                                                               double abs_floor = 0.0);

} // namespace dwalk
