#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "dwalk/chain.hpp"
#include "dwalk/digraph.hpp"

namespace dwalk {

struct WalkRun {
    Vertex start = 0;
    std::uint64_t seed = 0;
    std::uint64_t cover_time = 0;
    Vertex last_vertex = 0;
    std::vector<std::uint64_t> first_visit;
};

/// 10^4 n ln n, at least 10^4.
std::uint64_t default_step_cap(std::size_t n);

/// One seeded walk until every vertex has been visited. Throws RuntimeError
/// (with the visited count) when the step cap is hit.
WalkRun simulate_cover(const Digraph& g, Vertex start, std::uint64_t seed, std::uint64_t step_cap = 0);

struct StartPolicy {
    enum class Kind { fixed, uniform_random, all_sampled };
    Kind kind = Kind::uniform_random;
    Vertex vertex = 0;     // fixed
    std::size_t count = 0; // all_sampled: number of distinct start vertices

    static StartPolicy fixed(Vertex v) { return {Kind::fixed, v, 0}; }
    static StartPolicy uniform() { return {Kind::uniform_random, 0, 0}; }
    static StartPolicy sampled(std::size_t k) { return {Kind::all_sampled, 0, k}; }
};

StartPolicy parse_start_policy(const std::string& text);

struct CoverRecord {
    std::size_t run_id = 0;
    std::uint64_t seed = 0;
    Vertex start = 0;
    std::uint64_t cover_time = 0;
};

struct CoverSummary {
    double mean = 0.0;
    double stddev = 0.0;
    double ci95 = 0.0;             // half-width, 1.96 sd / sqrt(runs)
    double max_over_starts = 0.0;  // max over start vertices of the per-start mean
    std::uint64_t step_cap = 0;
    std::vector<CoverRecord> runs;  // ordered by run_id
};

/// Independent runs; run i uses seed derive_seed(seed, i). For all_sampled the
/// runs are spread round-robin over `count` distinct seeded start vertices.
CoverSummary cover_time_mc(const Digraph& g, const StartPolicy& starts, std::size_t runs, std::uint64_t seed,
                           std::uint64_t step_cap = 0);

/// r_0..r_{T-1}: probabilities of being back at v after j steps.
struct ReturnPoly {
    std::vector<double> coeffs;
    std::size_t horizon() const noexcept { return coeffs.size(); }
};

ReturnPoly return_poly(const Chain& c, Vertex v, std::size_t T);

std::complex<double> eval_R(const ReturnPoly& rp, std::complex<double> z);

struct MinModulus {
    double radius = 0.0;  // 1 + lambda
    double lambda = 0.0;  // 1 / (K T)
    double min_abs = 0.0;
    double argument = 0.0;  // angle of the minimiser
};

/// Scans |R_T(z)| over the circle |z| = 1 + 1/(K T) at `samples` equally
/// spaced angles.
MinModulus min_modulus_scan(const ReturnPoly& rp, double K, std::size_t samples = 4096);

struct GeomLawRow {
    std::size_t t = 0;
    double exact_avoid = 0.0;
    double geometric_pred = 0.0;
    double ratio = 0.0;
    bool degenerate = false;  // exact value 0 or 1: excluded from ratio assertions
};

struct GeomLawTable {
    Vertex v = 0;
    Vertex u = 0;
    std::size_t T = 0;
    double pi_v = 0.0;
    double R_v = 0.0;
    double p_v = 0.0;  // pi_v / R_v; the (1 + O(T pi_v)) factor is dropped
    std::vector<GeomLawRow> rows;
};

/// Compares the exact probability that the walk from u avoids v during
/// [T, t] with the geometric prediction (1 + p_v)^-(t - T).
GeomLawTable geometric_law_check(const Chain& c, const Dist& pi, Vertex v, std::size_t T, Vertex u,
                                 const std::vector<std::size_t>& t_grid);

} // namespace dwalk
