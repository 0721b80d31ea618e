#include "dwalk/walker.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <numbers>

#include "dwalk/error.hpp"
#include "dwalk/kernels.hpp"
#include "dwalk/rng.hpp"

namespace dwalk {

std::uint64_t default_step_cap(std::size_t n) {
    const double nd = static_cast<double>(std::max<std::size_t>(n, 2));
    return std::max<std::uint64_t>(10000, static_cast<std::uint64_t>(1e4 * nd * std::log(nd)));
}

WalkRun simulate_cover(const Digraph& g, Vertex start, std::uint64_t seed, std::uint64_t step_cap) {
    const std::size_t n = g.n();
    if (start >= n) throw ValidationError("start vertex out of range");
    if (step_cap == 0) step_cap = default_step_cap(n);

    WalkRun run;
    run.start = start;
    run.seed = seed;
    run.first_visit.assign(n, std::numeric_limits<std::uint64_t>::max());
    run.first_visit[start] = 0;
    run.last_vertex = start;

    Rng rng(seed);
    std::size_t unvisited = n - 1;
    Vertex at = start;
    std::uint64_t t = 0;
    while (unvisited > 0) {
        if (t == step_cap) {
            throw RuntimeError("cover walk hit the step cap " + std::to_string(step_cap) + " with " +
                               std::to_string(n - unvisited) + " of " + std::to_string(n) + " vertices visited");
        }
        auto nbrs = g.out(at);
        if (nbrs.empty()) throw ValidationError("walk reached sink vertex " + std::to_string(at));
        at = nbrs[rng.below(nbrs.size())];
        ++t;
        if (run.first_visit[at] == std::numeric_limits<std::uint64_t>::max()) {
            run.first_visit[at] = t;
            run.last_vertex = at;
            --unvisited;
        }
    }
    run.cover_time = t;
    return run;
}

StartPolicy parse_start_policy(const std::string& text) {
    if (text == "uniform" || text == "uniform-random") return StartPolicy::uniform();
    auto value_after = [&](const std::string& prefix) -> std::optional<std::uint64_t> {
        if (text.rfind(prefix, 0) != 0) return std::nullopt;
        try {
            std::size_t used = 0;
            const auto v = std::stoull(text.substr(prefix.size()), &used);
            if (used + prefix.size() != text.size()) return std::nullopt;
            return v;
        } catch (const std::exception&) {
            return std::nullopt;
        }
    };
    if (auto v = value_after("fixed:")) return StartPolicy::fixed(static_cast<Vertex>(*v));
    if (auto k = value_after("sampled:")) return StartPolicy::sampled(*k);
    throw ValidationError("start policy must be uniform, fixed:<v> or sampled:<k>, got '" + text + "'");
}

CoverSummary cover_time_mc(const Digraph& g, const StartPolicy& starts, std::size_t runs, std::uint64_t seed,
                           std::uint64_t step_cap) {
    const std::size_t n = g.n();
    if (runs == 0) throw ValidationError("runs must be positive");
    if (!is_strongly_connected(g)) throw ValidationError("cover time needs a strongly connected digraph");
    if (step_cap == 0) step_cap = default_step_cap(n);

    std::vector<Vertex> start_of(runs);
    switch (starts.kind) {
    case StartPolicy::Kind::fixed:
        if (starts.vertex >= n) throw ValidationError("fixed start vertex out of range");
        std::fill(start_of.begin(), start_of.end(), starts.vertex);
        break;
    case StartPolicy::Kind::uniform_random:
        for (std::size_t i = 0; i < runs; ++i) {
            start_of[i] = static_cast<Vertex>(Rng(derive_seed(seed, i, 1)).below(n));
        }
        break;
    case StartPolicy::Kind::all_sampled: {
        const std::size_t k = std::clamp<std::size_t>(starts.count, 1, n);
        std::vector<Vertex> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<Vertex>(i);
        Rng rng(derive_seed(seed, std::numeric_limits<std::uint64_t>::max()));
        for (std::size_t i = 0; i < k; ++i) std::swap(all[i], all[i + rng.below(n - i)]);
        for (std::size_t i = 0; i < runs; ++i) start_of[i] = all[i % k];
        break;
    }
    }

    CoverSummary summary;
    summary.step_cap = step_cap;
    summary.runs.resize(runs);
    std::exception_ptr failure;
    const auto r = static_cast<std::ptrdiff_t>(runs);
#pragma omp parallel for schedule(dynamic, 1) num_threads(kernels::thread_count())
    for (std::ptrdiff_t i = 0; i < r; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        const std::uint64_t run_seed = derive_seed(seed, idx);
        try {
            auto w = simulate_cover(g, start_of[idx], run_seed, step_cap);
            summary.runs[idx] = {idx, run_seed, start_of[idx], w.cover_time};
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    // Aggregation in run order keeps the summary reproducible.
    double sum = 0.0;
    std::map<Vertex, std::pair<double, std::size_t>> per_start;
    for (const auto& rec : summary.runs) {
        sum += static_cast<double>(rec.cover_time);
        auto& acc = per_start[rec.start];
        acc.first += static_cast<double>(rec.cover_time);
        ++acc.second;
    }
    summary.mean = sum / static_cast<double>(runs);
    double ss = 0.0;
    for (const auto& rec : summary.runs) {
        const double dlt = static_cast<double>(rec.cover_time) - summary.mean;
        ss += dlt * dlt;
    }
    summary.stddev = runs > 1 ? std::sqrt(ss / static_cast<double>(runs - 1)) : 0.0;
    summary.ci95 = 1.96 * summary.stddev / std::sqrt(static_cast<double>(runs));
    for (const auto& [v, acc] : per_start) {
        summary.max_over_starts = std::max(summary.max_over_starts, acc.first / static_cast<double>(acc.second));
    }
    return summary;
}

ReturnPoly return_poly(const Chain& c, Vertex v, std::size_t T) {
    if (T < 1) throw ValidationError("return polynomial horizon must be at least 1");
    if (v >= c.n_states()) throw ValidationError("vertex out of range");
    ReturnPoly rp;
    rp.coeffs.reserve(T);
    std::vector<double> x(c.n_states(), 0.0), y(c.n_states());
    x[v] = 1.0;
    rp.coeffs.push_back(1.0);
    for (std::size_t t = 1; t < T; ++t) {
        kernels::propagate(c, x, y);
        x.swap(y);
        rp.coeffs.push_back(x[v]);
    }
    return rp;
}

std::complex<double> eval_R(const ReturnPoly& rp, std::complex<double> z) {
    std::complex<double> acc = 0.0;
    for (auto it = rp.coeffs.rbegin(); it != rp.coeffs.rend(); ++it) {
        acc = acc * z + *it;
    }
    return acc;
}

MinModulus min_modulus_scan(const ReturnPoly& rp, double K, std::size_t samples) {
    if (!(K > 0.0)) throw ValidationError("K must be positive");
    if (samples == 0) throw ValidationError("samples must be positive");
    MinModulus mm;
    mm.lambda = 1.0 / (K * static_cast<double>(rp.horizon()));
    mm.radius = 1.0 + mm.lambda;
    mm.min_abs = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < samples; ++s) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(s) / static_cast<double>(samples);
        const double a = std::abs(eval_R(rp, std::polar(mm.radius, theta)));
        if (a < mm.min_abs) {
            mm.min_abs = a;
            mm.argument = theta;
        }
    }
    return mm;
}

GeomLawTable geometric_law_check(const Chain& c, const Dist& pi, Vertex v, std::size_t T, Vertex u,
                                 const std::vector<std::size_t>& t_grid) {
    if (v >= c.n_states() || u >= c.n_states()) throw ValidationError("vertex out of range");
    if (pi.size() != c.n_states()) throw ValidationError("stationary vector size does not match chain");
    GeomLawTable table;
    table.v = v;
    table.u = u;
    table.T = T;
    table.pi_v = pi[v];
    table.R_v = eval_R(return_poly(c, v, std::max<std::size_t>(T, 1)), 1.0).real();
    table.p_v = table.pi_v / table.R_v;
    if (t_grid.empty()) return table;

    std::size_t t_max = 0;
    for (auto t : t_grid) {
        if (t < T) throw ValidationError("grid times must be at least T");
        t_max = std::max(t_max, t);
    }
    const Vertex taboo[] = {v};
    const auto trace = avoid_trace(c, Dist::point(c.n_states(), u), taboo, T, t_max);
    for (auto t : t_grid) {
        GeomLawRow row;
        row.t = t;
        row.exact_avoid = trace[t - T];
        row.geometric_pred = std::pow(1.0 + table.p_v, -static_cast<double>(t - T));
        row.ratio = row.exact_avoid / row.geometric_pred;
        row.degenerate = row.exact_avoid == 0.0 || row.exact_avoid == 1.0;
        table.rows.push_back(row);
    }
    return table;
}

} // namespace dwalk
