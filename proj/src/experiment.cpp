#include "dwalk/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "dwalk/chain.hpp"
#include "dwalk/degree_theory.hpp"
#include "dwalk/error.hpp"
#include "dwalk/format.hpp"
#include "dwalk/kernels.hpp"
#include "dwalk/rng.hpp"
#include "dwalk/trees.hpp"
#include "dwalk/walker.hpp"

namespace dwalk {

std::vector<std::string> experiment_columns(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::pi_convergence:
        return {"max_rel_err", "mean_rel_err", "max_rel_err_normalized", "max_rel_err_deg_only",
                "max_rel_err_uniform", "residual"};
    case ExperimentKind::cover_convergence:
        return {"cover_mean", "formula", "ratio", "ratio_nlogn", "t0", "t1"};
    case ExperimentKind::mixing_scan:
        return {"T", "threshold", "T_bound", "dbar_violations", "d_at_T", "dbar_at_T"};
    case ExperimentKind::z_ratio:
        return {"depth", "min_ratio", "mean_ratio", "max_ratio", "min_z_over_exact", "violations",
                "succeeded_fraction"};
    case ExperimentKind::contraction:
        return {"t1", "T", "max_pi_gap_rel", "mean_pi_gap_rel", "max_factor_gap", "mean_factor_gap",
                "max_joint_over_product"};
    case ExperimentKind::connectivity_threshold:
        return {"np_low", "np_high", "connected_low", "connected_high"};
    }
    return {};
}

namespace {

Digraph sample_graph(const ExperimentSpec& spec, const GridPoint& pt, std::uint64_t seed) {
    return generate({pt.n, pt.p(), seed, spec.method});
}

void require_connected(const Digraph& g) {
    if (!is_strongly_connected(g)) throw RuntimeError("sampled digraph is not strongly connected");
}

double threshold_for(const ExperimentSpec& spec, std::size_t n) {
    return spec.mix_threshold ? *spec.mix_threshold : default_mix_threshold(n);
}

MixOptions mix_options(const ExperimentSpec& spec, std::size_t n, std::uint64_t seed, bool dbar) {
    MixOptions o;
    o.threshold = threshold_for(spec, n);
    if (n > 5000) o.sample_sources = 64;
    o.seed = seed;
    o.record_dbar = dbar;
    o.step_cap = 2000;
    return o;
}

std::vector<double> pi_convergence(const ExperimentSpec& spec, const GridPoint& pt, std::uint64_t seed) {
    const Digraph g = sample_graph(spec, pt, seed);
    require_connected(g);
    const Chain c = chain_from(g);
    const auto st = stationary(c, spec.stationary_tol);
    const auto pred = predict_pi(g, pt.p());
    double max_rel = 0, sum_rel = 0, max_norm = 0, max_deg = 0, max_uni = 0;
    for (Vertex v = 0; v < g.n(); ++v) {
        const double pv = st.pi[v];
        const double rel = std::abs(pv / pred.raw[v] - 1.0);
        max_rel = std::max(max_rel, rel);
        sum_rel += rel;
        max_norm = std::max(max_norm, std::abs(pv / pred.normalized[v] - 1.0));
        max_deg = std::max(max_deg, std::abs(pv / pred.deg_only[v] - 1.0));
        max_uni = std::max(max_uni, std::abs(pv / pred.uniform - 1.0));
    }
    return {max_rel, sum_rel / static_cast<double>(g.n()), max_norm, max_deg, max_uni, st.residual};
}

std::vector<double> cover_convergence(const ExperimentSpec& spec, const GridPoint& pt, std::uint64_t seed) {
    const Digraph g = sample_graph(spec, pt, seed);
    require_connected(g);
    const auto summary = cover_time_mc(g, StartPolicy::uniform(), spec.walks, derive_seed(seed, 1));
    const double nd = static_cast<double>(pt.n);
    const double formula = cover_formula(nd, pt.effective_d());
    return {summary.mean,
            formula,
            summary.mean / formula,
            summary.mean / (nd * std::log(nd)),
            (1.0 + spec.epsilon) * formula,
            (1.0 - spec.epsilon) * formula};
}

std::vector<double> mixing_scan(const ExperimentSpec& spec, const GridPoint& pt, std::uint64_t seed) {
    const Digraph g = sample_graph(spec, pt, seed);
    require_connected(g);
    const Chain c = chain_from(g);
    const auto st = stationary(c, spec.stationary_tol);
    const auto rep = mixing(c, st.pi, mix_options(spec, pt.n, derive_seed(seed, 2), true));
    const double ln_n = std::log(static_cast<double>(pt.n));
    const auto bad = submultiplicativity_violations(rep.dbar_trace);
    return {static_cast<double>(rep.T), rep.threshold, ln_n * ln_n, static_cast<double>(bad.size()),
            rep.d_trace.back(), rep.dbar_trace.back()};
}

std::vector<double> z_ratio(const ExperimentSpec& spec, const GridPoint& pt, std::uint64_t seed) {
    const Digraph g = sample_graph(spec, pt, seed);
    const double p = pt.p();
    const double np = static_cast<double>(pt.n) * p;
    const double m = static_cast<double>(pt.n) * static_cast<double>(pt.n - 1) * p;
    Rng rng(derive_seed(seed, 3));
    double min_ratio = std::numeric_limits<double>::infinity(), max_ratio = 0, sum_ratio = 0;
    double min_z_over_exact = std::numeric_limits<double>::infinity();
    std::size_t violations = 0, succeeded = 0, counted = 0;
    double depth = 0;
    for (std::size_t i = 0; i < spec.pairs; ++i) {
        const auto x = static_cast<Vertex>(rng.below(pt.n));
        const auto y = static_cast<Vertex>(rng.below(pt.n));
        if (g.in_degree(y) == 0) continue;
        double z = 0, exact = 0;
        bool ok = false;
        if (spec.z_up) {
            const auto r = z_upper_report(g, x, y, np, spec.eta);
            z = r.Z_up;
            exact = r.exact;
            ok = r.in_tree_succeeded;
            depth = static_cast<double>(r.depths.l0);
            if (r.remainder < -1e-12) ++violations;
        } else {
            const std::size_t ell = low_depth(pt.n, np);
            const auto r = z_lower(g, x, y, ell);
            z = r.Z;
            exact = k_step_probability(g, x, y, 2 * ell + 1);
            ok = r.in_tree_succeeded && r.out_tree_succeeded;
            depth = static_cast<double>(ell);
            if (z > exact + 1e-12) ++violations;
        }
        const double ratio = z * m / static_cast<double>(g.in_degree(y));
        min_ratio = std::min(min_ratio, ratio);
        max_ratio = std::max(max_ratio, ratio);
        sum_ratio += ratio;
        if (exact > 0) min_z_over_exact = std::min(min_z_over_exact, z / exact);
        succeeded += ok ? 1 : 0;
        ++counted;
    }
    if (counted == 0) throw RuntimeError("no sampled pair had a target with positive in-degree");
    const double cnt = static_cast<double>(counted);
    return {depth,          min_ratio,         sum_ratio / cnt,         max_ratio, min_z_over_exact,
            static_cast<double>(violations), static_cast<double>(succeeded) / cnt};
}

// Vertices whose in-degree equals the median in-degree, widened by one degree
// at a time until at least two are available.
std::vector<Vertex> median_degree_vertices(const Digraph& g) {
    std::vector<std::size_t> deg(g.n());
    for (Vertex v = 0; v < g.n(); ++v) deg[v] = g.in_degree(v);
    auto sorted = deg;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2), sorted.end());
    const std::size_t med = sorted[sorted.size() / 2];
    for (std::size_t width = 0;; ++width) {
        std::vector<Vertex> out;
        for (Vertex v = 0; v < g.n(); ++v) {
            const auto diff = deg[v] > med ? deg[v] - med : med - deg[v];
            if (diff <= width) out.push_back(v);
        }
        if (out.size() >= 2) return out;
    }
}

std::vector<double> contraction(const ExperimentSpec& spec, const GridPoint& pt, std::uint64_t seed) {
    const Digraph g = sample_graph(spec, pt, seed);
    require_connected(g);
    const Chain c = chain_from(g);
    const auto st = stationary(c, spec.stationary_tol);
    const auto mix = mixing(c, st.pi, mix_options(spec, pt.n, derive_seed(seed, 2), false));
    const std::size_t T = mix.T;
    const double t1d = (1.0 - spec.epsilon) * cover_formula(static_cast<double>(pt.n), pt.effective_d());
    const auto t1 = static_cast<std::size_t>(std::ceil(t1d));

    const auto candidates = median_degree_vertices(g);
    Rng rng(derive_seed(seed, 4));
    double max_gap = 0, sum_gap = 0, max_fac = 0, sum_fac = 0, max_joint = 0;
    for (std::size_t i = 0; i < spec.pairs; ++i) {
        const Vertex v = candidates[rng.below(candidates.size())];
        Vertex w = v;
        while (w == v) w = candidates[rng.below(candidates.size())];
        Vertex u = v;
        while (u == v || u == w) u = static_cast<Vertex>(rng.below(pt.n));

        const Chain cs = contract(c, v, w);
        const auto st_s = stationary(cs, spec.stationary_tol);
        const Vertex sigma = cs.origin().sigma;
        const double merged = st.pi[v] + st.pi[w];
        const double gap = std::abs(st_s.pi[sigma] - merged) / merged;

        const Dist start = Dist::point(c.n_states(), u);
        const double av = avoid_prob(c, start, v, T, t1);
        const double aw = avoid_prob(c, start, w, T, t1);
        const Vertex both[] = {v, w};
        const double joint = avoid_prob(c, start, both, T, t1);
        const Dist start_s = Dist::point(cs.n_states(), contracted_index(cs.origin(), u));
        const double as = avoid_prob(cs, start_s, sigma, T, t1);
        const double fac = std::abs(as - av * aw) / (av * aw);

        max_gap = std::max(max_gap, gap);
        sum_gap += gap;
        max_fac = std::max(max_fac, fac);
        sum_fac += fac;
        max_joint = std::max(max_joint, joint / (av * aw));
    }
    const double cnt = static_cast<double>(spec.pairs);
    return {static_cast<double>(t1), static_cast<double>(T), max_gap, sum_gap / cnt, max_fac, sum_fac / cnt,
            max_joint};
}

std::vector<double> connectivity(const ExperimentSpec& spec, const GridPoint& pt, std::uint64_t seed) {
    const double nd = static_cast<double>(pt.n);
    const double ln_n = std::log(nd);
    const double np_low = ln_n - spec.window * std::log(ln_n);
    const double np_high = ln_n + spec.window * std::log(ln_n);
    auto connected = [&](double np, std::uint64_t s) {
        const double p = std::clamp(np / nd, 0.0, 1.0);
        return is_strongly_connected(generate({pt.n, p, s, spec.method})) ? 1.0 : 0.0;
    };
    return {np_low, np_high, connected(np_low, derive_seed(seed, 5)), connected(np_high, derive_seed(seed, 6))};
}

std::vector<double> compute(const ExperimentSpec& spec, const GridPoint& pt, std::uint64_t seed) {
    switch (spec.kind) {
    case ExperimentKind::pi_convergence: return pi_convergence(spec, pt, seed);
    case ExperimentKind::cover_convergence: return cover_convergence(spec, pt, seed);
    case ExperimentKind::mixing_scan: return mixing_scan(spec, pt, seed);
    case ExperimentKind::z_ratio: return z_ratio(spec, pt, seed);
    case ExperimentKind::contraction: return contraction(spec, pt, seed);
    case ExperimentKind::connectivity_threshold: return connectivity(spec, pt, seed);
    }
    return {};
}

std::string sanitize(std::string s) {
    for (char& ch : s) {
        if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"') ch = ';';
    }
    return s;
}

} // namespace

RunRow run_single(const ExperimentSpec& spec, std::size_t point_index, std::size_t run_index) {
    if (point_index >= spec.grid.size()) throw ValidationError("point index out of range");
    if (run_index >= spec.runs_per_point) throw ValidationError("run index out of range");
    const auto& pt = spec.grid[point_index];
    RunRow row;
    row.point_index = point_index;
    row.run_index = run_index;
    row.seed = run_seed(spec, point_index, run_index);
    row.n = pt.n;
    row.d = pt.effective_d();
    const std::size_t cols = experiment_columns(spec.kind).size();
    try {
        row.values = compute(spec, pt, row.seed);
    } catch (const std::exception& e) {
        row.status = "error: " + sanitize(e.what());
        row.values.assign(cols, std::numeric_limits<double>::quiet_NaN());
    }
    return row;
}

std::string csv_line(const RunRow& row) {
    std::string s = std::to_string(row.point_index) + "," + std::to_string(row.run_index) + "," +
                    std::to_string(row.seed) + "," + std::to_string(row.n) + "," + format_real(row.d) + "," +
                    row.status;
    for (double v : row.values) s += "," + format_real(v);
    return s;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    validate(spec);
    ExperimentResult res;
    res.spec = spec;
    res.spec_hash = fnv1a_hex(spec.canonical());
    res.columns = experiment_columns(spec.kind);

    const std::size_t tasks = spec.grid.size() * spec.runs_per_point;
    res.rows.resize(tasks);
    const auto count = static_cast<std::ptrdiff_t>(tasks);
    // Rows land in their (point, run) slot whatever order they finish in.
#pragma omp parallel for schedule(dynamic, 1) num_threads(kernels::thread_count())
    for (std::ptrdiff_t t = 0; t < count; ++t) {
        const auto idx = static_cast<std::size_t>(t);
        res.rows[idx] = run_single(spec, idx / spec.runs_per_point, idx % spec.runs_per_point);
    }

    for (std::size_t i = 0; i < spec.grid.size(); ++i) {
        PointRow pr;
        pr.point_index = i;
        pr.n = spec.grid[i].n;
        pr.d = spec.grid[i].effective_d();
        const std::size_t k = res.columns.size();
        pr.mean.assign(k, 0.0);
        pr.stderr_.assign(k, 0.0);
        std::vector<const RunRow*> ok;
        for (std::size_t r = 0; r < spec.runs_per_point; ++r) {
            const auto& row = res.rows[i * spec.runs_per_point + r];
            if (row.status == "ok") ok.push_back(&row);
            else ++pr.runs_failed;
        }
        pr.runs_ok = ok.size();
        for (std::size_t c = 0; c < k; ++c) {
            if (ok.empty()) {
                pr.mean[c] = pr.stderr_[c] = std::numeric_limits<double>::quiet_NaN();
                continue;
            }
            double s = 0;
            for (auto* row : ok) s += row->values[c];
            const double mean = s / static_cast<double>(ok.size());
            double ss = 0;
            for (auto* row : ok) ss += (row->values[c] - mean) * (row->values[c] - mean);
            pr.mean[c] = mean;
            pr.stderr_[c] = ok.size() > 1 ? std::sqrt(ss / static_cast<double>(ok.size() - 1)) /
                                                std::sqrt(static_cast<double>(ok.size()))
                                          : 0.0;
        }
        res.points.push_back(std::move(pr));
    }
    return res;
}

std::size_t ExperimentResult::column(const std::string& name) const {
    auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw ValidationError("no column '" + name + "'");
    return static_cast<std::size_t>(it - columns.begin());
}

std::string ExperimentResult::runs_csv() const {
    std::string s = "point_index,run_index,seed,n,d,status";
    for (const auto& c : columns) s += "," + c;
    s += "\n";
    for (const auto& row : rows) s += csv_line(row) + "\n";
    return s;
}

std::string ExperimentResult::points_csv() const {
    std::string s = "point_index,n,d,runs_ok,runs_failed";
    for (const auto& c : columns) s += ",mean_" + c + ",se_" + c;
    s += "\n";
    for (const auto& p : points) {
        s += std::to_string(p.point_index) + "," + std::to_string(p.n) + "," + format_real(p.d) + "," +
             std::to_string(p.runs_ok) + "," + std::to_string(p.runs_failed);
        for (std::size_t c = 0; c < columns.size(); ++c) {
            s += "," + format_real(p.mean[c]) + "," + format_real(p.stderr_[c]);
        }
        s += "\n";
    }
    return s;
}

std::string ExperimentResult::sidecar_json() const {
    nlohmann::ordered_json j;
    j["tool_version"] = kToolVersion;
    j["kind"] = to_string(spec.kind);
    j["master_seed"] = spec.master_seed;
    j["spec_hash"] = spec_hash;
    j["spec"] = spec.canonical();
    j["seed_derivation"] = "derive_seed(master_seed, point_index, run_index) = mix64(mix64(mix64(master) ^ point) + run)";
    j["columns"] = columns;
    j["runs_csv"] = spec.output.empty() ? "" : spec.output + ".csv";
    j["points_csv"] = spec.output.empty() ? "" : spec.output + ".points.csv";
    std::size_t failed = 0;
    for (const auto& r : rows) failed += r.status == "ok" ? 0 : 1;
    j["rows"] = rows.size();
    j["failed_rows"] = failed;
    return j.dump(2) + "\n";
}

void ExperimentResult::write_files() const {
    if (spec.output.empty()) return;
    auto put = [](const std::string& path, const std::string& body) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw RuntimeError("cannot write '" + path + "'");
        out << body;
    };
    put(spec.output + ".csv", runs_csv());
    put(spec.output + ".points.csv", points_csv());
    put(spec.output + ".json", sidecar_json());
}

} // namespace dwalk
