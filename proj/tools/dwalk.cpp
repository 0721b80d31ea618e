// dwalk: command-line front end for the random-digraph walk laboratory.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dwalk/chain.hpp"
#include "dwalk/degree_theory.hpp"
#include "dwalk/digraph.hpp"
#include "dwalk/error.hpp"
#include "dwalk/experiment.hpp"
#include "dwalk/format.hpp"
#include "dwalk/rng.hpp"
#include "dwalk/trees.hpp"
#include "dwalk/walker.hpp"

using namespace dwalk;
using json = nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// JSON cannot hold inf/nan; those become strings.
json num(double v) {
    if (std::isfinite(v)) return v;
    return format_real(v);
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

Vertex vertex_arg(const Digraph& g, std::size_t v, const char* what) {
    if (v >= g.n()) throw ValidationError(std::string(what) + " out of range");
    return static_cast<Vertex>(v);
}

void write_chain(std::ostream& os, const Chain& c) {
    os << c.n_states() << " " << c.nnz() << "\n";
    for (Vertex u = 0; u < c.n_states(); ++u) {
        auto t = c.row_targets(u);
        auto p = c.row_probs(u);
        for (std::size_t i = 0; i < t.size(); ++i) os << u << " " << t[i] << " " << format_real(p[i]) << "\n";
    }
}

std::vector<std::string> split_lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dwalk: random walks on random digraphs"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    std::string file, out, method = "geometric-jump", policy = "uniform", mode = "low", csv;
    std::size_t n = 0, runs = 100, v = 0, w = 0, target = 0, T = 0, tmax = 0, pairs = 20, row = 0, samples = 0;
    std::size_t grid_step = 0, u_start = 0;
    double p = 0, d = 0, tol = 1e-12, threshold = 0, eta = 0.004, np = 0, K = 1.0;
    std::uint64_t seed = 0;
    bool as_json = false, have_p = false;

    auto* gen = app.add_subcommand("gen", "sample D_{n,p} and write an edge list");
    gen->add_option("--n", n)->required();
    gen->add_option("--p", p)->required();
    gen->add_option("--seed", seed);
    gen->add_option("--method", method);
    gen->add_option("--out", out);

    auto* stat = app.add_subcommand("stationary", "stationary distribution by power iteration");
    stat->add_option("FILE", file)->required();
    stat->add_option("--tol", tol);
    stat->add_flag("--json", as_json);

    auto* mix = app.add_subcommand("mix", "mixing time and pairwise variation trace");
    mix->add_option("FILE", file)->required();
    mix->add_option("--threshold", threshold, "default min(n^-3, 1e-9)");
    mix->add_option("--pairs", samples, "number of sampled sources; 0 = all states");
    mix->add_option("--seed", seed);

    auto* hit = app.add_subcommand("hit", "expected hitting times of a target");
    hit->add_option("FILE", file)->required();
    hit->add_option("--target", target)->required();

    auto* con = app.add_subcommand("contract", "merge two states of the walk chain");
    con->add_option("FILE", file)->required();
    con->add_option("--v", v)->required();
    con->add_option("--w", w)->required();
    con->add_option("--out", out, "write the contracted chain as 'u v prob' lines");

    auto* cov = app.add_subcommand("cover", "Monte Carlo cover time");
    cov->add_option("FILE", file)->required();
    cov->add_option("--runs", runs);
    cov->add_option("--start-policy", policy, "uniform | fixed:V | sampled:K");
    cov->add_option("--seed", seed);
    cov->add_flag("--json", as_json);

    auto* ret = app.add_subcommand("returns", "return polynomial and its minimum modulus");
    ret->add_option("FILE", file)->required();
    ret->add_option("--v", v)->required();
    ret->add_option("--T", T)->required();
    ret->add_option("--K", K);

    auto* geo = app.add_subcommand("geomlaw", "exact avoidance vs the geometric law");
    geo->add_option("FILE", file)->required();
    geo->add_option("--v", v)->required();
    geo->add_option("--T", T)->required();
    geo->add_option("--tmax", tmax)->required();
    geo->add_option("--grid", grid_step, "spacing of t values; default (tmax - T) / 8");
    geo->add_option("--u", u_start, "start vertex");

    auto* zt = app.add_subcommand("ztest", "tree estimator Z(x,y) against exact probabilities");
    zt->add_option("FILE", file)->required();
    zt->add_option("--pairs", pairs);
    zt->add_option("--mode", mode)->check(CLI::IsMember({"low", "up"}));
    zt->add_option("--eta", eta);
    zt->add_option("--np", np, "default: edge count / n");
    zt->add_option("--seed", seed);
    zt->add_flag("--json", as_json);

    auto* deg = app.add_subcommand("degrees", "expected in-degree profile and bucket report");
    deg->add_option("FILE", file)->required();
    deg->add_option("--np", np)->required();
    deg->add_flag("--json", as_json);

    auto* pred = app.add_subcommand("predict", "stationary prediction from degrees");
    pred->add_option("FILE", file)->required();
    auto* p_opt = pred->add_option("--p", p);
    pred->add_flag("--json", as_json);

    auto* form = app.add_subcommand("formula", "d ln(d/(d-1)) n ln n");
    form->add_option("--n", n)->required();
    form->add_option("--d", d)->required();

    auto* exp = app.add_subcommand("experiment", "run a sweep spec");
    exp->add_option("SPEC", file)->required();
    exp->add_option("--out", out, "override the spec's output prefix");

    auto* rr = app.add_subcommand("rerun", "recompute one row of a sweep");
    rr->add_option("SPEC", file)->required();
    rr->add_option("--row", row)->required();
    rr->add_option("--csv", csv, "compare with this runs CSV; exit 3 on mismatch");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    have_p = p_opt->count() > 0;

    try {
        if (*gen) {
            const Digraph g = generate({n, p, seed, parse_gen_method(method)});
            if (out.empty()) write_edge_list(std::cout, g);
            else save_edge_list(out, g);
            if (!out.empty()) {
                emit({{"n", g.n()}, {"m", g.edge_count()}, {"p", p}, {"seed", seed}, {"method", method},
                      {"strongly_connected", is_strongly_connected(g)}});
            }
        } else if (*stat) {
            const Digraph g = load_edge_list(file);
            const auto r = stationary(chain_from(g), tol);
            json j{{"n", g.n()}, {"tol", tol}, {"residual", r.residual}, {"iterations", r.iterations},
                   {"averaged", r.averaged}, {"pi", r.pi.vec()}};
            if (as_json) emit(j);
            else
                for (std::size_t i = 0; i < g.n(); ++i) std::cout << i << " " << format_real(r.pi[i]) << "\n";
        } else if (*mix) {
            const Digraph g = load_edge_list(file);
            const Chain c = chain_from(g);
            const auto st = stationary(c);
            MixOptions o;
            o.threshold = threshold > 0 ? threshold : default_mix_threshold(g.n());
            if (samples > 0) o.sample_sources = samples;
            o.seed = seed;
            const auto r = mixing(c, st.pi, o);
            const auto bad = submultiplicativity_violations(r.dbar_trace);
            std::vector<json> dt, bt;
            for (double x : r.d_trace) dt.push_back(num(x));
            for (double x : r.dbar_trace) bt.push_back(num(x));
            emit({{"n", g.n()}, {"seed", seed}, {"threshold", r.threshold}, {"T", r.T},
                  {"stationary_residual", st.residual}, {"sampled", r.sampled}, {"sources", r.sources.size()},
                  {"submultiplicativity_violations", bad.size()}, {"d_trace", dt}, {"dbar_trace", bt}});
        } else if (*hit) {
            const Digraph g = load_edge_list(file);
            const auto h = hitting_time(chain_from(g), vertex_arg(g, target, "--target"));
            std::vector<json> steps;
            for (std::size_t i = 0; i < h.steps.size(); ++i) steps.push_back(num(h.steps[i]));
            emit({{"n", g.n()}, {"target", target}, {"residual", h.residual}, {"steps", steps}});
        } else if (*con) {
            const Digraph g = load_edge_list(file);
            const Chain c = chain_from(g);
            const Chain cs = contract(c, vertex_arg(g, v, "--v"), vertex_arg(g, w, "--w"));
            const auto st = stationary(c);
            const auto sts = stationary(cs);
            const Vertex sigma = cs.origin().sigma;
            if (!out.empty()) {
                std::ofstream os(out, std::ios::binary);
                if (!os) throw RuntimeError("cannot write '" + out + "'");
                write_chain(os, cs);
            }
            emit({{"n", g.n()}, {"v", v}, {"w", w}, {"sigma", sigma}, {"removed", cs.origin().removed},
                  {"pi_v", st.pi[v]}, {"pi_w", st.pi[w]}, {"pi_sigma", sts.pi[sigma]},
                  {"gap", sts.pi[sigma] - st.pi[v] - st.pi[w]}, {"residual", sts.residual}});
        } else if (*cov) {
            const Digraph g = load_edge_list(file);
            const auto s = cover_time_mc(g, parse_start_policy(policy), runs, seed);
            if (as_json) {
                json rows = json::array();
                for (const auto& r : s.runs)
                    rows.push_back({{"run_id", r.run_id}, {"seed", r.seed}, {"start", r.start},
                                    {"cover_time", r.cover_time}});
                emit({{"n", g.n()}, {"seed", seed}, {"start_policy", policy}, {"step_cap", s.step_cap},
                      {"mean", s.mean}, {"stddev", s.stddev}, {"ci95", s.ci95},
                      {"max_over_starts", s.max_over_starts}, {"runs", rows}});
            } else {
                std::cout << "run_id,seed,start,cover_time\n";
                for (const auto& r : s.runs)
                    std::cout << r.run_id << "," << r.seed << "," << r.start << "," << r.cover_time << "\n";
            }
        } else if (*ret) {
            const Digraph g = load_edge_list(file);
            const auto rp = return_poly(chain_from(g), vertex_arg(g, v, "--v"), T);
            const auto mm = min_modulus_scan(rp, K);
            emit({{"n", g.n()}, {"v", v}, {"T", T}, {"R_at_1", eval_R(rp, 1.0).real()}, {"coeffs", rp.coeffs},
                  {"K", K}, {"radius", mm.radius}, {"min_abs", mm.min_abs}, {"argument", mm.argument}});
        } else if (*geo) {
            const Digraph g = load_edge_list(file);
            const Chain c = chain_from(g);
            const auto st = stationary(c);
            if (tmax <= T) throw ValidationError("--tmax must exceed --T");
            const std::size_t step = grid_step > 0 ? grid_step : std::max<std::size_t>(1, (tmax - T) / 8);
            std::vector<std::size_t> ts;
            for (std::size_t t = T + step; t <= tmax; t += step) ts.push_back(t);
            const auto tab = geometric_law_check(c, st.pi, vertex_arg(g, v, "--v"), T, vertex_arg(g, u_start, "--u"), ts);
            json rows = json::array();
            for (const auto& r : tab.rows)
                rows.push_back({{"t", r.t}, {"exact", r.exact_avoid}, {"geometric", r.geometric_pred},
                                {"ratio", num(r.ratio)}, {"degenerate", r.degenerate}});
            emit({{"n", g.n()}, {"v", v}, {"u", tab.u}, {"T", T}, {"pi_v", tab.pi_v}, {"R_v", tab.R_v},
                  {"p_v", tab.p_v}, {"rows", rows}});
        } else if (*zt) {
            const Digraph g = load_edge_list(file);
            const double npv = np > 0 ? np : static_cast<double>(g.edge_count()) / static_cast<double>(g.n());
            Rng rng(seed);
            json rows = json::array();
            std::size_t violations = 0;
            for (std::size_t i = 0; i < pairs; ++i) {
                const auto x = static_cast<Vertex>(rng.below(g.n()));
                const auto y = static_cast<Vertex>(rng.below(g.n()));
                const double denom = g.in_degree(y) > 0 ? static_cast<double>(g.in_degree(y)) : NAN;
                if (mode == "low") {
                    const std::size_t ell = low_depth(g.n(), npv);
                    const auto r = z_lower(g, x, y, ell);
                    const double exact = k_step_probability(g, x, y, 2 * ell + 1);
                    if (r.Z > exact + 1e-12) ++violations;
                    rows.push_back({{"x", x}, {"y", y}, {"Z", r.Z}, {"exact", exact},
                                    {"ratio", num(r.Z * static_cast<double>(g.edge_count()) / denom)},
                                    {"in_tree_succeeded", r.in_tree_succeeded},
                                    {"out_tree_succeeded", r.out_tree_succeeded}, {"depth", ell}});
                } else {
                    const auto r = z_upper_report(g, x, y, npv, eta);
                    if (r.remainder < -1e-12) ++violations;
                    rows.push_back({{"x", x}, {"y", y}, {"Z", r.Z_up}, {"exact", r.exact}, {"remainder", r.remainder},
                                    {"ratio", num(r.Z_up * static_cast<double>(g.edge_count()) / denom)},
                                    {"in_tree_succeeded", r.in_tree_succeeded},
                                    {"out_tree_succeeded", r.out_tree_succeeded},
                                    {"l1", r.depths.l1}, {"l2", r.depths.l2}, {"l0", r.depths.l0}});
                }
            }
            emit({{"n", g.n()}, {"np", npv}, {"mode", mode}, {"eta", eta}, {"seed", seed},
                  {"violations", violations}, {"rows", rows}});
            if (violations > 0) return 3;
        } else if (*deg) {
            const Digraph g = load_edge_list(file);
            const auto prof = degree_profile(g.n(), np / static_cast<double>(g.n()));
            const auto b = classify_buckets(prof);
            const auto env = k3_envelope(g, prof, b);
            const auto vs = vstar_count(g, prof);
            json buckets = json::array();
            for (std::size_t k = 1; k < b.bucket.size(); ++k) buckets.push_back(static_cast<int>(b.bucket[k]));
            emit({{"n", g.n()}, {"np", np}, {"d", prof.d}, {"delta0", prof.delta0}, {"k_max", prof.k_max},
                  {"k_star", prof.k_star}, {"k_dagger", prof.k_dagger}, {"gamma_d", prof.gamma_d},
                  {"Dbar", prof.Dbar}, {"bucket_from_k1", buckets}, {"k1_size", b.k1_size}, {"k2_size", b.k2_size},
                  {"claims_apply", b.claims_apply}, {"k1_empty", b.k1_empty}, {"min_k2_ok", b.min_k2_ok},
                  {"k3_envelope_holds", env.holds}, {"k3_violations", env.violations},
                  {"vstar_count", vs.count}, {"vstar_bound", vs.bound}});
        } else if (*pred) {
            const Digraph g = load_edge_list(file);
            const auto pp = predict_pi(g, have_p ? std::optional<double>(p) : std::nullopt);
            const auto st = stationary(chain_from(g));
            double max_rel = 0;
            for (std::size_t i = 0; i < g.n(); ++i) max_rel = std::max(max_rel, std::abs(st.pi[i] / pp.raw[i] - 1));
            emit({{"n", g.n()}, {"m", pp.m}, {"m_from_edge_count", pp.m_from_edge_count},
                  {"max_rel_err", max_rel}, {"prediction", pp.raw}, {"normalized", pp.normalized},
                  {"varsigma_star", pp.varsigma}, {"pi", st.pi.vec()}});
        } else if (*form) {
            std::cout << format_real(cover_formula(static_cast<double>(n), d)) << "\n";
        } else if (*exp) {
            auto spec = parse_spec(read_file(file));
            if (!out.empty()) spec.output = out;
            const auto res = run_experiment(spec);
            if (spec.output.empty()) std::cout << res.runs_csv();
            else {
                res.write_files();
                std::cout << res.sidecar_json();
            }
        } else if (*rr) {
            const auto spec = parse_spec(read_file(file));
            const std::size_t per = spec.runs_per_point;
            if (row >= spec.grid.size() * per) throw ValidationError("--row out of range");
            const std::string line = csv_line(run_single(spec, row / per, row % per));
            std::cout << line << "\n";
            if (!csv.empty()) {
                const auto lines = split_lines(read_file(csv));
                if (row + 1 >= lines.size()) throw ValidationError("--csv has no row " + std::to_string(row));
                if (lines[row + 1] != line) {
                    std::cerr << "mismatch with " << csv << ":\n  " << lines[row + 1] << "\n";
                    return 3;
                }
            }
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const InvariantError& e) {
        std::cerr << "invariant violated: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
