#include "dwalk/degree_theory.hpp"

#include <boost/math/distributions/binomial.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "dwalk/error.hpp"

namespace dwalk {

double dbar(std::size_t n, double p, std::size_t k) {
    if (n == 0) throw ValidationError("n must be positive");
    if (k > n - 1) throw ValidationError("degree k exceeds n-1");
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("p must lie in [0,1]");
    const double nd = static_cast<double>(n);
    const std::size_t trials = n - 1;
    if (p == 0.0) return k == 0 ? nd : 0.0;
    if (p == 1.0) return k == trials ? nd : 0.0;
    // lgamma differences lose ~1e-9 relative accuracy at n ~ 1e5; the boost pmf
    // (via the incomplete-beta derivative) stays within a few ulps.
    const boost::math::binomial_distribution<double> bin(static_cast<double>(trials), p);
    return nd * boost::math::pdf(bin, static_cast<double>(k));
}

DegreeProfile degree_profile(std::size_t n, double p) {
    if (n < 3) throw ValidationError("degree profile needs n >= 3");
    DegreeProfile pr;
    pr.n = n;
    pr.p = p;
    const double nd = static_cast<double>(n);
    const double ln_n = std::log(nd);
    pr.np = nd * p;
    pr.d = pr.np / ln_n;
    pr.delta0 = 30.0 * pr.np;
    pr.k_max = std::min<std::size_t>(n - 1, static_cast<std::size_t>(std::floor(pr.delta0)));
    if (pr.d > 1.0) {
        pr.k_star = static_cast<std::size_t>(std::ceil((pr.d - 1.0) * ln_n));
        pr.k_dagger = static_cast<std::size_t>(std::ceil(pr.d * ln_n));
        pr.gamma_d = (pr.d - 1.0) * std::log(pr.d / (pr.d - 1.0));
    }
    pr.Dbar.resize(pr.k_max + 1);
    for (std::size_t k = 0; k <= pr.k_max; ++k) pr.Dbar[k] = dbar(n, p, k);
    return pr;
}

BucketReport classify_buckets(const DegreeProfile& pr) {
    if (!(pr.d > 1.0)) throw ValidationError("bucket classification needs d > 1");
    const double ln_n = std::log(static_cast<double>(pr.n));
    const double lo = 1.0 / (ln_n * ln_n);
    const double lln = std::log(ln_n);
    const double hi2 = ln_n * ln_n;

    BucketReport r;
    r.log_log_n = lln;
    r.bucket.assign(pr.k_max + 1, Bucket::K0);
    for (std::size_t k = 1; k <= pr.k_max; ++k) {
        const double v = pr.Dbar[k];
        Bucket b;
        if (v <= lo) {
            b = Bucket::K0;
        } else if (k <= 15 && v <= lln) {
            b = Bucket::K1;
        } else if (k >= 16 && v <= hi2) {
            b = Bucket::K2;
        } else {
            b = Bucket::K3;
        }
        r.bucket[k] = b;
        if (b == Bucket::K1) ++r.k1_size;
        if (b == Bucket::K2) {
            ++r.k2_size;
            if (!r.min_k2) r.min_k2 = k;
        }
    }
    r.claims_apply = pr.d - 1.0 >= std::pow(ln_n, -1.0 / 3.0);
    r.k1_empty = r.k1_size == 0;
    r.min_k2_ok = !r.min_k2 || static_cast<double>(*r.min_k2) >= std::sqrt(ln_n);
    return r;
}

K3Envelope k3_envelope(const Digraph& g, const DegreeProfile& pr, const BucketReport& buckets) {
    std::vector<std::size_t> count(pr.k_max + 1, 0);
    for (Vertex v = 0; v < g.n(); ++v) {
        const auto k = g.in_degree(v);
        if (k <= pr.k_max) ++count[k];
    }
    K3Envelope env;
    for (std::size_t k = 1; k <= pr.k_max; ++k) {
        if (buckets.bucket[k] != Bucket::K3) continue;
        const double actual = static_cast<double>(count[k]);
        if (actual < pr.Dbar[k] / 2.0 || actual > 2.0 * pr.Dbar[k]) {
            env.holds = false;
            env.violations.push_back(k);
        }
    }
    return env;
}

VStarCount vstar_count(const Digraph& g, const DegreeProfile& pr) {
    if (!(pr.d > 1.0)) throw ValidationError("V* needs d > 1");
    VStarCount vs;
    for (Vertex v = 0; v < g.n(); ++v) {
        if (g.in_degree(v) == pr.k_star && g.out_degree(v) == pr.k_dagger) ++vs.count;
    }
    const double nd = static_cast<double>(pr.n);
    vs.bound = std::pow(nd, pr.gamma_d) / (10.0 * pr.d * std::log(nd));
    return vs;
}

double varsigma_star(const Digraph& g, Vertex v) {
    if (v >= g.n()) throw ValidationError("vertex out of range");
    auto nbrs = g.in(v);
    if (nbrs.empty()) throw ValidationError("varsigma* undefined: vertex " + std::to_string(v) + " has no in-neighbours");
    double best = 0.0;
    for (Vertex w : nbrs) {
        // w -> v is an edge, so deg+(w) >= 1.
        best = std::max(best, static_cast<double>(g.in_degree(w)) / static_cast<double>(g.out_degree(w)));
    }
    return best;
}

PiPrediction predict_pi(const Digraph& g, std::optional<double> p) {
    if (!is_strongly_connected(g)) throw ValidationError("stationary prediction needs a strongly connected digraph");
    const std::size_t n = g.n();
    const double nd = static_cast<double>(n);
    PiPrediction pr;
    if (p) {
        if (!(*p > 0.0 && *p <= 1.0)) throw ValidationError("p must lie in (0,1]");
        pr.m = nd * (nd - 1.0) * *p;
    } else {
        pr.m = static_cast<double>(g.edge_count());
        pr.m_from_edge_count = true;
    }
    pr.uniform = 1.0 / nd;
    pr.raw.resize(n);
    pr.deg_only.resize(n);
    pr.varsigma.resize(n);
    double total = 0.0;
    for (Vertex v = 0; v < n; ++v) {
        pr.varsigma[v] = varsigma_star(g, v);
        const double din = static_cast<double>(g.in_degree(v));
        pr.raw[v] = (din + pr.varsigma[v]) / pr.m;
        pr.deg_only[v] = din / pr.m;
        total += pr.raw[v];
    }
    pr.normalized.resize(n);
    for (Vertex v = 0; v < n; ++v) pr.normalized[v] = pr.raw[v] / total;
    return pr;
}

double cover_coefficient(double d) {
    if (!(d > 1.0)) throw ValidationError("cover formula needs d > 1");
    if (std::isinf(d)) return 1.0;
    // d ln(d/(d-1)) = -d ln(1 - 1/d)
    return -d * std::log1p(-1.0 / d);
}

double cover_formula(double n, double d) {
    if (!(n > 1.0)) throw ValidationError("cover formula needs n > 1");
    return cover_coefficient(d) * n * std::log(n);
}

} // namespace dwalk
