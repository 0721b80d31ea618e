#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dwalk/digraph.hpp"

namespace dwalk {

/// Expected number of vertices of in-degree k in D_{n,p}:
/// n C(n-1,k) p^k (1-p)^(n-1-k).
double dbar(std::size_t n, double p, std::size_t k);

enum class Bucket { K0 = 0, K1 = 1, K2 = 2, K3 = 3 };

struct DegreeProfile {
    std::size_t n = 0;
    double p = 0.0;
    double np = 0.0;
    double d = 0.0;        // np / ln n
    double delta0 = 0.0;   // 30 np
    std::size_t k_max = 0; // floor(delta0): buckets cover [1, k_max]
    std::size_t k_star = 0;   // ceil((d-1) ln n)
    std::size_t k_dagger = 0; // ceil(d ln n)
    double gamma_d = 0.0;     // (d-1) ln(d/(d-1))
    std::vector<double> Dbar; // index k in [0, k_max]
};

DegreeProfile degree_profile(std::size_t n, double p);

struct BucketReport {
    std::vector<Bucket> bucket;  // index k; entry 0 unused
    std::size_t k1_size = 0;
    std::size_t k2_size = 0;
    std::optional<std::size_t> min_k2;
    /// The "(a)" claims apply when d - 1 >= (ln n)^(-1/3).
    bool claims_apply = false;
    bool k1_empty = false;
    bool min_k2_ok = false;  // min K2 >= (ln n)^(1/2), vacuous if K2 empty
    double log_log_n = 0.0;  // reference scale for |K2|
};

/// Applies the four set definitions literally. A k meeting more than one raw
/// condition goes to the lowest-indexed bucket.
BucketReport classify_buckets(const DegreeProfile& profile);

struct K3Envelope {
    bool holds = true;
    std::vector<std::size_t> violations;  // degrees k in K3 with D(k) outside [Dbar/2, 2 Dbar]
};

/// Compares the actual in-degree counts of g with the K3 envelope.
K3Envelope k3_envelope(const Digraph& g, const DegreeProfile& profile, const BucketReport& buckets);

/// |{v : deg-(v) = k*, deg+(v) = k_dagger}| and the bound n^gamma_d / (10 d ln n).
struct VStarCount {
    std::size_t count = 0;
    double bound = 0.0;
};
VStarCount vstar_count(const Digraph& g, const DegreeProfile& profile);

/// max over in-neighbours w of v of deg-(w)/deg+(w). Throws ValidationError if
/// v has no in-neighbours.
double varsigma_star(const Digraph& g, Vertex v);

struct PiPrediction {
    double m = 0.0;                 // n(n-1)p, or the edge count when p is unknown
    bool m_from_edge_count = false;
    std::vector<double> raw;        // (deg-(v) + varsigma*(v)) / m
    std::vector<double> normalized; // raw / sum(raw)
    std::vector<double> deg_only;   // deg-(v) / m
    std::vector<double> varsigma;   // varsigma*(v)
    double uniform = 0.0;           // 1/n
};

/// Requires a strongly connected digraph.
PiPrediction predict_pi(const Digraph& g, std::optional<double> p);

/// d ln(d/(d-1)) n ln n. Pass d = +inf for the n ln n limit. Throws for d <= 1.
double cover_formula(double n, double d);

/// d ln(d/(d-1)), with the d -> inf limit 1.
double cover_coefficient(double d);

} // namespace dwalk
