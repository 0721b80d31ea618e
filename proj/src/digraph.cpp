#include "dwalk/digraph.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <deque>

#include "dwalk/error.hpp"
#include "dwalk/rng.hpp"

namespace dwalk {

Digraph Digraph::from_edges(std::size_t n, std::vector<Edge> edges) {
    if (n == 0) {
        throw ValidationError("digraph needs at least one vertex");
    }
    for (const auto& [u, v] : edges) {
        if (u >= n || v >= n) {
            throw ValidationError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                                  ") out of range for n=" + std::to_string(n));
        }
        if (u == v) {
            throw ValidationError("self-loop at vertex " + std::to_string(u));
        }
    }
    std::sort(edges.begin(), edges.end());
    if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end()) {
        throw ValidationError("duplicate edge (" + std::to_string(dup->first) + "," +
                              std::to_string(dup->second) + ")");
    }
    std::vector<std::size_t> offsets(n + 1, 0);
    std::vector<Vertex> targets;
    targets.reserve(edges.size());
    for (const auto& [u, v] : edges) {
        ++offsets[u + 1];
        targets.push_back(v);
    }
    for (std::size_t i = 0; i < n; ++i) {
        offsets[i + 1] += offsets[i];
    }
    return from_sorted_out_lists(n, std::move(offsets), std::move(targets));
}

Digraph Digraph::from_sorted_out_lists(std::size_t n, std::vector<std::size_t> offsets,
                                       std::vector<Vertex> targets) {
    if (offsets.size() != n + 1 || offsets.back() != targets.size()) {
        throw InvariantError("inconsistent CSR arrays");
    }
    Digraph g;
    g.out_offsets_ = std::move(offsets);
    g.out_targets_ = std::move(targets);
    g.build_reverse();
    return g;
}

void Digraph::build_reverse() {
    const std::size_t nv = n();
    in_offsets_.assign(nv + 1, 0);
    for (Vertex v : out_targets_) {
        ++in_offsets_[v + 1];
    }
    for (std::size_t i = 0; i < nv; ++i) {
        in_offsets_[i + 1] += in_offsets_[i];
    }
    in_sources_.resize(out_targets_.size());
    std::vector<std::size_t> fill(in_offsets_.begin(), in_offsets_.end() - 1);
    // Scanning sources in increasing order leaves every in-list sorted.
    for (std::size_t u = 0; u < nv; ++u) {
        for (std::size_t k = out_offsets_[u]; k < out_offsets_[u + 1]; ++k) {
            in_sources_[fill[out_targets_[k]]++] = static_cast<Vertex>(u);
        }
    }
}

bool Digraph::has_edge(Vertex u, Vertex v) const noexcept {
    auto o = out(u);
    return std::binary_search(o.begin(), o.end(), v);
}

std::vector<Edge> Digraph::edges() const {
    std::vector<Edge> result;
    result.reserve(edge_count());
    for (Vertex u = 0; u < n(); ++u) {
        for (Vertex v : out(u)) {
            result.emplace_back(u, v);
        }
    }
    return result;
}

GenMethod parse_gen_method(const std::string& name) {
    if (name == "naive") return GenMethod::naive;
    if (name == "geometric-jump" || name == "geometric") return GenMethod::geometric_jump;
    throw ValidationError("unknown generation method '" + name + "' (naive | geometric-jump)");
}

std::string to_string(GenMethod m) {
    return m == GenMethod::naive ? "naive" : "geometric-jump";
}

namespace {

Digraph generate_naive(std::size_t n, double p, Rng& rng) {
    std::vector<std::size_t> offsets(n + 1, 0);
    std::vector<Vertex> targets;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && rng.uniform() < p) {
                targets.push_back(static_cast<Vertex>(j));
            }
        }
        offsets[i + 1] = targets.size();
    }
    return Digraph::from_sorted_out_lists(n, std::move(offsets), std::move(targets));
}

// Walks the n(n-1) ordered-pair positions in row-major order; gaps between
// accepted positions are geometric.
Digraph generate_geometric(std::size_t n, double p, Rng& rng) {
    const std::uint64_t row_len = n - 1;
    const std::uint64_t total = static_cast<std::uint64_t>(n) * row_len;
    std::vector<std::size_t> offsets(n + 1, 0);
    std::vector<Vertex> targets;
    targets.reserve(static_cast<std::size_t>(static_cast<double>(total) * p * 1.05) + 16);

    const double log_q = std::log1p(-p);
    std::uint64_t pos = 0;
    bool first = true;
    std::size_t row = 0;
    for (;;) {
        const double jump = std::floor(std::log(rng.uniform_open0()) / log_q);
        const double advance = jump + (first ? 0.0 : 1.0);
        first = false;
        if (advance >= static_cast<double>(total - pos)) {
            break;
        }
        pos += static_cast<std::uint64_t>(advance);
        const std::size_t i = static_cast<std::size_t>(pos / row_len);
        const std::uint64_t c = pos % row_len;
        while (row < i) {
            offsets[++row] = targets.size();
        }
        targets.push_back(static_cast<Vertex>(c < i ? c : c + 1));
    }
    while (row < n) {
        offsets[++row] = targets.size();
    }
    return Digraph::from_sorted_out_lists(n, std::move(offsets), std::move(targets));
}

Digraph dense_fill(std::size_t n) {
    std::vector<std::size_t> offsets(n + 1, 0);
    std::vector<Vertex> targets;
    targets.reserve(n * (n - 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) targets.push_back(static_cast<Vertex>(j));
        }
        offsets[i + 1] = targets.size();
    }
    return Digraph::from_sorted_out_lists(n, std::move(offsets), std::move(targets));
}

} // namespace

Digraph generate(const GenParams& params) {
    if (params.n < 1) {
        throw ValidationError("n must be at least 1");
    }
    if (!(params.p >= 0.0 && params.p <= 1.0)) {
        throw ValidationError("p must lie in [0,1]");
    }
    const std::size_t n = params.n;
    if (params.p == 0.0 || n == 1) {
        return Digraph::from_sorted_out_lists(n, std::vector<std::size_t>(n + 1, 0), {});
    }
    if (params.p == 1.0) {
        return dense_fill(n);
    }
    Rng rng(params.seed);
    return params.method == GenMethod::naive ? generate_naive(n, params.p, rng)
                                             : generate_geometric(n, params.p, rng);
}

double edge_probability(std::size_t n, double d) {
    const double nd = static_cast<double>(n);
    return std::min(1.0, d * std::log(nd) / nd);
}

Degrees degrees(const Digraph& g) {
    Degrees d;
    d.in.resize(g.n());
    d.out.resize(g.n());
    for (Vertex v = 0; v < g.n(); ++v) {
        d.in[v] = g.in_degree(v);
        d.out[v] = g.out_degree(v);
    }
    return d;
}

namespace {

std::size_t reach_count(const Digraph& g, bool forward) {
    std::vector<char> seen(g.n(), 0);
    std::vector<Vertex> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        const Vertex u = stack.back();
        stack.pop_back();
        for (Vertex w : forward ? g.out(u) : g.in(u)) {
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

bool is_strongly_connected(const Digraph& g) {
    if (g.n() == 0) return false;
    return reach_count(g, true) == g.n() && reach_count(g, false) == g.n();
}

void check_invariants(const Digraph& g) {
    std::size_t in_total = 0;
    for (Vertex u = 0; u < g.n(); ++u) {
        auto o = g.out(u);
        for (std::size_t k = 0; k < o.size(); ++k) {
            if (o[k] == u) throw InvariantError("self-loop at " + std::to_string(u));
            if (k > 0 && o[k - 1] >= o[k]) throw InvariantError("out-list not strictly sorted at " + std::to_string(u));
            auto i = g.in(o[k]);
            if (!std::binary_search(i.begin(), i.end(), u)) {
                throw InvariantError("edge (" + std::to_string(u) + "," + std::to_string(o[k]) +
                                     ") missing from reverse adjacency");
            }
        }
        auto i = g.in(u);
        in_total += i.size();
        for (std::size_t k = 1; k < i.size(); ++k) {
            if (i[k - 1] >= i[k]) throw InvariantError("in-list not strictly sorted at " + std::to_string(u));
        }
        for (Vertex w : i) {
            if (!g.has_edge(w, u)) {
                throw InvariantError("reverse entry (" + std::to_string(w) + "," + std::to_string(u) +
                                     ") has no forward edge");
            }
        }
    }
    if (in_total != g.edge_count()) throw InvariantError("in/out edge totals differ");
}

Digraph directed_cycle(std::size_t n) {
    std::vector<Edge> e;
    for (std::size_t i = 0; i < n && n > 1; ++i) {
        e.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>((i + 1) % n));
    }
    return Digraph::from_edges(n, std::move(e));
}

Digraph complete_digraph(std::size_t n) {
    return generate({n, 1.0, 0, GenMethod::geometric_jump});
}

Digraph pathological_digraph(std::size_t n) {
    if (n < 3) throw ValidationError("pathological digraph needs n >= 3");
    std::vector<Edge> e;
    for (std::size_t i = 0; i < n; ++i) {
        e.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>((i + 1) % n));
    }
    for (std::size_t j = 1; j + 1 < n; ++j) {
        e.emplace_back(static_cast<Vertex>(j), 0);
    }
    return Digraph::from_edges(n, std::move(e));
}

} // namespace dwalk
