#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dwalk {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

/// Immutable directed graph on vertices 0..n-1 with sorted forward and
/// reverse adjacency (CSR). No self-loops, no parallel edges.
class Digraph {
public:
    Digraph() = default;

    /// Builds from an arbitrary edge list. Throws ValidationError on
    /// self-loops, duplicates or out-of-range endpoints.
    static Digraph from_edges(std::size_t n, std::vector<Edge> edges);

    /// Builds from per-vertex out-lists that are already sorted, loop-free and
    /// duplicate-free (the generators produce this directly).
    static Digraph from_sorted_out_lists(std::size_t n, std::vector<std::size_t> offsets,
                                         std::vector<Vertex> targets);

    std::size_t n() const noexcept { return out_offsets_.empty() ? 0 : out_offsets_.size() - 1; }
    std::size_t edge_count() const noexcept { return out_targets_.size(); }

    std::span<const Vertex> out(Vertex u) const noexcept {
        return {out_targets_.data() + out_offsets_[u], out_offsets_[u + 1] - out_offsets_[u]};
    }
    std::span<const Vertex> in(Vertex v) const noexcept {
        return {in_sources_.data() + in_offsets_[v], in_offsets_[v + 1] - in_offsets_[v]};
    }
    std::size_t out_degree(Vertex u) const noexcept { return out_offsets_[u + 1] - out_offsets_[u]; }
    std::size_t in_degree(Vertex v) const noexcept { return in_offsets_[v + 1] - in_offsets_[v]; }

    bool has_edge(Vertex u, Vertex v) const noexcept;

    /// All edges in lexicographic order.
    std::vector<Edge> edges() const;

    bool operator==(const Digraph& other) const = default;

private:
    void build_reverse();

    std::vector<std::size_t> out_offsets_;
    std::vector<Vertex> out_targets_;
    std::vector<std::size_t> in_offsets_;
    std::vector<Vertex> in_sources_;
};

enum class GenMethod { naive, geometric_jump };

GenMethod parse_gen_method(const std::string& name);
std::string to_string(GenMethod m);

struct GenParams {
    std::size_t n = 1;
    double p = 0.0;
    std::uint64_t seed = 0;
    GenMethod method = GenMethod::geometric_jump;
};

/// Samples D_{n,p}: every ordered pair (i,j), i != j, is an edge independently
/// with probability p. Deterministic in (n, p, seed, method).
Digraph generate(const GenParams& params);

/// p such that np = d ln n.
double edge_probability(std::size_t n, double d);

struct Degrees {
    std::vector<std::size_t> in;
    std::vector<std::size_t> out;
};

Degrees degrees(const Digraph& g);

/// True iff all vertices lie in one strongly connected component.
bool is_strongly_connected(const Digraph& g);

/// Full scan of the forward/reverse storage; throws InvariantError on any
/// mismatch, loop, duplicate or unsorted list.
void check_invariants(const Digraph& g);

// Named fixtures.
Digraph directed_cycle(std::size_t n);
Digraph complete_digraph(std::size_t n);
/// Cycle 0->1->...->n-1->0 plus edges (j,0) for j = 1..n-2. Hitting n-1
/// from 0 takes time exponential in n.
Digraph pathological_digraph(std::size_t n);

// Edge-list format: "n m" then m lines "u v", lexicographic, LF endings.
void write_edge_list(std::ostream& os, const Digraph& g);
std::string to_edge_list(const Digraph& g);
Digraph read_edge_list(std::istream& is);
Digraph parse_edge_list(const std::string& text);
Digraph load_edge_list(const std::string& path);
void save_edge_list(const std::string& path, const Digraph& g);

} // namespace dwalk
