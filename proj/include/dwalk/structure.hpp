#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "dwalk/digraph.hpp"

namespace dwalk {

/// Vertices with min(deg-, deg+) <= np/20.
std::vector<Vertex> small_vertices(const Digraph& g, double np);

/// BFS distance in the underlying undirected graph; nullopt if unreachable.
std::optional<std::size_t> weak_distance(const Digraph& g, Vertex u, Vertex v);

/// Length of the shortest cycle of the underlying simple undirected graph
/// passing through `c`, looking no further than `max_len`. Cycles have length
/// at least 3 (a 2-cycle u<->v is a single undirected edge).
std::optional<std::size_t> shortest_weak_cycle_through(const Digraph& g, Vertex c, std::size_t max_len);

/// ln n / (10 ln ln n); nullopt for n <= e^e.
std::optional<double> ell10(std::size_t n);

struct StructOptions {
    double np = 0.0;
    /// Lower constant of the degree interval [c0 np, Delta0]; not fixed by the theory.
    double c0 = 0.5;
    /// Replaces the computed separation radius (used to exercise the checks on small graphs).
    std::optional<double> ell10_override;
};

struct StructReport {
    double np = 0.0;
    std::optional<double> ell10;  // nullopt: separation checks not applicable
    std::vector<Vertex> small;

    bool small_pairs_separated = true;
    std::optional<std::pair<Vertex, Vertex>> close_pair;
    std::optional<std::size_t> close_pair_distance;

    bool no_small_near_short_cycle = true;
    std::optional<Vertex> near_cycle_vertex;     // the small vertex
    std::optional<Vertex> near_cycle_anchor;     // a vertex on the offending cycle
    std::optional<std::size_t> near_cycle_length;

    std::size_t max_in_degree = 0;
    std::size_t max_out_degree = 0;
    double delta0 = 0.0;  // 30 np
    bool degrees_below_delta0 = true;
    std::optional<Vertex> high_degree_vertex;

    double c0 = 0.5;
    std::size_t below_c0_count = 0;  // vertices with min degree < c0 np

    bool all_pass() const {
        return small_pairs_separated && no_small_near_short_cycle && degrees_below_delta0;
    }
};

/// Checks the structural properties that hold whp in D_{n,p}: small vertices
/// far apart and away from short weak cycles, and no degree above 30 np.
StructReport structural_report(const Digraph& g, const StructOptions& opts);

} // namespace dwalk
