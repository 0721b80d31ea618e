#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dwalk/digraph.hpp"

namespace dwalk {

enum class TreeDirection { in, out };

struct TreeNode {
    Vertex vertex = 0;
    Vertex parent = 0;  // == vertex for the root
    double weight = 1.0;
    std::size_t children = 0;
};

/// Breadth-first in- or out-tree grown level by level. Each level is sorted
/// by vertex id. Weights are path products of 1/deg+ (alpha for out-trees,
/// beta for in-trees).
struct LayeredTree {
    Vertex root = 0;
    TreeDirection direction = TreeDirection::out;
    std::size_t depth = 0;
    std::vector<std::vector<TreeNode>> levels;  // depth + 1 entries, some possibly empty
    bool succeeded = false;

    std::size_t size() const;
    /// Sum of weights over the last level; 0 if the construction failed.
    double last_level_weight() const;
    std::vector<Vertex> vertices() const;
};

/// In-tree into y: level i+1 holds the unseen in-neighbours of level i. Level
/// i is processed in increasing id order and a new vertex attaches to the
/// first level-i vertex it points to. Vertices in `avoid` never join.
LayeredTree build_in_tree(const Digraph& g, Vertex y, std::size_t depth, std::span<const Vertex> avoid = {});

/// Out-tree from x; a new vertex keeps the edge from the smallest-id parent.
/// The root may itself lie in `avoid`.
LayeredTree build_out_tree(const Digraph& g, Vertex x, std::size_t depth, std::span<const Vertex> avoid = {});

/// log base np of n; requires np > 1.
double log_np(std::size_t n, double np);

/// floor((2/3) log_np n).
std::size_t low_depth(std::size_t n, double np);

struct UpDepths {
    double Lambda = 0.0;
    std::size_t l1 = 0;  // round((1 - 10 eta) Lambda)
    std::size_t l2 = 0;  // ceil(11 eta Lambda)
    std::size_t l0 = 0;  // l1 + l2
};

/// Throws ValidationError ("n too small for eta") when a depth collapses to 0.
UpDepths up_depths(std::size_t n, double np, double eta);

struct ZLowResult {
    double Z = 0.0;
    std::size_t depth = 0;
    bool in_tree_succeeded = false;
    bool out_tree_succeeded = false;
    double alpha_sum = 0.0;  // sum over X_depth
    double beta_sum = 0.0;   // sum over Y_depth
};

/// Lower-bound path-weight estimator of P_x^(2 depth + 1)(y): the in-tree into
/// y is built first, then the out-tree from x avoiding it.
ZLowResult z_lower(const Digraph& g, Vertex x, Vertex y, std::size_t depth);

struct ZUpResult {
    double Z_up = 0.0;
    double exact = 0.0;      // P_x^(l0 + 1)(y)
    double remainder = 0.0;  // exact - Z_up
    UpDepths depths;
    double alpha_sum = 0.0;  // sum over all of X of P_x^(l1)(u); <= 1
    double beta_sum = 0.0;   // over Y_l2 \ X
    bool in_tree_succeeded = false;
    bool out_tree_succeeded = false;
    /// Every term of Z_up is the weight of a distinct walk of length l0 + 1,
    /// so remainder >= 0 is a deterministic check on every instance.
    bool remainder_checked = true;
};

/// Upper-bound configuration: out-tree from x to depth l1 grown first (no
/// avoid set), in-tree into y to depth l2, alpha_{l1,u} = P_x^(l1)(u).
ZUpResult z_upper_report(const Digraph& g, Vertex x, Vertex y, double np, double eta);

/// Exact P_x^(k)(y) by repeated propagation.
double k_step_probability(const Digraph& g, Vertex x, Vertex y, std::size_t k);

} // namespace dwalk
