#include "dwalk/trees.hpp"

#include <algorithm>
#include <cmath>

#include "dwalk/chain.hpp"
#include "dwalk/error.hpp"
#include "dwalk/kernels.hpp"

namespace dwalk {

std::size_t LayeredTree::size() const {
    std::size_t s = 0;
    for (const auto& l : levels) s += l.size();
    return s;
}

double LayeredTree::last_level_weight() const {
    if (!succeeded) return 0.0;
    double s = 0.0;
    for (const auto& node : levels.back()) s += node.weight;
    return s;
}

std::vector<Vertex> LayeredTree::vertices() const {
    std::vector<Vertex> out;
    out.reserve(size());
    for (const auto& l : levels) {
        for (const auto& node : l) out.push_back(node.vertex);
    }
    return out;
}

namespace {

LayeredTree grow(const Digraph& g, Vertex root, std::size_t depth, std::span<const Vertex> avoid,
                 TreeDirection dir) {
    if (root >= g.n()) throw ValidationError("tree root out of range");
    LayeredTree tree;
    tree.root = root;
    tree.direction = dir;
    tree.depth = depth;
    tree.levels.resize(depth + 1);

    std::vector<char> seen(g.n(), 0);
    for (Vertex a : avoid) {
        if (a >= g.n()) throw ValidationError("avoid vertex out of range");
        seen[a] = 1;
    }
    seen[root] = 1;
    tree.levels[0].push_back({root, root, 1.0, 0});

    for (std::size_t i = 0; i < depth; ++i) {
        auto& cur = tree.levels[i];
        auto& next = tree.levels[i + 1];
        for (auto& node : cur) {
            const Vertex v = node.vertex;
            auto nbrs = dir == TreeDirection::in ? g.in(v) : g.out(v);
            for (Vertex w : nbrs) {
                if (seen[w]) continue;
                seen[w] = 1;
                // alpha excludes the end vertex, beta excludes the root.
                const double weight = dir == TreeDirection::in
                                          ? node.weight / static_cast<double>(g.out_degree(w))
                                          : node.weight / static_cast<double>(g.out_degree(v));
                next.push_back({w, v, weight, 0});
                ++node.children;
            }
        }
        std::sort(next.begin(), next.end(), [](const TreeNode& a, const TreeNode& b) { return a.vertex < b.vertex; });
    }
    tree.succeeded = true;
    for (std::size_t i = 0; i < depth && tree.succeeded; ++i) {
        if (tree.levels[i].empty()) tree.succeeded = false;
        for (const auto& node : tree.levels[i]) {
            if (node.children == 0) {
                tree.succeeded = false;
                break;
            }
        }
    }
    return tree;
}

std::vector<double> walk_distribution(const Digraph& g, Vertex x, std::size_t k) {
    const Chain c = chain_from(g);
    std::vector<double> cur(g.n(), 0.0), next(g.n());
    cur[x] = 1.0;
    for (std::size_t t = 0; t < k; ++t) {
        kernels::propagate(c, cur, next);
        cur.swap(next);
    }
    return cur;
}

} // namespace

LayeredTree build_in_tree(const Digraph& g, Vertex y, std::size_t depth, std::span<const Vertex> avoid) {
    if (std::find(avoid.begin(), avoid.end(), y) != avoid.end()) {
        throw ValidationError("in-tree root lies in the avoid set");
    }
    return grow(g, y, depth, avoid, TreeDirection::in);
}

LayeredTree build_out_tree(const Digraph& g, Vertex x, std::size_t depth, std::span<const Vertex> avoid) {
    return grow(g, x, depth, avoid, TreeDirection::out);
}

double log_np(std::size_t n, double np) {
    if (!(np > 1.0)) throw ValidationError("np must exceed 1 for tree depths");
    return std::log(static_cast<double>(n)) / std::log(np);
}

std::size_t low_depth(std::size_t n, double np) {
    return static_cast<std::size_t>(std::floor(2.0 / 3.0 * log_np(n, np)));
}

UpDepths up_depths(std::size_t n, double np, double eta) {
    if (!(eta > 0.0 && eta <= 1.0 / 250.0)) throw ValidationError("eta must lie in (0, 1/250]");
    UpDepths d;
    d.Lambda = log_np(n, np);
    const double l1 = std::round((1.0 - 10.0 * eta) * d.Lambda);
    const double l2 = std::ceil(11.0 * eta * d.Lambda);
    if (l1 < 1.0 || l2 < 1.0) throw ValidationError("n too small for eta");
    d.l1 = static_cast<std::size_t>(l1);
    d.l2 = static_cast<std::size_t>(l2);
    d.l0 = d.l1 + d.l2;
    return d;
}

ZLowResult z_lower(const Digraph& g, Vertex x, Vertex y, std::size_t depth) {
    if (x >= g.n() || y >= g.n()) throw ValidationError("vertex out of range");
    ZLowResult r;
    r.depth = depth;
    const LayeredTree ty = build_in_tree(g, y, depth);
    const auto yv = ty.vertices();
    const LayeredTree tx = build_out_tree(g, x, depth, yv);
    r.in_tree_succeeded = ty.succeeded;
    r.out_tree_succeeded = tx.succeeded;
    r.alpha_sum = tx.last_level_weight();
    r.beta_sum = ty.last_level_weight();
    if (!ty.succeeded || !tx.succeeded) return r;

    std::vector<double> beta(g.n(), 0.0);
    for (const auto& node : ty.levels[depth]) beta[node.vertex] = node.weight;
    for (const auto& node : tx.levels[depth]) {
        const std::size_t deg = g.out_degree(node.vertex);
        if (deg == 0) continue;
        double s = 0.0;
        for (Vertex v : g.out(node.vertex)) s += beta[v];
        r.Z += node.weight * s / static_cast<double>(deg);
    }
    return r;
}

ZUpResult z_upper_report(const Digraph& g, Vertex x, Vertex y, double np, double eta) {
    if (x >= g.n() || y >= g.n()) throw ValidationError("vertex out of range");
    ZUpResult r;
    r.depths = up_depths(g.n(), np, eta);
    const LayeredTree tx = build_out_tree(g, x, r.depths.l1);
    const LayeredTree ty = build_in_tree(g, y, r.depths.l2);
    r.out_tree_succeeded = tx.succeeded;
    r.in_tree_succeeded = ty.succeeded;

    const auto alpha_all = walk_distribution(g, x, r.depths.l1);
    std::vector<char> in_x(g.n(), 0);
    for (Vertex u : tx.vertices()) {
        in_x[u] = 1;
        r.alpha_sum += alpha_all[u];
    }

    if (ty.succeeded) {
        std::vector<double> beta(g.n(), 0.0);
        for (const auto& node : ty.levels[r.depths.l2]) {
            if (!in_x[node.vertex]) {
                beta[node.vertex] = node.weight;
                r.beta_sum += node.weight;
            }
        }
        for (Vertex u : tx.vertices()) {
            const std::size_t deg = g.out_degree(u);
            if (deg == 0 || alpha_all[u] == 0.0) continue;
            double s = 0.0;
            for (Vertex v : g.out(u)) s += beta[v];
            r.Z_up += alpha_all[u] * s / static_cast<double>(deg);
        }
    }
    r.exact = walk_distribution(g, x, r.depths.l0 + 1)[y];
    r.remainder = r.exact - r.Z_up;
    return r;
}

double k_step_probability(const Digraph& g, Vertex x, Vertex y, std::size_t k) {
    if (x >= g.n() || y >= g.n()) throw ValidationError("vertex out of range");
    return walk_distribution(g, x, k)[y];
}

} // namespace dwalk
