#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "dwalk/error.hpp"
#include "dwalk/trees.hpp"
#include "oracles.hpp"

using namespace dwalk;

namespace {

std::vector<Vertex> level(const LayeredTree& t, std::size_t i) {
    std::vector<Vertex> out;
    for (const auto& node : t.levels[i]) out.push_back(node.vertex);
    return out;
}

double weight(const LayeredTree& t, Vertex v) {
    for (const auto& lv : t.levels)
        for (const auto& node : lv)
            if (node.vertex == v) return node.weight;
    return -1;
}

// Straightforward rebuild: level i+1 = unseen, non-avoided neighbours of level
// i; parent = smallest-id neighbour in level i.
struct RefTree {
    std::vector<std::vector<Vertex>> levels;
    std::vector<Vertex> parent;
    std::vector<double> weight;
    bool ok = true;
};

RefTree reference(const Digraph& g, Vertex root, std::size_t depth, const std::set<Vertex>& avoid, bool out) {
    RefTree r;
    const std::size_t n = g.n();
    r.parent.assign(n, 0);
    r.weight.assign(n, 0.0);
    std::vector<char> seen(n, 0);
    seen[root] = 1;
    r.weight[root] = 1.0;
    r.levels.push_back({root});
    for (std::size_t i = 0; i < depth; ++i) {
        std::vector<Vertex> next;
        for (Vertex w = 0; w < n; ++w) {
            if (seen[w] || avoid.count(w)) continue;
            for (Vertex p : r.levels[i]) {  // levels are sorted, so the first hit is the smallest
                if (out ? g.has_edge(p, w) : g.has_edge(w, p)) {
                    next.push_back(w);
                    r.parent[w] = p;
                    r.weight[w] = out ? r.weight[p] / static_cast<double>(g.out_degree(p))
                                      : r.weight[p] / static_cast<double>(g.out_degree(w));
                    break;
                }
            }
        }
        for (Vertex p : r.levels[i]) {
            bool child = false;
            for (Vertex w : next) child |= r.parent[w] == p;
            if (!child) r.ok = false;
        }
        for (Vertex w : next) seen[w] = 1;
        r.levels.push_back(next);
    }
    return r;
}

} // namespace

TEST_SUITE("trees") {

TEST_CASE("in-tree examples") {
    const auto k3 = build_in_tree(complete_digraph(3), 0, 1);
    CHECK(level(k3, 1) == std::vector<Vertex>{1, 2});
    CHECK(weight(k3, 1) == 0.5);
    CHECK(weight(k3, 2) == 0.5);
    CHECK(k3.last_level_weight() == 1.0);
    CHECK(k3.succeeded);

    const auto c3 = build_in_tree(directed_cycle(3), 0, 2);
    CHECK(level(c3, 1) == std::vector<Vertex>{2});
    CHECK(level(c3, 2) == std::vector<Vertex>{1});
    CHECK(weight(c3, 1) == 1.0);

    std::vector<Edge> star;
    for (Vertex i = 1; i <= 5; ++i) star.emplace_back(i, 0);
    const auto s = build_in_tree(Digraph::from_edges(6, star), 0, 2);
    CHECK_FALSE(s.succeeded);
    CHECK(s.last_level_weight() == 0.0);

    const Vertex root[] = {0};
    CHECK_THROWS_AS(build_in_tree(complete_digraph(3), 0, 1, root), ValidationError);
}

TEST_CASE("out-tree examples") {
    const auto c3 = build_out_tree(directed_cycle(3), 0, 2);
    CHECK(level(c3, 1) == std::vector<Vertex>{1});
    CHECK(level(c3, 2) == std::vector<Vertex>{2});
    CHECK(weight(c3, 2) == 1.0);
    const auto k3 = build_out_tree(complete_digraph(3), 0, 1);
    CHECK(weight(k3, 1) == 0.5);
    CHECK(weight(k3, 2) == 0.5);
    const Vertex avoid[] = {1};
    CHECK(level(build_out_tree(complete_digraph(3), 0, 1, avoid), 1) == std::vector<Vertex>{2});
    // root itself may be in the avoid set
    const Vertex self[] = {0};
    CHECK(build_out_tree(complete_digraph(3), 0, 1, self).levels[1].size() == 2);
}

TEST_CASE("trees match a direct rebuild") {
    std::mt19937_64 rng(12);
    for (int it = 0; it < 300; ++it) {
        const std::size_t n = 5 + it % 20;
        const auto g = oracle::random_digraph(n, 0.25, rng);
        const auto root = static_cast<Vertex>(rng() % n);
        std::set<Vertex> avoid;
        for (int k = 0; k < it % 3; ++k) {
            const auto a = static_cast<Vertex>(rng() % n);
            if (a != root) avoid.insert(a);
        }
        const std::vector<Vertex> av(avoid.begin(), avoid.end());
        const std::size_t depth = 1 + it % 3;
        for (bool out : {true, false}) {
            bool sink = false;
            for (Vertex v = 0; v < n; ++v) sink |= g.out_degree(v) == 0;
            if (sink) continue;
            const auto t = out ? build_out_tree(g, root, depth, av) : build_in_tree(g, root, depth, av);
            const auto ref = reference(g, root, depth, avoid, out);
            CHECK(t.succeeded == ref.ok);
            for (std::size_t i = 0; i <= depth; ++i) {
                CHECK(level(t, i) == ref.levels[i]);
                for (const auto& node : t.levels[i]) {
                    CHECK(node.weight == doctest::Approx(ref.weight[node.vertex]).epsilon(1e-15));
                    if (i > 0) CHECK(node.parent == ref.parent[node.vertex]);
                }
            }
            // rebuilding gives the same structure
            const auto again = out ? build_out_tree(g, root, depth, av) : build_in_tree(g, root, depth, av);
            for (std::size_t i = 0; i <= depth; ++i) CHECK(level(again, i) == level(t, i));
            if (out) {
                double s = 0;
                for (const auto& node : t.levels[depth]) s += node.weight;
                CHECK(s <= 1.0 + 1e-12);
            }
        }
    }
}

TEST_CASE("depth rules") {
    CHECK(low_depth(1000, 5.0) == 2);  // (2/3) * 4.29
    CHECK(log_np(1000, 10.0) == doctest::Approx(3.0));
    const auto d = up_depths(2000, 3.0 * std::log(2000.0), 1.0 / 250.0);
    const double L = std::log(2000.0) / std::log(3.0 * std::log(2000.0));
    CHECK(d.Lambda == doctest::Approx(L));
    CHECK(d.l1 == static_cast<std::size_t>(std::lround(0.96 * L)));
    CHECK(d.l2 == static_cast<std::size_t>(std::ceil(11.0 / 250.0 * L)));
    CHECK(d.l0 == d.l1 + d.l2);
    CHECK_THROWS_AS(up_depths(20, 400.0, 0.004), ValidationError);  // Lambda = 1/2, l1 rounds to 0
    CHECK_THROWS_AS(up_depths(2000, 20.0, 0.01), ValidationError);
    CHECK_THROWS_AS(log_np(100, 1.0), ValidationError);
}

TEST_CASE("Z on the 3-cycle") {
    const auto r = z_lower(directed_cycle(3), 0, 0, 1);
    CHECK(r.Z == 1.0);
    CHECK(k_step_probability(directed_cycle(3), 0, 0, 3) == 1.0);
}

TEST_CASE("Z lower bound never exceeds the exact probability") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> pd(0.2, 0.8);
    std::size_t violations = 0, positive = 0;
    for (int it = 0; it < 1000; ++it) {
        const std::size_t n = 3 + it % 6;
        const auto g = oracle::random_strong_digraph(n, pd(rng), rng);
        const auto P = oracle::transition(g);
        for (std::size_t depth : {0, 1, 2}) {
            const auto Pk = oracle::power(P, 2 * depth + 1);
            for (Vertex x = 0; x < n; ++x)
                for (Vertex y = 0; y < n; ++y) {
                    const auto r = z_lower(g, x, y, depth);
                    if (r.Z > Pk[x][y] + 1e-12) ++violations;
                    positive += r.Z > 0;
                    CHECK(std::abs(k_step_probability(g, x, y, 2 * depth + 1) - Pk[x][y]) <= 1e-12);
                }
        }
    }
    CHECK(violations == 0);
    CHECK(positive > 1000);
}

TEST_CASE("upper configuration remainder is nonnegative") {
    std::mt19937_64 rng(78);
    for (int it = 0; it < 200; ++it) {
        const std::size_t n = 8;
        const auto g = oracle::random_strong_digraph(n, 0.3, rng);
        const auto x = static_cast<Vertex>(rng() % n), y = static_cast<Vertex>(rng() % n);
        const auto r = z_upper_report(g, x, y, 2.0, 1.0 / 250.0);
        CHECK(r.depths.l1 == 3);
        CHECK(r.depths.l2 == 1);
        CHECK(r.remainder >= -1e-12);
        CHECK(r.alpha_sum <= 1.0 + 1e-12);
        CHECK(std::abs(r.exact - oracle::power(oracle::transition(g), 5)[x][y]) <= 1e-12);
    }
}

}
