#include "dwalk/structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dwalk/error.hpp"

namespace dwalk {

std::vector<Vertex> small_vertices(const Digraph& g, double np) {
    if (!(np > 0.0)) throw ValidationError("np must be positive");
    const double threshold = np / 20.0;
    std::vector<Vertex> out;
    for (Vertex v = 0; v < g.n(); ++v) {
        if (static_cast<double>(std::min(g.in_degree(v), g.out_degree(v))) <= threshold) {
            out.push_back(v);
        }
    }
    return out;
}

namespace {

constexpr std::size_t kUnseen = std::numeric_limits<std::size_t>::max();

template <typename F>
void for_each_weak_neighbour(const Digraph& g, Vertex u, F&& f) {
    // Merge the two sorted lists so that a 2-cycle contributes one neighbour.
    auto o = g.out(u);
    auto i = g.in(u);
    std::size_t a = 0, b = 0;
    while (a < o.size() || b < i.size()) {
        Vertex w;
        if (b == i.size() || (a < o.size() && o[a] < i[b])) {
            w = o[a++];
        } else if (a == o.size() || i[b] < o[a]) {
            w = i[b++];
        } else {
            w = o[a++];
            ++b;
        }
        f(w);
    }
}

// Truncated BFS; returns visited vertices with distances <= radius.
std::vector<std::pair<Vertex, std::size_t>> weak_ball(const Digraph& g, Vertex s, std::size_t radius,
                                                      std::vector<std::size_t>& dist) {
    std::vector<std::pair<Vertex, std::size_t>> ball{{s, 0}};
    dist[s] = 0;
    for (std::size_t head = 0; head < ball.size(); ++head) {
        auto [u, du] = ball[head];
        if (du == radius) continue;
        for_each_weak_neighbour(g, u, [&](Vertex w) {
            if (dist[w] == kUnseen) {
                dist[w] = du + 1;
                ball.emplace_back(w, du + 1);
            }
        });
    }
    return ball;
}

void reset(std::vector<std::size_t>& dist, const std::vector<std::pair<Vertex, std::size_t>>& ball) {
    for (auto [v, d] : ball) dist[v] = kUnseen;
}

} // namespace

std::optional<std::size_t> weak_distance(const Digraph& g, Vertex u, Vertex v) {
    if (u >= g.n() || v >= g.n()) throw ValidationError("vertex out of range");
    if (u == v) return 0;
    std::vector<std::size_t> dist(g.n(), kUnseen);
    std::vector<Vertex> queue{u};
    dist[u] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const Vertex x = queue[head];
        for_each_weak_neighbour(g, x, [&](Vertex w) {
            if (dist[w] == kUnseen) {
                dist[w] = dist[x] + 1;
                queue.push_back(w);
            }
        });
        if (dist[v] != kUnseen) return dist[v];
    }
    return std::nullopt;
}

std::optional<std::size_t> shortest_weak_cycle_through(const Digraph& g, Vertex c, std::size_t max_len) {
    if (max_len < 3) return std::nullopt;
    // BFS from c labelling each vertex with the root child it descends from; a
    // non-tree edge joining two different branches closes a simple cycle through c.
    const std::size_t radius = max_len / 2;
    std::vector<std::size_t> dist(g.n(), kUnseen);
    std::vector<Vertex> parent(g.n(), 0);
    std::vector<Vertex> branch(g.n(), 0);
    std::vector<Vertex> queue{c};
    dist[c] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const Vertex u = queue[head];
        if (dist[u] == radius) continue;
        for_each_weak_neighbour(g, u, [&](Vertex w) {
            if (dist[w] == kUnseen) {
                dist[w] = dist[u] + 1;
                parent[w] = u;
                branch[w] = u == c ? w : branch[u];
                queue.push_back(w);
            }
        });
    }
    std::optional<std::size_t> best;
    for (Vertex a : queue) {
        if (a == c) continue;
        for_each_weak_neighbour(g, a, [&](Vertex b) {
            if (b == c || dist[b] == kUnseen || parent[a] == b || parent[b] == a) return;
            if (branch[a] == branch[b]) return;
            const std::size_t len = dist[a] + dist[b] + 1;
            if (len <= max_len && (!best || len < *best)) best = len;
        });
    }
    return best;
}

std::optional<double> ell10(std::size_t n) {
    // not applicable for n <= e^e
    const double lln = std::log(std::log(static_cast<double>(n)));
    if (!(lln > 1.0)) return std::nullopt;
    return std::log(static_cast<double>(n)) / (10.0 * lln);
}

StructReport structural_report(const Digraph& g, const StructOptions& opts) {
    if (!(opts.np > 0.0)) throw ValidationError("np must be positive");
    StructReport r;
    r.np = opts.np;
    r.c0 = opts.c0;
    r.small = small_vertices(g, opts.np);
    r.ell10 = opts.ell10_override ? opts.ell10_override : ell10(g.n());

    r.delta0 = 30.0 * opts.np;
    for (Vertex v = 0; v < g.n(); ++v) {
        const auto din = g.in_degree(v), dout = g.out_degree(v);
        r.max_in_degree = std::max(r.max_in_degree, din);
        r.max_out_degree = std::max(r.max_out_degree, dout);
        if (r.degrees_below_delta0 && static_cast<double>(std::max(din, dout)) >= r.delta0) {
            r.degrees_below_delta0 = false;
            r.high_degree_vertex = v;
        }
        if (static_cast<double>(std::min(din, dout)) < opts.c0 * opts.np) ++r.below_c0_count;
    }

    if (!r.ell10) return r;
    const double ell = *r.ell10;
    std::vector<char> is_small(g.n(), 0);
    for (Vertex s : r.small) is_small[s] = 1;
    std::vector<std::size_t> dist(g.n(), kUnseen);

    // (a) distances strictly below ell10 between distinct small vertices
    if (ell > 1.0) {
        const auto radius = static_cast<std::size_t>(std::ceil(ell) - 1.0);
        for (Vertex s : r.small) {
            auto ball = weak_ball(g, s, radius, dist);
            for (auto [v, d] : ball) {
                if (v != s && is_small[v] && static_cast<double>(d) < ell) {
                    r.small_pairs_separated = false;
                    r.close_pair = std::make_pair(std::min(s, v), std::max(s, v));
                    r.close_pair_distance = d;
                    break;
                }
            }
            reset(dist, ball);
            if (!r.small_pairs_separated) break;
        }
    }

    // (b) weak cycles of length <= ell10 within weak distance ell10 of a small vertex
    if (ell >= 3.0) {
        const auto radius = static_cast<std::size_t>(std::floor(ell));
        const auto max_len = static_cast<std::size_t>(std::floor(ell));
        for (Vertex s : r.small) {
            auto ball = weak_ball(g, s, radius, dist);
            reset(dist, ball);
            for (auto [v, d] : ball) {
                if (auto len = shortest_weak_cycle_through(g, v, max_len)) {
                    r.no_small_near_short_cycle = false;
                    r.near_cycle_vertex = s;
                    r.near_cycle_anchor = v;
                    r.near_cycle_length = len;
                    break;
                }
            }
            if (!r.no_small_near_short_cycle) break;
        }
    }
    return r;
}

} // namespace dwalk
