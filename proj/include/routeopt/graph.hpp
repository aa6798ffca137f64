#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "pool.hpp"
#include "swap.hpp"

namespace routeopt {

/// One directed use of a pool.
struct PoolEdge {
    int pool = -1;  // index into DexGraph::pools
    std::string pool_id;
    int from = -1, to = -1;  // token indices
    PoolKind kind = PoolKind::UniV2;
};

/// A route leg sequence, stored as edge indices into DexGraph::edges.
using Path = std::vector<int>;

struct DexGraph {
    int n_tokens = 0;
    std::vector<Pool> pools;
    std::vector<PoolEdge> edges;        // sorted by (pool_id, from, to)
    std::vector<std::vector<int>> out;  // token -> outgoing edge indices

    bool empty() const { return edges.empty(); }
    const Pool& pool_of(const PoolEdge& e) const { return pools[static_cast<std::size_t>(e.pool)]; }
    const Pool& pool_of(int edge) const { return pool_of(edges[static_cast<std::size_t>(edge)]); }
};

struct EdgeWeight {
    double c = 0;    // log-domain cost: −ln((1−φ)·ρ)
    double rho = 0;  // marginal/average rate excluding the fee
    double phi = 0;
};

inline DexGraph build_graph(const std::vector<Pool>& pools) {
    DexGraph g;
    g.pools = pools;
    std::set<std::string> ids;
    for (const auto& p : pools) {
        validate_pool(p);
        if (!ids.insert(p.id).second)
            throw Error(Errc::duplicate_pool_id, "duplicate pool id: " + p.id);
    }
    for (std::size_t pi = 0; pi < pools.size(); ++pi) {
        const auto& p = pools[pi];
        for (int a : p.tokens) {
            g.n_tokens = std::max(g.n_tokens, a + 1);
            for (int b : p.tokens)
                if (a != b) g.edges.push_back({static_cast<int>(pi), p.id, a, b, p.kind});
        }
    }
    std::sort(g.edges.begin(), g.edges.end(), [](const PoolEdge& x, const PoolEdge& y) {
        return std::tie(x.pool_id, x.from, x.to) < std::tie(y.pool_id, y.from, y.to);
    });
    g.out.assign(static_cast<std::size_t>(g.n_tokens), {});
    for (std::size_t i = 0; i < g.edges.size(); ++i)
        g.out[static_cast<std::size_t>(g.edges[i].from)].push_back(static_cast<int>(i));
    return g;
}

/// Eq.-6 style weight: ρ is the fee-free rate (spot at probe_size = 0, else
/// the average execution rate for the probe), and c = −ln((1−φ)·ρ).
inline EdgeWeight edge_weight(const DexGraph& g, const PoolEdge& e, double probe_size = 0.0) {
    const Pool& p = g.pools[static_cast<std::size_t>(e.pool)];
    EdgeWeight w;
    w.phi = p.fee;
    if (probe_size <= 0.0) {
        w.rho = spot_price(p, e.from, e.to) / (1.0 - p.fee);
    } else {
        const auto r = swap_exact_in(p, e.from, e.to, probe_size);
        w.rho = r.amount_out / (probe_size * (1.0 - p.fee));
    }
    w.c = -std::log((1.0 - p.fee) * w.rho);
    return w;
}

inline std::vector<EdgeWeight> edge_weights(const DexGraph& g, double probe_size = 0.0) {
    std::vector<EdgeWeight> ws;
    ws.reserve(g.edges.size());
    for (const auto& e : g.edges) ws.push_back(edge_weight(g, e, probe_size));
    return ws;
}

namespace detail {

/// Rotate a cycle so it starts at its smallest edge index.  Edge indices are
/// ordered by (pool_id, from, to), so this is the lexicographically-smallest-
/// edge-id canonical form.
inline Path canonical_rotation(Path cycle) {
    const auto smallest = std::min_element(cycle.begin(), cycle.end());
    std::rotate(cycle.begin(), smallest, cycle.end());
    return cycle;
}

/// Bellman–Ford reachability screen (virtual zero-weight super source): true
/// iff some negative cycle exists.  O(|V|·|E|).
inline bool has_negative_cycle(const DexGraph& g, const std::vector<EdgeWeight>& w) {
    std::vector<double> dist(static_cast<std::size_t>(g.n_tokens), 0.0);
    for (int round = 0; round < g.n_tokens; ++round) {
        bool relaxed = false;
        for (std::size_t i = 0; i < g.edges.size(); ++i) {
            const auto& e = g.edges[i];
            const double cand = dist[static_cast<std::size_t>(e.from)] + w[i].c;
            if (cand < dist[static_cast<std::size_t>(e.to)] - 1e-15) {
                dist[static_cast<std::size_t>(e.to)] = cand;
                relaxed = true;
            }
        }
        if (!relaxed) return false;
    }
    return true;
}

}  // namespace detail

/// All vertex-simple negative cycles (Σc < −1e-12), canonically rotated,
/// ascending by total cost, truncated to max_cycles.  A Bellman–Ford pass
/// gates the exponential enumeration, so acyclic or fee-dominated graphs
/// return in O(|V|·|E|).
inline std::vector<Path> find_negative_cycles(const DexGraph& g, const std::vector<EdgeWeight>& w,
                                              int max_cycles = 8) {
    if (g.empty() || !detail::has_negative_cycle(g, w)) return {};

    std::vector<Path> found;
    std::vector<char> on_path(static_cast<std::size_t>(g.n_tokens), 0);
    Path stack;

    // Johnson-style: each simple cycle is emitted exactly once, anchored at
    // its minimum vertex (only vertices >= the anchor are visited).
    auto dfs = [&](auto&& self, int anchor, int v, double cost) -> void {
        for (int ei : g.out[static_cast<std::size_t>(v)]) {
            const auto& e = g.edges[static_cast<std::size_t>(ei)];
            if (e.to < anchor) continue;
            const double c2 = cost + w[static_cast<std::size_t>(ei)].c;
            if (e.to == anchor) {
                stack.push_back(ei);
                if (c2 < -1e-12) found.push_back(detail::canonical_rotation(stack));
                stack.pop_back();
                continue;
            }
            if (on_path[static_cast<std::size_t>(e.to)]) continue;
            on_path[static_cast<std::size_t>(e.to)] = 1;
            stack.push_back(ei);
            self(self, anchor, e.to, c2);
            stack.pop_back();
            on_path[static_cast<std::size_t>(e.to)] = 0;
        }
    };
    for (int s = 0; s < g.n_tokens; ++s) {
        on_path[static_cast<std::size_t>(s)] = 1;
        dfs(dfs, s, s, 0.0);
        on_path[static_cast<std::size_t>(s)] = 0;
    }

    auto total = [&](const Path& cyc) {
        double t = 0;
        for (int ei : cyc) t += w[static_cast<std::size_t>(ei)].c;
        return t;
    };
    std::sort(found.begin(), found.end(), [&](const Path& a, const Path& b) {
        const double ta = total(a), tb = total(b);
        if (ta != tb) return ta < tb;
        return a < b;
    });
    if (std::cmp_greater(found.size(), max_cycles)) found.resize(static_cast<std::size_t>(max_cycles));
    return found;
}

/// All simple src→dst token paths with at most max_hops edges, shortest
/// first, then lexicographic by edge ids.
inline std::vector<Path> enumerate_paths(const DexGraph& g, int src, int dst, int max_hops = 4) {
    if (src == dst) throw Error(Errc::src_equals_dst, "src equals dst");
    if (max_hops < 1 || max_hops > 4)
        throw Error(Errc::invalid_input, "max_hops must lie in [1,4]");
    if (src < 0 || dst < 0 || src >= g.n_tokens || dst >= g.n_tokens)
        throw Error(Errc::unknown_token, "src/dst not in graph");

    std::vector<Path> found;
    std::vector<char> visited(static_cast<std::size_t>(g.n_tokens), 0);
    Path stack;
    auto dfs = [&](auto&& self, int v) -> void {
        for (int ei : g.out[static_cast<std::size_t>(v)]) {
            const auto& e = g.edges[static_cast<std::size_t>(ei)];
            if (e.to == dst) {
                stack.push_back(ei);
                found.push_back(stack);
                stack.pop_back();
                continue;
            }
            if (visited[static_cast<std::size_t>(e.to)] || std::cmp_equal(stack.size() + 1, max_hops))
                continue;
            visited[static_cast<std::size_t>(e.to)] = 1;
            stack.push_back(ei);
            self(self, e.to);
            stack.pop_back();
            visited[static_cast<std::size_t>(e.to)] = 0;
        }
    };
    visited[static_cast<std::size_t>(src)] = 1;
    dfs(dfs, src);

    std::sort(found.begin(), found.end(), [](const Path& a, const Path& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return found;
}

}  // namespace routeopt
