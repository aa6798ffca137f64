#pragma once

// Deterministic baseline: Bellman-Ford-seeded candidate paths plus two split
// optimizers (greedy water-filling and a coarse simplex grid).  Everything
// here is RNG-free, so a given instance and config always reproduce the same
// genome bit for bit.

#include <algorithm>
#include <limits>
#include <vector>

#include "graph.hpp"
#include "objectives.hpp"
#include "timing.hpp"
#include "validation.hpp"

namespace routeopt {

enum class BaselineMethod { water_fill, simplex_grid, cycle_seed };

struct BaselineResult {
    RouteGenome genome;       // empty when !found
    ObjectiveVector vector{};
    BaselineMethod method = BaselineMethod::water_fill;
    double elapsed_ms = 0;
    bool found = false;
};

struct DetConfig {
    double budget_ms = 500;
    int water_fill_units = 100;
    int top_paths = 8;  // candidate pool before K_max truncation
    int k_max = k_max_default;
    int max_hops = max_hops_default;
    int max_cycles = 8;
    ValidationCaps caps{};
    bool thread_clock = false;  // meter the budget on this thread's CPU clock
};

namespace detail {

/// Push `amount` through the path on `market`; commit updates the pools.
inline double run_path(const Path& path, const DexGraph& graph, std::vector<Pool>& market,
                       double amount, bool commit) {
    for (int ei : path) {
        const auto& edge = graph.edges[static_cast<std::size_t>(ei)];
        auto r = swap_exact_in(market[static_cast<std::size_t>(edge.pool)], edge.from, edge.to,
                               amount);
        amount = r.amount_out;
        if (commit) market[static_cast<std::size_t>(edge.pool)] = std::move(r.new_pool);
    }
    return amount;
}

}  // namespace detail

/// Candidate paths for the split optimizers and GA seeding: the top src->dst
/// paths by summed log-rate cost at probe size Q/K_max, augmented with any
/// lower-ranked path that shares an edge with a detected negative cycle (such
/// paths ride an underpriced edge even when their total rank is poor).
inline std::vector<Path> baseline_routes(const DexGraph& graph, const Order& order,
                                         const std::vector<EdgeWeight>& weights,
                                         const DetConfig& cfg = {}) {
    if (!(order.quantity > 0))
        throw Error(Errc::invalid_amount, "baseline_routes: order quantity must be > 0");
    auto all = enumerate_paths(graph, order.src, order.dst, cfg.max_hops);
    if (all.empty())
        throw Error(Errc::no_path_exists, "baseline_routes: no src->dst path within hop limit");

    std::vector<double> total(all.size(), 0.0);
    for (std::size_t i = 0; i < all.size(); ++i)
        for (int ei : all[i]) total[i] += weights[static_cast<std::size_t>(ei)].c;
    std::vector<std::size_t> rank(all.size());
    for (std::size_t i = 0; i < rank.size(); ++i) rank[i] = i;
    // enumerate_paths order (shortest, then lexicographic) breaks cost ties
    std::stable_sort(rank.begin(), rank.end(),
                     [&](std::size_t a, std::size_t b) { return total[a] < total[b]; });

    std::vector<char> on_cycle(graph.edges.size(), 0);
    for (const auto& cycle : find_negative_cycles(graph, weights, cfg.max_cycles))
        for (int ei : cycle) on_cycle[static_cast<std::size_t>(ei)] = 1;

    std::vector<Path> out;
    for (std::size_t pos = 0; pos < rank.size(); ++pos) {
        const auto& path = all[rank[pos]];
        if (pos < static_cast<std::size_t>(cfg.top_paths)) {
            out.push_back(path);
            continue;
        }
        const bool touches = std::any_of(path.begin(), path.end(), [&](int ei) {
            return on_cycle[static_cast<std::size_t>(ei)] != 0;
        });
        if (touches) out.push_back(path);
    }
    return out;
}

/// Greedy water-filling: Q is split into equal units, each assigned to the
/// path with the highest marginal output on the evolving market copy (ties to
/// the lowest index).  If the budget cuts the fill short, the placed units
/// are normalized as-is.
inline BaselineResult water_fill_split(const std::vector<Path>& paths, const EvalContext& ctx,
                                       double budget_ms = 500, int units = 100,
                                       bool thread_clock = false) {
    const double t0 = detail::now_ms(thread_clock);
    const auto& graph = *ctx.graph;
    const auto& inst = *ctx.inst;

    const double unit = inst.order.quantity / units;
    std::vector<Pool> market = inst.pools;
    std::vector<int> alloc(paths.size(), 0);
    int placed = 0;
    for (; placed < units; ++placed) {
        if (detail::now_ms(thread_clock) - t0 > budget_ms) break;
        std::size_t best = 0;
        double best_out = -1.0;
        for (std::size_t k = 0; k < paths.size(); ++k) {
            const double gain = detail::run_path(paths[k], graph, market, unit, false);
            if (gain > best_out) {
                best_out = gain;
                best = k;
            }
        }
        detail::run_path(paths[best], graph, market, unit, true);
        ++alloc[best];
    }

    BaselineResult res;
    res.method = BaselineMethod::water_fill;
    if (placed == 0) alloc[0] = placed = 1;  // budget gone before the first unit
    for (std::size_t k = 0; k < paths.size(); ++k) {
        if (alloc[k] == 0) continue;
        res.genome.paths.push_back(paths[k]);
        res.genome.weights.push_back(static_cast<double>(alloc[k]) / placed);
    }
    res.vector = evaluate_vector(res.genome, ctx);
    res.found = true;
    res.elapsed_ms = detail::now_ms(thread_clock) - t0;
    return res;
}

/// Exhaustive search over split ratios on a 0.1-step simplex grid; paths with
/// a zero grid weight are dropped from the genome (no gas is paid for them).
/// Returns the argmax of net surplus S - G, first grid point on ties.
inline BaselineResult simplex_grid_search(const std::vector<Path>& paths_in, const EvalContext& ctx,
                                          double budget_ms = 500, int k_max = k_max_default,
                                          bool thread_clock = false) {
    const double t0 = detail::now_ms(thread_clock);
    const auto& graph = *ctx.graph;
    const auto& inst = *ctx.inst;

    std::vector<Path> paths(paths_in.begin(),
                            paths_in.begin() + std::min<std::size_t>(paths_in.size(),
                                                                     static_cast<std::size_t>(k_max)));
    const int K = static_cast<int>(paths.size());
    constexpr int steps = 10;  // weight resolution 0.1

    BaselineResult res;
    res.method = BaselineMethod::simplex_grid;
    if (K == 0) return res;
    double best_net = -std::numeric_limits<double>::infinity();

    std::vector<int> comp(static_cast<std::size_t>(K), 0);
    // Enumerate compositions of `steps` into K parts, lexicographic.
    const auto visit = [&](const std::vector<int>& c) {
        RouteGenome cand;
        for (int k = 0; k < K; ++k) {
            if (c[static_cast<std::size_t>(k)] == 0) continue;
            cand.paths.push_back(paths[static_cast<std::size_t>(k)]);
            cand.weights.push_back(c[static_cast<std::size_t>(k)] / static_cast<double>(steps));
        }
        const double net = evaluate_surplus(cand, graph, inst) - evaluate_gas(cand, graph, ctx.gas);
        if (net > best_net) {
            best_net = net;
            res.genome = std::move(cand);
        }
    };
    const auto enumerate = [&](auto&& self, int k, int left) -> bool {
        if (detail::now_ms(thread_clock) - t0 > budget_ms &&
            best_net > -std::numeric_limits<double>::infinity())
            return false;
        if (k == K - 1) {
            comp[static_cast<std::size_t>(k)] = left;
            visit(comp);
            return true;
        }
        for (int c = left; c >= 0; --c) {
            comp[static_cast<std::size_t>(k)] = c;
            if (!self(self, k + 1, left - c)) return false;
        }
        return true;
    };
    enumerate(enumerate, 0, steps);

    res.vector = evaluate_vector(res.genome, ctx);
    res.found = true;
    res.elapsed_ms = detail::now_ms(thread_clock) - t0;
    return res;
}

/// Full deterministic baseline: seed paths from the weighted graph, truncate
/// to the K_max best, run both split optimizers, keep the higher net surplus
/// among the candidates that clear the validation caps (ties favor the
/// water-fill result).
inline BaselineResult deterministic_solve(const EvalContext& ctx, const DetConfig& cfg = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto& graph = *ctx.graph;
    const auto& inst = *ctx.inst;

    BaselineResult res;
    std::vector<Path> paths;
    try {
        const auto weights = edge_weights(graph, inst.order.quantity / cfg.k_max);
        paths = baseline_routes(graph, inst.order, weights, cfg);
    } catch (const Error&) {
        res.elapsed_ms = detail::ms_since(t0);
        return res;  // found = false
    }
    paths.resize(std::min<std::size_t>(paths.size(), static_cast<std::size_t>(cfg.k_max)));

    auto wf = water_fill_split(paths, ctx, cfg.budget_ms / 2, cfg.water_fill_units);
    auto sg = simplex_grid_search(paths, ctx, cfg.budget_ms - detail::ms_since(t0), cfg.k_max);

    const bool wf_ok = validate_route(wf.genome, wf.vector, ctx, cfg.caps).passed();
    const bool sg_ok = validate_route(sg.genome, sg.vector, ctx, cfg.caps).passed();
    if (wf_ok && (!sg_ok || net_surplus(wf.vector) >= net_surplus(sg.vector)))
        res = std::move(wf);
    else if (sg_ok)
        res = std::move(sg);
    res.elapsed_ms = detail::ms_since(t0);
    return res;
}

}  // namespace routeopt
