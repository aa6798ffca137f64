#pragma once

// Hybrid controller: profile the instance, score it with a fixed logistic
// rule, run the deterministic solver always and the GA when the score clears
// the threshold, validate both candidates, and deploy by gross surplus with
// the deterministic route as the guaranteed floor.

#include <array>
#include <cmath>
#include <mutex>
#include <optional>
#include <vector>

#include "deterministic.hpp"
#include "nsga2.hpp"
#include "validation.hpp"

namespace routeopt {

/// z = (Q/D̄, f_liq, d_het, γ_gas) over the part of the market the order can
/// actually reach.
struct InstanceProfile {
    double size_ratio = 0;  // order quantity over mean reachable pool depth
    double f_liq = 0;       // 1 − HHI of depth shares across parallel pools
    double d_het = 0;       // coefficient of variation of reachable depths
    double gas_price = 0;   // gwei
};

struct HybridConfig {
    double tau = 0.5;
    std::array<double, 4> score_weights{2.0, 2.0, 1.0, -1.0};
    double score_bias = -1.0;
    double gas_norm_gwei = 100.0;  // γ_gas enters h(z) as γ/100
    ValidationCaps caps;
    int breaker_limit = 3;
    double total_budget_ms = 2000;
    double det_budget_ms = 500;
    GAConfig ga;  // ga.time_budget_ms acts as the soft cap inside the total
};

enum class RouteEngine { det, ga };

struct HybridResult {
    bool found = false;
    RouteEngine chosen = RouteEngine::det;
    RouteGenome deployed;
    ObjectiveVector deployed_vector{};
    InstanceProfile profile;
    double score = 0;  // h(z)
    bool ga_ran = false;
    bool fallback_triggered = false;  // GA candidate existed but failed validation
    BaselineResult det;
    ValidationReport det_validation;
    std::optional<GAResult> ga;
    std::optional<ValidationReport> ga_validation;
    double elapsed_ms = 0;
};

/// Features are computed over pools on feasible src→dst paths only; depth is
/// measured on the side the route enters the pool from (first-seen direction
/// in canonical path order).
inline InstanceProfile profile_instance(const DexGraph& g, const Instance& inst,
                                        int max_hops = max_hops_default) {
    const auto paths = enumerate_paths(g, inst.order.src, inst.order.dst, max_hops);
    if (paths.empty()) throw Error(Errc::no_feasible_path, "profile: no src->dst route");

    std::vector<double> pool_depth(g.pools.size(), -1.0);
    std::vector<char> edge_used(g.edges.size(), 0);
    for (const auto& p : paths)
        for (int ei : p) {
            edge_used[static_cast<std::size_t>(ei)] = 1;
            const auto& e = g.edges[static_cast<std::size_t>(ei)];
            auto& d = pool_depth[static_cast<std::size_t>(e.pool)];
            if (d < 0) d = depth(g.pools[static_cast<std::size_t>(e.pool)], e.from);
        }

    std::vector<double> depths;
    for (double d : pool_depth)
        if (d >= 0) depths.push_back(d);

    double mean = 0;
    for (double d : depths) mean += d;
    mean /= static_cast<double>(depths.size());
    double var = 0;
    for (double d : depths) var += (d - mean) * (d - mean);
    var /= static_cast<double>(depths.size());

    InstanceProfile z;
    z.size_ratio = inst.order.quantity / mean;
    z.d_het = std::sqrt(var) / mean;
    z.gas_price = inst.gas_price_gwei;

    // Fragmentation: per token pair, the HHI of depth shares across the pools
    // serving it; pairs are blended by their total depth.
    struct PairStat {
        int a, b;
        std::vector<std::pair<int, double>> pools;  // pool index -> depth
    };
    std::vector<PairStat> pairs;
    for (std::size_t ei = 0; ei < g.edges.size(); ++ei) {
        if (!edge_used[ei]) continue;
        const auto& e = g.edges[ei];
        const int a = std::min(e.from, e.to), b = std::max(e.from, e.to);
        PairStat* ps = nullptr;
        for (auto& cand : pairs)
            if (cand.a == a && cand.b == b) ps = &cand;
        if (!ps) {
            pairs.push_back({a, b, {}});
            ps = &pairs.back();
        }
        bool seen = false;
        for (const auto& [pool, d] : ps->pools) seen = seen || pool == e.pool;
        if (!seen) ps->pools.emplace_back(e.pool, pool_depth[static_cast<std::size_t>(e.pool)]);
    }
    double hhi_acc = 0, weight_acc = 0;
    for (const auto& ps : pairs) {
        double total = 0;
        for (const auto& [pool, d] : ps.pools) total += d;
        double hhi = 0;
        for (const auto& [pool, d] : ps.pools) hhi += (d / total) * (d / total);
        hhi_acc += hhi * total;
        weight_acc += total;
    }
    z.f_liq = 1.0 - hhi_acc / weight_acc;
    return z;
}

/// h(z) = logistic(wᵀ[Q/D̄, f_liq, d_het, γ/100] + b); high size and
/// fragmentation push toward the GA, expensive gas pushes away.
inline double selection_score(const InstanceProfile& z, const HybridConfig& cfg = {}) {
    const double lin = cfg.score_weights[0] * z.size_ratio + cfg.score_weights[1] * z.f_liq +
                       cfg.score_weights[2] * z.d_het +
                       cfg.score_weights[3] * (z.gas_price / cfg.gas_norm_gwei) + cfg.score_bias;
    return 1.0 / (1.0 + std::exp(-lin));
}

/// Cross-solve anomaly counter.  Opens (GA off) after `limit` consecutive GA
/// validation failures; one GA-off cycle later it closes again.  Shared
/// between concurrent solves, hence the lock.
class CircuitBreaker {
public:
    explicit CircuitBreaker(int limit = 3) : limit_(limit) {}

    bool open() const {
        std::lock_guard lock(m_);
        return open_;
    }

    /// Report one finished solve cycle.  Cycles without a GA candidate leave
    /// the failure streak untouched; an off-cycle while open closes the
    /// breaker.
    void observe_cycle(bool ga_ran, bool ga_validation_passed) {
        std::lock_guard lock(m_);
        if (open_) {
            open_ = false;
            failures_ = 0;
            return;
        }
        if (!ga_ran) return;
        failures_ = ga_validation_passed ? 0 : failures_ + 1;
        if (failures_ >= limit_) open_ = true;
    }

private:
    mutable std::mutex m_;
    int limit_;
    int failures_ = 0;
    bool open_ = false;
};

namespace detail {

/// Deployment rule: among validated candidates take the higher gross surplus
/// S, ties to the deterministic route, so S(deployed) ≥ S(det) whenever the
/// deterministic route is valid.  A GA candidate that fails validation
/// triggers the fallback flag; if nothing validates the solve reports no
/// route.
inline void choose_deployment(HybridResult& res) {
    const bool det_ok = res.det.found && res.det_validation.passed();
    const bool ga_ok =
        res.ga.has_value() && res.ga_validation.has_value() && res.ga_validation->passed();
    res.fallback_triggered = res.ga_ran && !ga_ok;
    if (det_ok && (!ga_ok || res.det.vector.S >= res.ga->best.vector.S)) {
        res.found = true;
        res.chosen = RouteEngine::det;
        res.deployed = res.det.genome;
        res.deployed_vector = res.det.vector;
    } else if (ga_ok) {
        res.found = true;
        res.chosen = RouteEngine::ga;
        res.deployed = res.ga->best.genome;
        res.deployed_vector = res.ga->best.vector;
    }
}

}  // namespace detail

inline HybridResult solve_hybrid(const EvalContext& ctx, const HybridConfig& cfg = {},
                                 CircuitBreaker* breaker = nullptr) {
    if (!(cfg.tau >= 0 && cfg.tau <= 1))
        throw Error(Errc::invalid_input, "tau must lie in [0,1]");
    if (!(cfg.caps.max_slippage > 0) || !(cfg.caps.max_gas_eth > 0))
        throw Error(Errc::invalid_input, "validation caps must be positive");

    const auto t0 = std::chrono::steady_clock::now();
    HybridResult res;
    res.profile = profile_instance(*ctx.graph, *ctx.inst, cfg.ga.max_hops);
    res.score = selection_score(res.profile, cfg);

    DetConfig det_cfg;
    det_cfg.budget_ms = cfg.det_budget_ms;
    det_cfg.caps = cfg.caps;
    det_cfg.k_max = cfg.ga.k_max;
    det_cfg.max_hops = cfg.ga.max_hops;
    res.det = deterministic_solve(ctx, det_cfg);
    if (res.det.found)
        res.det_validation = validate_route(res.det.genome, res.det.vector, ctx, cfg.caps);

    res.ga_ran = res.score >= cfg.tau && !(breaker && breaker->open());
    if (res.ga_ran) {
        GAConfig ga_cfg = cfg.ga;
        const double remaining = cfg.total_budget_ms - detail::ms_since(t0);
        ga_cfg.time_budget_ms = std::min(ga_cfg.time_budget_ms, std::max(0.0, remaining));
        std::vector<RouteGenome> seeds;
        if (res.det.found) seeds.push_back(res.det.genome);
        res.ga = evolve(ctx, seeds, ga_cfg);
        res.ga_validation = validate_route(res.ga->best.genome, res.ga->best.vector, ctx, cfg.caps);
    }

    detail::choose_deployment(res);
    if (breaker)
        breaker->observe_cycle(res.ga_ran,
                               res.ga_validation.has_value() && res.ga_validation->passed());
    res.elapsed_ms = detail::ms_since(t0);
    return res;
}

}  // namespace routeopt
