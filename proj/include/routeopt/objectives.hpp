#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "gas.hpp"
#include "genome.hpp"
#include "graph.hpp"
#include "instance.hpp"
#include "scenarios.hpp"
#include "swap.hpp"

namespace routeopt {

/// F = (S, −G, −Σ, −R), stored with raw signs (G, Σ, R are costs).
struct ObjectiveVector {
    double S = 0;      // surplus, ETH               (maximize)
    double G = 0;      // gas, ETH                   (minimize)
    double Sigma = 0;  // CVaR dispersion, ETH       (minimize)
    double R = 0;      // risk score, dimensionless  (minimize)

    bool operator==(const ObjectiveVector&) const = default;
};

inline double net_surplus(const ObjectiveVector& v) { return v.S - v.G; }

inline std::array<double, 4> maximize_form(const ObjectiveVector& v) {
    return {v.S, -v.G, -v.Sigma, -v.R};
}

/// Pareto dominance in the maximize orientation; equal vectors do not
/// dominate.  Any NaN is a caller bug surfaced as InvalidVector.
inline bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
    for (double x : {a.S, a.G, a.Sigma, a.R, b.S, b.G, b.Sigma, b.R})
        if (std::isnan(x)) throw Error(Errc::invalid_vector, "NaN objective");
    return a.S >= b.S && a.G <= b.G && a.Sigma <= b.Sigma && a.R <= b.R && !(a == b);
}

/// θᵀ(S, −G, −Σ, −R) with θ ≥ 0 normalized to ‖θ‖₁ = 1 (normalized here if
/// the caller passed raw policy weights).
inline double scalarize(const ObjectiveVector& v, std::array<double, 4> theta) {
    double sum = 0;
    for (double t : theta) {
        if (t < 0) throw Error(Errc::negative_theta, "theta must be non-negative");
        sum += t;
    }
    if (!(sum > 0)) throw Error(Errc::invalid_input, "theta must not be all zero");
    for (double& t : theta) t /= sum;
    return theta[0] * v.S - theta[1] * v.G - theta[2] * v.Sigma - theta[3] * v.R;
}

/// Table-2 policy weights (λ_S, λ_G, λ_Σ, λ_R) = (1.0, regime λ_G, 0.3, 0.2).
inline std::array<double, 4> policy_theta(double lambda_gas) {
    return {1.0, lambda_gas, 0.3, 0.2};
}

struct RiskParams {
    double lambda_sand = 0.1;
    double lambda_inc = 0.05;
    double lambda_rev = 0.05;
    double utilization_penalty = 0.05;  // default source for λ_inc/λ_rev
    double utilization_threshold = 0.5;
};

// ---- route simulation ----

/// Outcome of pushing the split order through the market once.  Paths run in
/// ascending index on a shared market copy, so paths sharing a pool see each
/// other's impact.
struct RouteSim {
    double out = 0;  // dst-token units received
    std::vector<double> path_out;  // dst units per path, index-aligned with the genome
    std::vector<std::pair<int, double>> edge_flow;  // edge index -> summed input units
    int hops = 0;
    int tick_crossings = 0;
    int high_util_hops = 0;
    bool complete = true;  // no partial fills along the way
};

namespace detail {

inline std::size_t band_index(const UniV3Params& q, double s) {
    for (std::size_t i = 0; i < q.bands.size(); ++i)
        if (s <= q.bands[i].sqrt_hi) return i;
    return q.bands.size() - 1;
}

/// Market overlay: copies of only the pools the route touches.
class Overlay {
public:
    explicit Overlay(const std::vector<Pool>& base) : base_(base) {}

    template <typename Perturb>
    const Pool& get(int idx, Perturb&& perturb) {
        for (auto& [i, p] : touched_)
            if (i == idx) return p;
        touched_.emplace_back(idx, perturb(base_[static_cast<std::size_t>(idx)], idx));
        return touched_.back().second;
    }

    void put(int idx, Pool p) {
        for (auto& [i, q] : touched_)
            if (i == idx) {
                q = std::move(p);
                return;
            }
        touched_.emplace_back(idx, std::move(p));
    }

private:
    const std::vector<Pool>& base_;
    std::vector<std::pair<int, Pool>> touched_;
};

}  // namespace detail

/// Simulate the genome; `perturb(pool, idx)` maps a base pool to the market
/// state under evaluation (identity for the deterministic market).
template <typename Perturb>
inline RouteSim simulate_route(const RouteGenome& genome, const DexGraph& graph,
                               const std::vector<Pool>& pools, const Order& order,
                               Perturb&& perturb) {
    RouteSim sim;
    sim.path_out.assign(genome.paths.size(), 0.0);
    detail::Overlay market(pools);

    for (std::size_t k = 0; k < genome.paths.size(); ++k) {
        double amount = genome.weights[k] * order.quantity;
        if (amount <= 0.0) continue;
        for (int ei : genome.paths[k]) {
            const auto& edge = graph.edges[static_cast<std::size_t>(ei)];
            const Pool& state = market.get(edge.pool, perturb);

            bool found = false;
            for (auto& [e, f] : sim.edge_flow)
                if (e == ei) {
                    f += amount;
                    found = true;
                    break;
                }
            if (!found) sim.edge_flow.emplace_back(ei, amount);
            ++sim.hops;
            if (amount > depth(pools[static_cast<std::size_t>(edge.pool)], edge.from) * 0.5)
                ++sim.high_util_hops;

            const bool is_v3 = state.kind == PoolKind::UniV3;
            const auto pre_band = is_v3
                                      ? detail::band_index(std::get<UniV3Params>(state.params),
                                                           std::get<UniV3Params>(state.params).sqrt_price)
                                      : 0;
            auto r = swap_exact_in(state, edge.from, edge.to, amount);
            if (is_v3) {
                const auto& q = std::get<UniV3Params>(r.new_pool.params);
                if (detail::band_index(q, q.sqrt_price) != pre_band) ++sim.tick_crossings;
            }
            if (!r.fully_filled) sim.complete = false;
            amount = r.amount_out;
            market.put(edge.pool, std::move(r.new_pool));
        }
        sim.path_out[k] = amount;
        sim.out += amount;
    }
    return sim;
}

inline RouteSim simulate_route(const RouteGenome& genome, const DexGraph& graph,
                               const std::vector<Pool>& pools, const Order& order) {
    return simulate_route(genome, graph, pools, order, [](const Pool& p, int) { return p; });
}

inline RouteSim simulate_route(const RouteGenome& genome, const DexGraph& graph,
                               const std::vector<Pool>& pools, const Order& order,
                               const Scenario& sc) {
    return simulate_route(genome, graph, pools, order, [&](const Pool& p, int idx) {
        return apply_scenario(p, sc.mult[static_cast<std::size_t>(idx)]);
    });
}

// ---- the four objective evaluators ----

/// S = out·price(dst) − Q·price(src), in ETH; deterministic slippage is
/// inside S by construction.
inline double evaluate_surplus(const RouteGenome& genome, const DexGraph& graph,
                               const Instance& inst) {
    const auto sim = simulate_route(genome, graph, inst.pools, inst.order);
    return sim.out * inst.eth_price(inst.order.dst) -
           inst.order.quantity * inst.eth_price(inst.order.src);
}

/// Mean of the worst ⌈(1−α)·n⌉ losses, floored at zero.
inline double cvar_tail(std::vector<double> losses, double alpha) {
    if (losses.empty()) return 0.0;
    const auto n = losses.size();
    // Guard the ceil against binary-fraction noise in (1−α)·n.
    auto m = static_cast<std::size_t>(std::ceil((1.0 - alpha) * static_cast<double>(n) - 1e-9));
    m = std::min(std::max<std::size_t>(m, 1), n);
    std::partial_sort(losses.begin(), losses.begin() + static_cast<std::ptrdiff_t>(m), losses.end(),
                      std::greater<>());
    double tail = 0;
    for (std::size_t i = 0; i < m; ++i) tail += losses[i];
    return std::max(tail / static_cast<double>(m), 0.0);
}

/// CVaR_α of scenario losses −ΔS_ω relative to the base surplus, floored at
/// zero so pure improvement never scores as dispersion.
inline double evaluate_dispersion(const RouteGenome& genome, const DexGraph& graph,
                                  const Instance& inst, const ScenarioSet& scenarios) {
    if (scenarios.scenarios.empty()) return 0.0;
    const double p_src = inst.eth_price(inst.order.src), p_dst = inst.eth_price(inst.order.dst);
    const double cost = inst.order.quantity * p_src;
    const double s_base = simulate_route(genome, graph, inst.pools, inst.order).out * p_dst - cost;

    std::vector<double> losses;
    losses.reserve(scenarios.scenarios.size());
    for (const auto& sc : scenarios.scenarios) {
        const double s_w = simulate_route(genome, graph, inst.pools, inst.order, sc).out * p_dst - cost;
        losses.push_back(s_base - s_w);
    }
    return cvar_tail(std::move(losses), scenarios.alpha);
}

/// R = λ_sand·Σu_e² + λ_inc·ι + λ_rev·ρ with ι = hops + K and ρ = hops that
/// cross a UniV3 tick or push utilization past the threshold.  ι counts the
/// genome's planned hops — complexity is structural, independent of flow.
inline double evaluate_risk(const RouteGenome& genome, const DexGraph& graph, const Instance& inst,
                            const RiskParams& params = {}) {
    const auto sim = simulate_route(genome, graph, inst.pools, inst.order);
    double sandwich = 0;
    for (const auto& [ei, flow] : sim.edge_flow) {
        const auto& edge = graph.edges[static_cast<std::size_t>(ei)];
        const double u = flow / depth(inst.pools[static_cast<std::size_t>(edge.pool)], edge.from);
        sandwich += u * u;
    }
    std::size_t planned_hops = 0;
    for (const auto& path : genome.paths) planned_hops += path.size();
    const double iota = static_cast<double>(planned_hops) + static_cast<double>(genome.k());
    const double rho = static_cast<double>(sim.tick_crossings + sim.high_util_hops);
    return params.lambda_sand * sandwich + params.lambda_inc * iota + params.lambda_rev * rho;
}

struct EvalContext {
    const DexGraph* graph = nullptr;
    const Instance* inst = nullptr;
    ScenarioSet scenarios;
    GasModel gas;
    RiskParams risk;
};

inline EvalContext make_context(const DexGraph& graph, const Instance& inst,
                                const ScenarioParams& sc_params = {}, GasModel gas = {},
                                RiskParams risk = {}, std::uint64_t scenario_seed = 1) {
    EvalContext ctx;
    ctx.graph = &graph;
    ctx.inst = &inst;
    ctx.scenarios = make_scenarios(inst.pools, sc_params, scenario_seed);
    gas.gas_price_gwei = inst.gas_price_gwei;
    ctx.gas = gas;
    ctx.risk = risk;
    return ctx;
}

inline ObjectiveVector evaluate_vector(const RouteGenome& genome, const EvalContext& ctx) {
    const auto& graph = *ctx.graph;
    const auto& inst = *ctx.inst;
    ObjectiveVector v;
    v.S = evaluate_surplus(genome, graph, inst);
    v.G = evaluate_gas(genome, graph, ctx.gas);
    v.Sigma = evaluate_dispersion(genome, graph, inst, ctx.scenarios);
    v.R = evaluate_risk(genome, graph, inst, ctx.risk);
    return v;
}

}  // namespace routeopt
