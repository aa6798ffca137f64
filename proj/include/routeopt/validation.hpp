#pragma once

// Pre-deployment route validation: the cheap settlement-style checks every
// candidate must clear before it can be deployed (or counted as "found" by a
// solver).  Kept separate from the controller so the deterministic solver can
// apply the same caps.

#include <cmath>
#include <string>
#include <vector>

#include "objectives.hpp"

namespace routeopt {

struct ValidationCaps {
    double max_slippage = 0.10;  // per-path realized-vs-spot shortfall
    double max_gas_eth = 1.0;
};

struct ValidationReport {
    bool simplex_ok = true;
    bool slippage_ok = true;
    bool gas_ok = true;
    bool sim_ok = true;  // cached S re-simulates within tolerance
    std::vector<std::string> failures;

    bool passed() const { return simplex_ok && slippage_ok && gas_ok && sim_ok; }
};

/// Check a candidate against the caps.  Slippage per path compares the
/// realized rate (from the shared sequential simulation, so sibling paths'
/// impact counts) against the product of pre-trade spot prices along the path.
inline ValidationReport validate_route(const RouteGenome& genome, const ObjectiveVector& vector,
                                       const EvalContext& ctx, const ValidationCaps& caps = {}) {
    const auto& graph = *ctx.graph;
    const auto& inst = *ctx.inst;
    ValidationReport rep;

    double sum_w = 0;
    for (double w : genome.weights) {
        sum_w += w;
        if (!(w >= 0.0) || !std::isfinite(w)) rep.simplex_ok = false;
    }
    if (genome.paths.empty() || genome.paths.size() != genome.weights.size() ||
        std::abs(sum_w - 1.0) > 1e-9)
        rep.simplex_ok = false;
    if (!rep.simplex_ok) {
        rep.failures.push_back("simplex");
        return rep;  // remaining checks assume a well-formed genome
    }

    const auto sim = simulate_route(genome, graph, inst.pools, inst.order);
    for (std::size_t k = 0; k < genome.paths.size(); ++k) {
        const double q = genome.weights[k] * inst.order.quantity;
        if (q <= 0.0) continue;
        double spot = 1.0;
        for (int ei : genome.paths[k]) {
            const auto& edge = graph.edges[static_cast<std::size_t>(ei)];
            spot *= spot_price(inst.pools[static_cast<std::size_t>(edge.pool)], edge.from, edge.to);
        }
        const double slippage = 1.0 - (sim.path_out[k] / q) / spot;
        if (slippage > caps.max_slippage) {
            rep.slippage_ok = false;
            rep.failures.push_back("slippage");
            break;
        }
    }

    if (vector.G > caps.max_gas_eth) {
        rep.gas_ok = false;
        rep.failures.push_back("gas");
    }

    const double p_dst = inst.eth_price(inst.order.dst);
    const double p_src = inst.eth_price(inst.order.src);
    const double s_re = sim.out * p_dst - inst.order.quantity * p_src;
    if (std::abs(s_re - vector.S) > 1e-9) {
        rep.sim_ok = false;
        rep.failures.push_back("sim-mismatch");
    }
    return rep;
}

}  // namespace routeopt
