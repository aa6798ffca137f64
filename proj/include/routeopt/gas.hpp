#pragma once

#include "errors.hpp"
#include "genome.hpp"
#include "graph.hpp"

namespace routeopt {

/// Per-hop gas units by venue plus per-transaction overhead and safety
/// margin.  The CoW matching constants are carried for the internal-
/// settlement extension point but unused by the default pipeline.
struct GasModel {
    double univ2 = 150000;
    double univ3 = 200000;
    double balancer = 250000;
    double curve = 200000;
    double dodo = 180000;
    double kyber = 180000;
    double tx_overhead = 80000;
    double safety_margin = 0.10;
    double cow_match_base = 50000;
    double cow_match_per_token = 10000;
    double gas_price_gwei = 30.0;

    double hop_cost(PoolKind kind) const {
        switch (kind) {
            case PoolKind::UniV2: return univ2;
            case PoolKind::UniV3: return univ3;
            case PoolKind::BalancerWeighted: return balancer;
            case PoolKind::CurveStable: return curve;
            case PoolKind::DodoPMM: return dodo;
            case PoolKind::KyberDMM: return kyber;
        }
        throw Error(Errc::unknown_venue, "no gas constant for venue");
    }
};

/// Total gas in ETH: (overhead + Σ per-hop) · (1 + margin) · gwei · 1e-9.
inline double evaluate_gas(const RouteGenome& genome, const DexGraph& graph, const GasModel& gas) {
    double units = gas.tx_overhead;
    for (const auto& path : genome.paths)
        for (int ei : path) units += gas.hop_cost(graph.edges[static_cast<std::size_t>(ei)].kind);
    return units * (1.0 + gas.safety_margin) * gas.gas_price_gwei * 1e-9;
}

}  // namespace routeopt
