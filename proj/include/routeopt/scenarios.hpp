#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "pool.hpp"
#include "rng.hpp"

namespace routeopt {

/// One market perturbation: a strictly positive multiplier per pool per
/// token slot.
struct Scenario {
    std::vector<std::vector<double>> mult;  // [pool][slot]
};

struct ScenarioSet {
    std::vector<Scenario> scenarios;
    double alpha = 0.95;
    std::uint64_t seed = 0;
};

struct ScenarioParams {
    int count = 20;            // |Ω|, Table-2 range 10..50
    double alpha = 0.95;
    double sigma = 0.02;       // lognormal reserve multiplier scale
    double shock_fraction = 0.2;
    double shock_size = 0.10;  // ±10% drain on the shocked pools
};

/// Deterministic scenario sampling: per-slot lognormal multipliers plus a
/// utilization shock draining a random fixed fraction of pools.
inline ScenarioSet make_scenarios(const std::vector<Pool>& pools, const ScenarioParams& params,
                                  std::uint64_t seed) {
    ScenarioSet set;
    set.alpha = params.alpha;
    set.seed = seed;
    Rng rng(mix64(seed) ^ 0x5ce9a6545u);
    const std::size_t n = pools.size();
    const auto n_shocked = static_cast<std::size_t>(
        std::llround(params.shock_fraction * static_cast<double>(n)));

    std::vector<std::size_t> order(n);
    for (int w = 0; w < params.count; ++w) {
        Scenario sc;
        sc.mult.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            sc.mult[i].resize(pools[i].arity());
            for (auto& m : sc.mult[i]) m = std::exp(params.sigma * rng.normal());
        }
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);
        for (std::size_t s = 0; s < n_shocked; ++s) {
            const double drain = rng.bernoulli(0.5) ? 1.0 - params.shock_size : 1.0 + params.shock_size;
            for (auto& m : sc.mult[order[s]]) m *= drain;
        }
        set.scenarios.push_back(std::move(sc));
    }
    return set;
}

/// Apply per-slot multipliers to one pool.  Two-slot multipliers map onto the
/// venue's state: reserve scaling for pool-like kinds, a liquidity/price
/// decomposition for UniV3, and an oracle-price shift for Dodo.
inline Pool apply_scenario(const Pool& pool, const std::vector<double>& mult) {
    Pool p = pool;
    switch (p.kind) {
        case PoolKind::UniV2: {
            auto& q = std::get<UniV2Params>(p.params);
            q.reserve0 *= mult[0];
            q.reserve1 *= mult[1];
            break;
        }
        case PoolKind::UniV3: {
            // token amounts scale with L; the price ratio m1/m0 shifts s0,
            // clamped into the banded range.
            auto& q = std::get<UniV3Params>(p.params);
            const double depth_mult = std::sqrt(mult[0] * mult[1]);
            const double price_mult = std::sqrt(mult[1] / mult[0]);
            for (auto& b : q.bands) b.liquidity *= depth_mult;
            q.sqrt_price = std::clamp(q.sqrt_price * price_mult, q.bands.front().sqrt_lo,
                                      q.bands.back().sqrt_hi);
            break;
        }
        case PoolKind::BalancerWeighted: {
            auto& q = std::get<BalancerParams>(p.params);
            for (std::size_t i = 0; i < q.balances.size(); ++i) q.balances[i] *= mult[i];
            break;
        }
        case PoolKind::CurveStable: {
            auto& q = std::get<CurveParams>(p.params);
            for (std::size_t i = 0; i < q.balances.size(); ++i) q.balances[i] *= mult[i];
            break;
        }
        case PoolKind::DodoPMM: {
            auto& q = std::get<DodoParams>(p.params);
            q.base_reserve *= mult[0];
            q.base_target *= mult[0];  // target tracks scale, keeping the curve shape
            q.quote_reserve *= mult[1];
            q.oracle_price *= mult[1] / mult[0];
            break;
        }
        case PoolKind::KyberDMM: {
            auto& q = std::get<KyberParams>(p.params);
            q.reserve0 *= mult[0];
            q.virtual0 *= mult[0];
            q.reserve1 *= mult[1];
            q.virtual1 *= mult[1];
            break;
        }
    }
    return p;
}

}  // namespace routeopt
