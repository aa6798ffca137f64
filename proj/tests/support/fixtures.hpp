#pragma once

// Pool builders and randomized generators shared by the unit tests and the
// acceptance runner.

#include <algorithm>
#include <string>
#include <vector>

#include <routeopt/pool.hpp>
#include <routeopt/rng.hpp>

namespace fixtures {

using namespace routeopt;

inline Pool make_v2(double x, double y, double fee, int t0 = 0, int t1 = 1, std::string id = "v2") {
    Pool p;
    p.id = std::move(id);
    p.kind = PoolKind::UniV2;
    p.tokens = {t0, t1};
    p.fee = fee;
    p.params = UniV2Params{x, y};
    return p;
}

inline Pool make_v3(double s0, std::vector<TickBand> bands, double fee, int t0 = 0, int t1 = 1,
                    std::string id = "v3") {
    Pool p;
    p.id = std::move(id);
    p.kind = PoolKind::UniV3;
    p.tokens = {t0, t1};
    p.fee = fee;
    p.params = UniV3Params{s0, std::move(bands)};
    return p;
}

inline Pool make_balancer(std::vector<double> balances, std::vector<double> weights, double fee,
                          std::vector<int> tokens = {0, 1}, std::string id = "bal") {
    Pool p;
    p.id = std::move(id);
    p.kind = PoolKind::BalancerWeighted;
    p.tokens = std::move(tokens);
    p.fee = fee;
    p.params = BalancerParams{std::move(balances), std::move(weights)};
    return p;
}

inline Pool make_curve(double amp, std::vector<double> balances, double fee,
                       std::vector<int> tokens = {0, 1}, std::string id = "crv") {
    Pool p;
    p.id = std::move(id);
    p.kind = PoolKind::CurveStable;
    p.tokens = std::move(tokens);
    p.fee = fee;
    p.params = CurveParams{amp, std::move(balances)};
    return p;
}

inline Pool make_dodo(double p0, double k, double base, double quote, double base_target,
                      double fee, int t0 = 0, int t1 = 1, std::string id = "dodo") {
    Pool p;
    p.id = std::move(id);
    p.kind = PoolKind::DodoPMM;
    p.tokens = {t0, t1};
    p.fee = fee;
    p.params = DodoParams{p0, k, base, quote, base_target};
    return p;
}

inline Pool make_kyber(double x, double y, double amp, double fee, int t0 = 0, int t1 = 1,
                       std::string id = "dmm") {
    Pool p;
    p.id = std::move(id);
    p.kind = PoolKind::KyberDMM;
    p.tokens = {t0, t1};
    p.fee = fee;
    p.params = KyberParams{x, y, amp * x, amp * y, amp};
    return p;
}

inline double random_fee(Rng& rng) {
    switch (rng.index(5)) {
        case 0: return 0.0;
        case 1: return 0.0005;
        case 2: return 0.003;
        case 3: return 0.01;
        default: return rng.uniform(0.0, 0.05);
    }
}

/// Random valid pool of the given kind with reserves around `scale`.
inline Pool random_pool(PoolKind kind, Rng& rng, double scale = 1e4) {
    const double fee = random_fee(rng);
    switch (kind) {
        case PoolKind::UniV2:
            return make_v2(scale * rng.lognormal(0, 0.8), scale * rng.lognormal(0, 0.8), fee);
        case PoolKind::UniV3: {
            const double s0 = rng.lognormal(0, 0.5);
            const auto n_bands = static_cast<std::size_t>(rng.uniform_int(1, 5));
            // Boundaries tile [0.6, 1.4]·s0 so s0 always lies inside the range.
            std::vector<double> cuts{0.6 * s0, 1.4 * s0};
            for (std::size_t i = 1; i < n_bands; ++i) cuts.push_back(s0 * rng.uniform(0.62, 1.38));
            std::sort(cuts.begin(), cuts.end());
            std::vector<TickBand> bands;
            for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
                bands.push_back({scale * rng.lognormal(0, 0.8), cuts[i], cuts[i + 1]});
            return make_v3(s0, std::move(bands), fee);
        }
        case PoolKind::BalancerWeighted: {
            const auto n = static_cast<std::size_t>(rng.uniform_int(2, 3));
            std::vector<double> bal(n), w = rng.simplex(n);
            // Keep weights away from zero: realistic pools, and the invariant
            // bisection oracle loses precision at extreme weight ratios.
            while (*std::min_element(w.begin(), w.end()) < 0.05) w = rng.simplex(n);
            for (auto& b : bal) b = scale * rng.lognormal(0, 0.8);
            // Renormalise exactly so the 1e-12 weight-sum invariant holds.
            double sum = 0;
            for (std::size_t i = 0; i + 1 < n; ++i) sum += w[i];
            w[n - 1] = 1.0 - sum;
            std::vector<int> tokens(n);
            for (std::size_t i = 0; i < n; ++i) tokens[i] = static_cast<int>(i);
            return make_balancer(std::move(bal), std::move(w), fee, std::move(tokens));
        }
        case PoolKind::CurveStable: {
            const auto n = static_cast<std::size_t>(rng.uniform_int(2, 3));
            const double base = scale * rng.lognormal(0, 0.5);
            std::vector<double> bal(n);
            for (auto& b : bal) b = base * rng.uniform(0.5, 2.0);
            std::vector<int> tokens(n);
            for (std::size_t i = 0; i < n; ++i) tokens[i] = static_cast<int>(i);
            return make_curve(std::pow(10.0, rng.uniform(0.5, 3.3)), std::move(bal), fee,
                              std::move(tokens));
        }
        case PoolKind::DodoPMM: {
            const double p0 = rng.lognormal(0, 0.5);
            const double target = scale * rng.lognormal(0, 0.5);
            return make_dodo(p0, rng.uniform(0.0, 1.0), target * rng.uniform(0.7, 1.3),
                             p0 * target * rng.uniform(0.5, 2.0), target, fee);
        }
        case PoolKind::KyberDMM:
            return make_kyber(scale * rng.lognormal(0, 0.8), scale * rng.lognormal(0, 0.8),
                              rng.uniform(1.0, 3.0), fee);
    }
    return {};
}

/// Trade size spanning dust to beyond the input-side reserve.
inline double random_amount(const Pool& p, int token_in, Rng& rng) {
    return depth(p, token_in) * std::pow(10.0, rng.uniform(-6.0, 0.3));
}

}  // namespace fixtures

#include <routeopt/graph.hpp>

namespace fixtures {

/// Edge index for (pool_id, from) — handy when wiring genomes by hand.
inline int edge_of(const routeopt::DexGraph& g, const std::string& pool_id, int from) {
    for (std::size_t i = 0; i < g.edges.size(); ++i)
        if (g.edges[i].pool_id == pool_id && g.edges[i].from == from) return static_cast<int>(i);
    throw std::runtime_error("no such edge: " + pool_id);
}

}  // namespace fixtures
