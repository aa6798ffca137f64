#pragma once

// Synthetic benchmark instances.  Each (stratum, seed) pair deterministically
// produces one market: a token universe with a src/dst order, relay tokens
// connecting them, and a configurable number of parallel pools per token
// pair.  The gas regime is applied after all random draws, so strata that
// differ only in gas price share identical market geometry seed for seed.
//
// The liquidity layout is deliberately adversarial for rank-by-cost route
// selection: one relay ("hub") carries a deep, slightly underpriced inbound
// pool, so the individually cheapest paths all funnel through it.  The more
// parallel pools the hub's outbound pair has (fragmentation), the more of
// the top-ranked paths share that single bottleneck.

#include <cstdint>
#include <string>
#include <vector>

#include <routeopt/instance.hpp>
#include <routeopt/pool.hpp>
#include <routeopt/rng.hpp>
#include <routeopt/strata.hpp>

namespace routeopt {

namespace detail {

/// Per-pool recipe before kind-specific realization: a value-balanced pool
/// between t0 < t1 holding `value_eth` per side, with the t0->t1 rate skewed
/// by `edge` (positive = better than value parity for t0->t1 flow).
struct PoolSketch {
    int t0 = 0, t1 = 0;
    double value_eth = 0;
    double edge = 0;
    double fee = 0.003;
    int force_kind = -1;      // >= 0 pins the venue kind regardless of diversity
    bool curved_only = false;  // restrict to constant-product-style books
};

inline Pool realize_pool(const PoolSketch& sk, PoolKind kind, const std::vector<Token>& tokens,
                         double band_width, const std::string& id, Rng& rng) {
    if (sk.force_kind >= 0) kind = static_cast<PoolKind>(sk.force_kind);
    const double p0 = tokens[static_cast<std::size_t>(sk.t0)].eth_price;
    const double p1 = tokens[static_cast<std::size_t>(sk.t1)].eth_price;

    // StableSwap quotes unit parity whatever the tokens are worth, so it is
    // only realized between tokens whose values genuinely sit at parity;
    // anywhere else it would mint a mispricing out of thin air.
    if (kind == PoolKind::CurveStable && std::fabs(p0 / p1 - 1.0) > 0.005)
        kind = PoolKind::KyberDMM;

    // Sketch edges only realize on curved books, where size works against
    // the taker.  Oracle-priced and amplified venues track external value by
    // construction; giving them a standing mispricing on top of their flat
    // impact would mint nearly-free money at any size.
    const bool curved = kind == PoolKind::UniV2 || kind == PoolKind::UniV3 ||
                        kind == PoolKind::BalancerWeighted;
    const double base0 = sk.value_eth / p0;
    const double base1 = sk.value_eth / p1 * (curved ? 1.0 + sk.edge : 1.0);
    const double rate = base1 / base0;

    Pool p;
    p.id = id;
    p.tokens = {sk.t0, sk.t1};
    p.fee = sk.fee;
    p.kind = kind;

    switch (kind) {
        case PoolKind::UniV2:
            p.params = UniV2Params{base0, base1};
            break;
        case PoolKind::UniV3: {
            const double s0 = std::sqrt(rate);
            const double L = base0 * s0;
            const double w = band_width;
            UniV3Params q;
            q.sqrt_price = s0;
            q.bands = {{0.4 * L, s0 / (w * w * w), s0 / w},
                       {L, s0 / w, s0 * w},
                       {0.4 * L, s0 * w, s0 * w * w * w}};
            p.params = std::move(q);
            break;
        }
        case PoolKind::BalancerWeighted:
            p.params = BalancerParams{{base0, base1}, {0.5, 0.5}};
            break;
        case PoolKind::CurveStable:
            p.params = CurveParams{rng.uniform(20.0, 300.0), {base0, base1}};
            break;
        case PoolKind::DodoPMM:
            p.params = DodoParams{rate, rng.uniform(0.1, 0.6), base0, base1, base0};
            break;
        case PoolKind::KyberDMM: {
            const double amp = rng.uniform(1.5, 4.0);
            p.params = KyberParams{base0, base1, amp * base0, amp * base1, amp};
            break;
        }
    }
    return p;
}

}  // namespace detail

inline Instance generate_instance(const Stratum& s, std::uint64_t seed) {
    if (!is_admissible(s))
        throw Error(Errc::invalid_stratum, "not an admissible benchmark cell: " + s.label());

    // Geometry stream keyed by everything except the gas regime.
    const auto geo_key = static_cast<std::uint64_t>(s.order_size) * 6u +
                         static_cast<std::uint64_t>(s.fragmentation) * 2u +
                         static_cast<std::uint64_t>(s.amm_diversity);
    Rng rng(mix64(seed) ^ mix64(0xB0B1'57A7'0000'0000ULL + geo_key));

    Instance inst;
    inst.stratum = s.label();
    inst.gen_seed = seed;
    {
        std::string id = s.label() + "#" + std::to_string(seed);
        for (auto& ch : id)
            if (ch == '/') ch = '-';
        inst.id = id;
    }

    // ---- token universe: src, dst, relays, appendix tokens ----
    const auto n_tokens = static_cast<int>(rng.uniform_int(6, 10));
    inst.tokens.push_back({"SRC", 18, 1.0});
    // Kept clear of src parity so the traded pair never realizes as a
    // stable-stable book, whose flat invariant would trivialize the order.
    inst.tokens.push_back({"DST", 18, rng.uniform(0.6, 0.9)});
    for (int t = 2; t < n_tokens; ++t)
        inst.tokens.push_back({"T" + std::to_string(t), 18, rng.uniform(0.6, 1.8)});

    std::vector<int> middles;
    for (int t = 2; t < n_tokens; ++t) middles.push_back(t);
    rng.shuffle(middles);
    const auto n_relays = static_cast<std::size_t>(rng.uniform_int(3, 4));
    const std::vector<int> relays(middles.begin(), middles.begin() + static_cast<long>(n_relays));
    const int hub = relays[0];

    // Token pairs, canonical (lo, hi), with a flow orientation for rate skew.
    struct PairSpec {
        int a = 0, b = 0;     // canonical order a < b
        bool flow_from_a = true;  // src->dst flow direction within the pair
        bool hub_inbound = false;
        bool hub_outbound = false;
        bool order_pair = false;
    };
    std::vector<PairSpec> pairs;
    const auto add_pair = [&](int from, int to, bool hub_in = false, bool hub_out = false,
                              bool order = false) {
        for (const auto& pr : pairs)
            if (pr.a == std::min(from, to) && pr.b == std::max(from, to)) return;
        pairs.push_back({std::min(from, to), std::max(from, to), from < to, hub_in, hub_out, order});
    };
    add_pair(0, 1, false, false, true);
    for (int m : relays) {
        add_pair(0, m, m == hub);
        add_pair(m, 1, false, m == hub);
    }
    // Cross-links between relays give the search 3- and 4-hop alternatives.
    const auto n_cross = static_cast<int>(rng.uniform_int(1, 3));
    for (int e = 0; e < n_cross && n_relays >= 2; ++e) {
        const auto i = rng.index(n_relays);
        auto j = rng.index(n_relays);
        if (i != j) add_pair(relays[i], relays[j]);
    }
    // Appendix tokens hang off a relay: dead-end texture for the enumerator.
    for (std::size_t t = n_relays; t < middles.size(); ++t)
        add_pair(relays[rng.index(n_relays)], middles[t]);

    // ---- pools per pair with Dirichlet depth shares ----
    const auto pools_per_pair = [&]() -> int {
        switch (s.fragmentation) {
            case FragLevel::low: return static_cast<int>(rng.uniform_int(1, 2));
            case FragLevel::medium: return static_cast<int>(rng.uniform_int(3, 4));
            case FragLevel::high: return static_cast<int>(rng.uniform_int(5, 8));
        }
        return 1;
    };
    const double mean_value_target =
        order_quantity_eth(s.order_size) / depth_ratio(s.order_size);
    const double fee_tiers[] = {0.0005, 0.003, 0.003, 0.003, 0.01};

    // Relay books are mid-cap venues: deep and mispriced relative to retail
    // flow, unremarkable relative to institutional flow.  For small and
    // medium orders the hub's inbound bottleneck is pinned near twice the
    // mean pool depth — deep enough that its mispricing survives a one-third
    // probe, shallow enough that pushing the whole order through it costs
    // real slippage — and the mispricing is sized per order class: small
    // orders see it sit between the extra hop's gas cost and the ranking
    // margin, so the cheapest-looking routes pay more gas than they recoup;
    // medium orders see it dominate probe-size impact but fall well short of
    // full-size impact.  Large orders get no special hub at all: at that
    // scale depth is everything, parallel books on the traded pair carry the
    // flow, and route choice reduces to allocation.
    const bool hub_matters = s.order_size != OrderSize::large;
    const auto hub_edge = [&]() -> double {
        switch (s.order_size) {
            case OrderSize::small: return rng.uniform(0.0048, 0.0060);
            case OrderSize::medium: return rng.uniform(0.020, 0.024);
            case OrderSize::large: return 0.0;
        }
        return 0.0;
    };

    std::vector<detail::PoolSketch> sketches;
    for (const auto& pr : pairs) {
        const int count = pools_per_pair();
        // Book sizes disperse widely in retail markets; at institutional
        // scale market makers size to the flow and the dispersion narrows.
        double budget = mean_value_target * static_cast<double>(count) *
                        rng.lognormal(0.0, hub_matters ? 0.25 : 0.10);
        // Liquidity begets liquidity: pairs touching the hub run deeper, so
        // several parallel hub routes survive the probe-cost ranking.  At
        // institutional scale the pattern inverts with fragmentation: the
        // more parallel books the traded pair carries, the more of the total
        // depth they hold between them, and bridge books stop scaling with
        // it — in the heavily fragmented case detours fall out of contention
        // at the probe stage already.
        if (hub_matters) {
            if (pr.hub_inbound || pr.hub_outbound) budget *= 1.75;
        } else if (pr.order_pair) {
            // Total majors depth doesn't shrink just because fewer venues
            // carry it: a sparse book is a deep book.
            if (s.fragmentation == FragLevel::low) budget *= 2.5;
        } else {
            switch (s.fragmentation) {
                case FragLevel::low: budget *= 0.5; break;
                case FragLevel::medium: budget *= 1.5; break;
                case FragLevel::high: budget *= 0.35; break;
            }
        }
        auto shares = rng.simplex(static_cast<std::size_t>(count));
        std::size_t deepest = 0;
        for (std::size_t k = 1; k < shares.size(); ++k)
            if (shares[k] > shares[deepest]) deepest = k;

        for (std::size_t k = 0; k < shares.size(); ++k) {
            detail::PoolSketch sk;
            sk.t0 = pr.a;
            sk.t1 = pr.b;
            // The traded pair is a majors pair: it lives on curved books,
            // whose slippage grows with size.  Flat-impact venues directly on
            // it would execute the full order at nearly the probe price and
            // flatten the gap between ranking well and executing well.  For
            // institutional orders the same applies to every pair that can
            // carry the flow in two hops: oracle-repriced books are sized
            // for retail and sit on the peripheral pairs instead.
            const bool carries_order = pr.a <= 1 || pr.b <= 1;
            sk.curved_only = pr.order_pair || (!hub_matters && carries_order);
            sk.value_eth = std::max(budget * shares[k], 0.002 * budget);
            // Hub-adjacent books all trade on the standard tier, and the
            // traded pair never reaches the cut-rate 5bp tier: a cheap book
            // directly on the order pair would crowd into the probe ranking
            // and dilute the hub's pull.
            if (pr.hub_inbound || pr.hub_outbound)
                sk.fee = 0.003;
            else if (pr.order_pair)
                sk.fee = fee_tiers[1 + rng.index(4)];
            else
                sk.fee = fee_tiers[rng.index(5)];
            double edge = 0.0;
            if (hub_matters && pr.hub_inbound && k == deepest) {
                sk.value_eth = 2.0 * mean_value_target * rng.lognormal(0.0, 0.10);
                sk.fee = 0.003;  // the standard tier keeps its ranking stable
                sk.force_kind = static_cast<int>(PoolKind::UniV2);
                edge = hub_edge();
            } else if (pr.order_pair && k == deepest) {
                // The traded pair's anchor venue: deep, fairly priced, on the
                // standard tier, pinned like the hub so the two books keep a
                // stable depth relation.  Rank-by-cost passes it over for the
                // hub's mispricing; anything that prices gas or full-size
                // impact comes back to it.  Institutional books are already
                // sized to the flow, so the pin only acts as a floor there.
                const double pin = 1.3 * mean_value_target * rng.lognormal(0.0, 0.10);
                sk.value_eth = hub_matters ? pin : std::max(sk.value_eth, pin);
                sk.fee = 0.003;
                sk.force_kind = static_cast<int>(PoolKind::UniV2);
            } else if (shares[k] < 0.10) {
                edge = rng.uniform(0.002, 0.006);  // thin pools quote sharp
            }
            sk.edge = pr.flow_from_a ? edge : -edge / (1.0 + edge);
            sketches.push_back(sk);
        }
    }

    // Normalize so the mean per-pool value depth hits the size target exactly.
    double mean_value = 0;
    for (const auto& sk : sketches) mean_value += sk.value_eth;
    mean_value /= static_cast<double>(sketches.size());
    const double scale = mean_value_target / mean_value;

    // ---- realize pools ----
    // Band width scales with the flow a book expects to absorb: ranges that
    // would clamp a routine probe don't survive as institutional venues.
    const double band_width = s.order_size == OrderSize::large ? 1.30 : 1.12;
    const PoolKind mixed_kinds[] = {PoolKind::UniV2,        PoolKind::UniV3,
                                    PoolKind::BalancerWeighted, PoolKind::CurveStable,
                                    PoolKind::DodoPMM,      PoolKind::KyberDMM};
    const PoolKind curved_kinds[] = {PoolKind::UniV2, PoolKind::UniV3,
                                     PoolKind::BalancerWeighted};
    for (std::size_t i = 0; i < sketches.size(); ++i) {
        auto sk = sketches[i];
        sk.value_eth *= scale;
        const PoolKind kind = s.amm_diversity == AmmDiversity::homogeneous_v2
                                  ? PoolKind::UniV2
                              : sk.curved_only ? curved_kinds[rng.index(3)]
                                               : mixed_kinds[rng.index(6)];
        inst.pools.push_back(detail::realize_pool(sk, kind, inst.tokens, band_width,
                                                  "p" + std::to_string(i), rng));
    }
    if (s.amm_diversity == AmmDiversity::mixed && inst.pools.size() > 1) {
        bool uniform_kind = true;
        for (const auto& p : inst.pools) uniform_kind &= p.kind == inst.pools[0].kind;
        if (uniform_kind) {  // guarantee >= 2 venue kinds
            for (std::size_t i = sketches.size(); i-- > 0;) {
                if (sketches[i].force_kind >= 0) continue;
                auto sk = sketches[i];
                sk.value_eth *= scale;
                const PoolKind other =
                    inst.pools[0].kind != PoolKind::UniV2 ? PoolKind::UniV2
                    : sk.curved_only                      ? PoolKind::UniV3
                                                          : PoolKind::KyberDMM;
                inst.pools[i] = detail::realize_pool(sk, other, inst.tokens, band_width,
                                                     inst.pools[i].id, rng);
                break;
            }
        }
    }

    inst.order = {0, 1, order_quantity_eth(s.order_size)};
    inst.gas_price_gwei = gas_price_gwei(s.gas_regime);  // no RNG draw: gas-matched
    validate_instance(inst);
    return inst;
}

}  // namespace routeopt
