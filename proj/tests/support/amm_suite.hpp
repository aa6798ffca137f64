#pragma once

// Randomized AMM oracle sweep: for each venue kind, fuzz pools and trade
// sizes, then check the simulator against the independent oracles plus the
// structural invariants (post-state validity, output bounded by the reserve,
// constant-product conservation).

#include <cmath>
#include <sstream>
#include <string>

#include <routeopt/swap.hpp>

#include "amm_oracles.hpp"
#include "fixtures.hpp"

namespace amm_suite {

using namespace routeopt;

struct SuiteResult {
    int cases = 0;
    int failures = 0;
    double max_rel_err = 0;        // non-Curve kinds vs. oracle (criterion: 1e-9)
    double max_rel_err_curve = 0;  // Curve vs. bisection oracle (criterion: 1e-6)
    double max_conservation = 0;   // constant-product residual (criterion: 1e-12)
    std::string first_failure;
};

namespace detail {

inline double rel_diff(double a, double b) {
    const double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
    return std::fabs(a - b) / scale;
}

inline void note_failure(SuiteResult& res, const std::string& what) {
    ++res.failures;
    if (res.first_failure.empty()) res.first_failure = what;
}

}  // namespace detail

inline SuiteResult run_amm_oracle_suite(int cases_per_kind, std::uint64_t seed) {
    SuiteResult res;
    const PoolKind kinds[] = {PoolKind::UniV2,       PoolKind::UniV3,
                              PoolKind::BalancerWeighted, PoolKind::CurveStable,
                              PoolKind::DodoPMM,     PoolKind::KyberDMM};
    Rng rng(seed);

    for (PoolKind kind : kinds) {
        for (int c = 0; c < cases_per_kind; ++c) {
            ++res.cases;
            const Pool pool = fixtures::random_pool(kind, rng);
            const auto n = pool.tokens.size();
            const auto si = rng.index(n);
            auto so = rng.index(n - 1);
            if (so >= si) ++so;
            const int tin = pool.tokens[si], tout = pool.tokens[so];
            // Sizes below ~1e-3·depth are covered by the property tests; the
            // invariant-bisection oracles lose relative precision there.
            const double amount = depth(pool, tin) * std::pow(10.0, rng.uniform(-3.0, 0.3));
            const double eff = (1.0 - pool.fee) * amount;

            SwapResult r;
            try {
                r = swap_exact_in(pool, tin, tout, amount);
                validate_pool(r.new_pool);
            } catch (const std::exception& e) {
                std::ostringstream os;
                os << kind_name(kind) << " case " << c << ": " << e.what();
                detail::note_failure(res, os.str());
                continue;
            }

            double rel = 0;
            double out_reserve = 0;
            switch (kind) {
                case PoolKind::UniV2: {
                    const auto& q = std::get<UniV2Params>(pool.params);
                    const bool fwd = si == 0;
                    const double x = fwd ? q.reserve0 : q.reserve1;
                    const double y = fwd ? q.reserve1 : q.reserve0;
                    out_reserve = y;
                    rel = detail::rel_diff(r.amount_out, oracles::v2_out(x, y, pool.fee, amount));
                    const auto& q2 = std::get<UniV2Params>(r.new_pool.params);
                    const double k0 = q.reserve0 * q.reserve1;
                    res.max_conservation = std::max(
                        res.max_conservation, std::fabs(q2.reserve0 * q2.reserve1 - k0) / k0);
                    break;
                }
                case PoolKind::UniV3: {
                    const auto& q = std::get<UniV3Params>(pool.params);
                    const double s1 = std::get<UniV3Params>(r.new_pool.params).sqrt_price;
                    const auto [in_implied, out_implied] = oracles::v3_implied(q, s1, si == 0);
                    out_reserve = oracles::v3_implied(q, si == 0 ? q.bands.front().sqrt_lo
                                                                 : q.bands.back().sqrt_hi,
                                                      si == 0)
                                      .second;
                    rel = std::max(detail::rel_diff(r.amount_out, out_implied),
                                   detail::rel_diff((1.0 - pool.fee) * r.amount_in_used, in_implied));
                    break;
                }
                case PoolKind::BalancerWeighted: {
                    const auto& q = std::get<BalancerParams>(pool.params);
                    out_reserve = q.balances[so];
                    rel = detail::rel_diff(
                        r.amount_out, oracles::balancer_out_bisect(q.balances, q.weights, si, so, eff));
                    break;
                }
                case PoolKind::CurveStable: {
                    const auto& q = std::get<CurveParams>(pool.params);
                    out_reserve = q.balances[so];
                    rel = detail::rel_diff(
                        r.amount_out, oracles::curve_out_bisect(q.balances, q.amplification, si, so, eff));
                    break;
                }
                case PoolKind::DodoPMM: {
                    const auto& q = std::get<DodoParams>(pool.params);
                    const auto& q2 = std::get<DodoParams>(r.new_pool.params);
                    out_reserve = si == 0 ? q.quote_reserve : q.base_reserve;
                    if (si == 0) {
                        const double d = q2.base_reserve - q.base_reserve;
                        rel = std::max(
                            detail::rel_diff(r.amount_out, oracles::dodo_integral(q, q.base_reserve,
                                                                                  q.base_reserve + d)),
                            detail::rel_diff(d, (1.0 - pool.fee) * r.amount_in_used));
                    } else {
                        const double e = q.base_reserve - q2.base_reserve;
                        rel = detail::rel_diff((1.0 - pool.fee) * r.amount_in_used,
                                               oracles::dodo_integral(q, q.base_reserve - e,
                                                                      q.base_reserve));
                    }
                    break;
                }
                case PoolKind::KyberDMM: {
                    const auto& q = std::get<KyberParams>(pool.params);
                    const auto& q2 = std::get<KyberParams>(r.new_pool.params);
                    const bool fwd = si == 0;
                    const double vx = fwd ? q.virtual0 : q.virtual1;
                    const double vy = fwd ? q.virtual1 : q.virtual0;
                    out_reserve = fwd ? q.reserve1 : q.reserve0;
                    if (r.fully_filled)
                        rel = detail::rel_diff(r.amount_out, oracles::kyber_out(vx, vy, eff));
                    else
                        rel = detail::rel_diff(r.amount_out, (1.0 - 1e-12) * out_reserve);
                    const double k0 = q.virtual0 * q.virtual1;
                    res.max_conservation = std::max(
                        res.max_conservation, std::fabs(q2.virtual0 * q2.virtual1 - k0) / k0);
                    // Virtual and real reserves move in lockstep.
                    const double gap0 = (q2.virtual0 - q2.reserve0) - (q.virtual0 - q.reserve0);
                    const double gap1 = (q2.virtual1 - q2.reserve1) - (q.virtual1 - q.reserve1);
                    if (std::fabs(gap0) > 1e-9 * q.virtual0 || std::fabs(gap1) > 1e-9 * q.virtual1)
                        detail::note_failure(res, "Kyber virtual/real lockstep broken");
                    break;
                }
            }

            if (kind == PoolKind::CurveStable)
                res.max_rel_err_curve = std::max(res.max_rel_err_curve, rel);
            else
                res.max_rel_err = std::max(res.max_rel_err, rel);

            if (r.amount_out > out_reserve * (1.0 + 1e-9)) {
                std::ostringstream os;
                os << kind_name(kind) << " case " << c << ": amount_out exceeds output reserve";
                detail::note_failure(res, os.str());
            }
            if (!r.fully_filled && r.amount_in_used > amount * (1.0 + 1e-12))
                detail::note_failure(res, std::string(kind_name(kind)) + ": used more than offered");
        }
    }
    return res;
}

}  // namespace amm_suite
