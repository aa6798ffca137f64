#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "pool.hpp"

namespace routeopt {

/// Result of simulating an exact-input swap.  `amount_in_used` is the gross
/// input actually consumed; it falls short of the request only when the pool
/// runs out of liquidity (tick range exhausted, inventory drained), in which
/// case `fully_filled` is false.
struct SwapResult {
    double amount_out = 0;
    double amount_in_used = 0;
    Pool new_pool;
    double marginal_price_after = 0;
    bool fully_filled = true;
};

namespace detail {

// Leave a relative dust remainder when a swap would drain a reserve so the
// post-trade pool still satisfies the strict-positivity invariants.
inline constexpr double drain_guard = 1e-12;

inline void check_amount(double amount) {
    if (!(std::isfinite(amount) && amount >= 0.0))
        throw Error(Errc::invalid_amount, "swap amount must be finite and non-negative");
}

inline std::pair<int, int> swap_slots(const Pool& p, int token_in, int token_out) {
    if (token_in == token_out) throw Error(Errc::invalid_input, "token_in equals token_out");
    const int si = p.slot_of(token_in), so = p.slot_of(token_out);
    if (si < 0 || so < 0)
        throw Error(Errc::unknown_token, "pool '" + p.id + "' does not carry the requested pair");
    return {si, so};
}

// ---- Curve StableSwap invariant ----
//
// A·n^n·Σx + D = A·D·n^n + D^(n+1)/(n^n·Πx), solved for D (given balances)
// and for one balance y_j (given D and the other balances) by Newton steps.

inline double curve_D(const std::vector<double>& xs, double amp) {
    const double n = static_cast<double>(xs.size());
    double S = 0;
    for (double x : xs) S += x;
    if (S <= 0) return 0;
    const double Ann = amp * std::pow(n, n);
    double D = S;
    for (int it = 0; it < 255; ++it) {
        double D_P = D;
        for (double x : xs) D_P = D_P * D / (x * n);
        const double D_prev = D;
        D = (Ann * S + n * D_P) * D / ((Ann - 1.0) * D + (n + 1.0) * D_P);
        if (std::fabs(D - D_prev) < 1e-10 * D) return D;
    }
    throw Error(Errc::numerical_failure, "StableSwap D iteration did not converge");
}

inline double curve_y(const std::vector<double>& xs, std::size_t j, double D, double amp) {
    const double n = static_cast<double>(xs.size());
    const double Ann = amp * std::pow(n, n);
    double c = D, S = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (k == j) continue;
        c = c * D / (xs[k] * n);
        S += xs[k];
    }
    c = c * D / (Ann * n);
    // b−D is hoisted out of the loop: evaluated inline it cancels
    // catastrophically (b ≈ D far above the root), and the per-iteration
    // rounding noise keeps Newton in a limit cycle wider than the tolerance.
    const double b_less_D = S + D / Ann - D;
    double y = D;
    for (int it = 0; it < 255; ++it) {
        const double y_prev = y;
        y = (y * y + c) / (2.0 * y + b_less_D);
        if (std::fabs(y - y_prev) < 1e-13 * y + 1e-300) return y;
    }
    throw Error(Errc::numerical_failure, "StableSwap y iteration did not converge");
}

// Dodo price of base in quote at base inventory b.
inline double dodo_price(const DodoParams& q, double b) {
    return q.oracle_price * (1.0 + q.slope * (q.base_target - b) / q.base_target);
}

// Quote received for selling d base starting from inventory b (integral of
// the linear price curve: trapezoid).
inline double dodo_quote_out(const DodoParams& q, double b, double d) {
    return q.oracle_price * d * (1.0 + q.slope * (q.base_target - b - 0.5 * d) / q.base_target);
}

inline SwapResult swap_core(const Pool& pool, int token_in, int token_out, double amount_in);

}  // namespace detail

/// Fee-adjusted marginal price (output per unit input at zero size).
inline double spot_price(const Pool& pool, int token_in, int token_out) {
    const auto [si, so] = detail::swap_slots(pool, token_in, token_out);
    const double keep = 1.0 - pool.fee;
    switch (pool.kind) {
        case PoolKind::UniV2: {
            const auto& q = std::get<UniV2Params>(pool.params);
            return keep * (si == 0 ? q.reserve1 / q.reserve0 : q.reserve0 / q.reserve1);
        }
        case PoolKind::UniV3: {
            const double s = std::get<UniV3Params>(pool.params).sqrt_price;
            return keep * (si == 0 ? s * s : 1.0 / (s * s));
        }
        case PoolKind::BalancerWeighted: {
            const auto& q = std::get<BalancerParams>(pool.params);
            const auto i = static_cast<std::size_t>(si), o = static_cast<std::size_t>(so);
            return keep * (q.weights[i] * q.balances[o]) / (q.weights[o] * q.balances[i]);
        }
        case PoolKind::CurveStable: {
            // No tidy closed form once n > 2: Richardson forward difference,
            // second-order accurate like a central stencil.
            const double h = 1e-9 * std::get<CurveParams>(pool.params).balances[static_cast<std::size_t>(si)];
            const double f_h = detail::swap_core(pool, token_in, token_out, h).amount_out;
            const double f_h2 = detail::swap_core(pool, token_in, token_out, 0.5 * h).amount_out;
            return (4.0 * f_h2 - f_h) / h;
        }
        case PoolKind::DodoPMM: {
            const auto& q = std::get<DodoParams>(pool.params);
            const double p = detail::dodo_price(q, q.base_reserve);
            return keep * (si == 0 ? p : 1.0 / p);
        }
        case PoolKind::KyberDMM: {
            const auto& q = std::get<KyberParams>(pool.params);
            return keep * (si == 0 ? q.virtual1 / q.virtual0 : q.virtual0 / q.virtual1);
        }
    }
    return 0;
}

namespace detail {

inline SwapResult swap_core(const Pool& pool, int token_in, int token_out, double amount_in) {
    const auto [si, so] = swap_slots(pool, token_in, token_out);
    check_amount(amount_in);

    SwapResult r;
    r.new_pool = pool;
    if (amount_in == 0.0) return r;

    const double keep = 1.0 - pool.fee;
    const double eff = keep * amount_in;  // fee taken off the input, kept out of reserves
    r.amount_in_used = amount_in;

    switch (pool.kind) {
        case PoolKind::UniV2: {
            auto& q = std::get<UniV2Params>(r.new_pool.params);
            double& x = si == 0 ? q.reserve0 : q.reserve1;
            double& y = si == 0 ? q.reserve1 : q.reserve0;
            r.amount_out = y * eff / (x + eff);
            x += eff;
            y -= r.amount_out;
            break;
        }
        case PoolKind::UniV3: {
            auto& q = std::get<UniV3Params>(r.new_pool.params);
            double s = q.sqrt_price;
            double left = eff;   // effective input still to place
            double used = 0;     // effective input consumed
            if (si == 0) {
                // Selling token0 pushes the sqrt price down through the bands.
                auto bi = static_cast<std::ptrdiff_t>(q.bands.size()) - 1;
                while (bi > 0 && s <= q.bands[static_cast<std::size_t>(bi)].sqrt_lo) --bi;
                for (;;) {
                    const auto& band = q.bands[static_cast<std::size_t>(bi)];
                    const double L = band.liquidity;
                    const double cap = L * (1.0 / band.sqrt_lo - 1.0 / s);
                    if (left <= cap) {
                        const double s1 = 1.0 / (1.0 / s + left / L);
                        r.amount_out += L * (s - s1);
                        used += left;
                        s = std::max(s1, band.sqrt_lo);
                        break;
                    }
                    r.amount_out += L * (s - band.sqrt_lo);
                    used += cap;
                    left -= cap;
                    s = band.sqrt_lo;
                    if (bi == 0) {  // range exhausted: partial fill
                        r.fully_filled = false;
                        break;
                    }
                    --bi;
                }
            } else {
                // Selling token1 pushes the sqrt price up.
                std::size_t bi = 0;
                while (bi + 1 < q.bands.size() && s >= q.bands[bi].sqrt_hi) ++bi;
                for (;;) {
                    const auto& band = q.bands[bi];
                    const double L = band.liquidity;
                    const double cap = L * (band.sqrt_hi - s);
                    if (left <= cap) {
                        const double s1 = s + left / L;
                        r.amount_out += L * (1.0 / s - 1.0 / s1);
                        used += left;
                        s = std::min(s1, band.sqrt_hi);
                        break;
                    }
                    r.amount_out += L * (1.0 / s - 1.0 / band.sqrt_hi);
                    used += cap;
                    left -= cap;
                    s = band.sqrt_hi;
                    if (bi + 1 == q.bands.size()) {
                        r.fully_filled = false;
                        break;
                    }
                    ++bi;
                }
            }
            q.sqrt_price = s;
            r.amount_in_used = r.fully_filled ? amount_in : used / keep;
            break;
        }
        case PoolKind::BalancerWeighted: {
            auto& q = std::get<BalancerParams>(r.new_pool.params);
            const auto i = static_cast<std::size_t>(si), o = static_cast<std::size_t>(so);
            const double ratio = q.balances[i] / (q.balances[i] + eff);
            const double raw = q.balances[o] * (1.0 - std::pow(ratio, q.weights[i] / q.weights[o]));
            // The power curve only reaches the balance asymptotically; a full
            // drain is floating-point saturation, so leave the dust remainder.
            r.amount_out = std::min(raw, (1.0 - drain_guard) * q.balances[o]);
            q.balances[i] += eff;
            q.balances[o] -= r.amount_out;
            break;
        }
        case PoolKind::CurveStable: {
            auto& q = std::get<CurveParams>(r.new_pool.params);
            const auto i = static_cast<std::size_t>(si), o = static_cast<std::size_t>(so);
            const double D = curve_D(q.balances, q.amplification);
            std::vector<double> xs = q.balances;
            xs[i] += eff;
            const double y_new = curve_y(xs, o, D, q.amplification);
            r.amount_out = std::max(q.balances[o] - y_new, 0.0);
            q.balances[i] += eff;
            q.balances[o] = y_new;
            break;
        }
        case PoolKind::DodoPMM: {
            auto& q = std::get<DodoParams>(r.new_pool.params);
            const double b = q.base_reserve;
            if (si == 0) {
                // Sell base for quote.  The linear curve hits price zero at
                // d_max; stop there (or at the quote inventory) and report a
                // partial fill.
                double d = eff;
                double d_cap = std::numeric_limits<double>::infinity();
                if (q.slope > 0.0)
                    d_cap = (1.0 - drain_guard) *
                            ((q.base_target - b) + q.base_target / q.slope);
                if (d > d_cap) {
                    d = d_cap;
                    r.fully_filled = false;
                }
                double out = dodo_quote_out(q, b, d);
                const double max_out = (1.0 - drain_guard) * q.quote_reserve;
                if (out > max_out) {
                    // Invert the trapezoid for the base amount that yields
                    // exactly max_out (smaller quadratic root).
                    const double alpha = q.oracle_price * q.slope / (2.0 * q.base_target);
                    const double beta = dodo_price(q, b);
                    d = alpha > 0.0
                            ? (beta - std::sqrt(std::max(beta * beta - 4.0 * alpha * max_out, 0.0))) / (2.0 * alpha)
                            : max_out / beta;
                    out = max_out;
                    r.fully_filled = false;
                }
                q.base_reserve += d;
                q.quote_reserve -= out;
                r.amount_out = out;
                r.amount_in_used = r.fully_filled ? amount_in : d / keep;
            } else {
                // Sell quote for base: invert the integral for the base
                // outflow e, capped by the base inventory.
                const double alpha = q.oracle_price * q.slope / (2.0 * q.base_target);
                const double beta = dodo_price(q, b);
                double e = alpha > 0.0
                               ? (-beta + std::sqrt(beta * beta + 4.0 * alpha * eff)) / (2.0 * alpha)
                               : eff / beta;
                double paid = eff;
                const double max_e = (1.0 - drain_guard) * b;
                if (e > max_e) {
                    e = max_e;
                    paid = q.oracle_price * e * (1.0 + q.slope * (q.base_target - b + 0.5 * e) / q.base_target);
                    r.fully_filled = false;
                }
                q.base_reserve -= e;
                q.quote_reserve += paid;
                r.amount_out = e;
                r.amount_in_used = r.fully_filled ? amount_in : paid / keep;
            }
            break;
        }
        case PoolKind::KyberDMM: {
            auto& q = std::get<KyberParams>(r.new_pool.params);
            double& vx = si == 0 ? q.virtual0 : q.virtual1;
            double& vy = si == 0 ? q.virtual1 : q.virtual0;
            double& x = si == 0 ? q.reserve0 : q.reserve1;
            double& y = si == 0 ? q.reserve1 : q.reserve0;
            double in_eff = eff;
            double out = vy * in_eff / (vx + in_eff);
            const double max_out = (1.0 - drain_guard) * y;
            if (out > max_out) {
                in_eff = max_out * vx / (vy - max_out);
                out = max_out;
                r.fully_filled = false;
            }
            vx += in_eff;
            vy -= out;
            x += in_eff;
            y -= out;
            r.amount_out = out;
            r.amount_in_used = r.fully_filled ? amount_in : in_eff / keep;
            break;
        }
    }

    return r;
}

}  // namespace detail

inline SwapResult swap_exact_in(const Pool& pool, int token_in, int token_out, double amount_in) {
    SwapResult r = detail::swap_core(pool, token_in, token_out, amount_in);
    r.marginal_price_after = spot_price(r.new_pool, token_in, token_out);
    return r;
}

/// Two-token convenience overload: the output token is the other side.
inline double spot_price(const Pool& pool, int token_in) {
    if (pool.tokens.size() != 2)
        throw Error(Errc::invalid_input, "output token required for pools with more than two tokens");
    const int other = pool.tokens[0] == token_in ? pool.tokens[1] : pool.tokens[0];
    return spot_price(pool, token_in, other);
}

inline SwapResult swap_exact_in(const Pool& pool, int token_in, double amount_in) {
    if (pool.tokens.size() != 2)
        throw Error(Errc::invalid_input, "output token required for pools with more than two tokens");
    const int other = pool.tokens[0] == token_in ? pool.tokens[1] : pool.tokens[0];
    return swap_exact_in(pool, token_in, other, amount_in);
}

/// Relative shortfall of the average execution price vs. the marginal price:
/// 1 − (amount_out/amount_in)/spot.  Zero for an empty trade.
inline double slippage_estimate(const Pool& pool, int token_in, int token_out, double amount_in) {
    detail::check_amount(amount_in);
    if (amount_in == 0.0) return 0.0;
    const double spot = spot_price(pool, token_in, token_out);
    const double out = swap_exact_in(pool, token_in, token_out, amount_in).amount_out;
    return 1.0 - (out / amount_in) / spot;
}

inline double slippage_estimate(const Pool& pool, int token_in, double amount_in) {
    if (pool.tokens.size() != 2)
        throw Error(Errc::invalid_input, "output token required for pools with more than two tokens");
    const int other = pool.tokens[0] == token_in ? pool.tokens[1] : pool.tokens[0];
    return slippage_estimate(pool, token_in, other, amount_in);
}

}  // namespace routeopt
