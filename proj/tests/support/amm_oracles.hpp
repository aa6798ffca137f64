#pragma once

// Independent oracles for the AMM simulators.  These deliberately avoid the
// closed forms used by the implementation: invariant bisection, interval
// integration over the price range, and numeric quadrature of the marginal
// price, so agreement is evidence rather than tautology.

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include <routeopt/pool.hpp>

namespace oracles {

using routeopt::DodoParams;
using routeopt::TickBand;
using routeopt::UniV3Params;

/// UniV2 via the invariant: out = y − k/(x + Δx').
inline double v2_out(double x, double y, double fee, double dx) {
    const double eff = (1.0 - fee) * dx;
    return y - x * y / (x + eff);
}

/// UniV2 by numeric integration of the marginal output rate k/(x+t)²
/// (midpoint rule at the given step size).
inline double v2_out_integrated(double x, double y, double fee, double dx, double step = 1e-6) {
    const double eff = (1.0 - fee) * dx;
    const double k = x * y;
    const auto n = static_cast<std::size_t>(std::ceil(eff / step));
    const double h = eff / static_cast<double>(n);
    double out = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = (static_cast<double>(i) + 0.5) * h;
        const double xt = x + t;
        out += h * k / (xt * xt);
    }
    return out;
}

/// UniV3: token amounts implied by moving the sqrt price across [s1, s0]
/// (token0 in) or [s0, s1] (token1 in), accumulated band by band over the
/// price interval rather than by walking the trade.
inline std::pair<double, double> v3_implied(const UniV3Params& pre, double s1, bool token0_in) {
    const double lo = std::min(pre.sqrt_price, s1), hi = std::max(pre.sqrt_price, s1);
    double amt_in = 0, amt_out = 0;
    for (const auto& b : pre.bands) {
        const double a = std::max(lo, b.sqrt_lo), c = std::min(hi, b.sqrt_hi);
        if (c <= a) continue;
        const double d0 = b.liquidity * (1.0 / a - 1.0 / c);  // token0 across [a, c]
        const double d1 = b.liquidity * (c - a);              // token1 across [a, c]
        amt_in += token0_in ? d0 : d1;
        amt_out += token0_in ? d1 : d0;
    }
    return {amt_in, amt_out};
}

/// Balancer out-given-in by bisecting the weighted-product invariant in log
/// space: Σ w_k·ln(B_k') constant.
inline double balancer_out_bisect(const std::vector<double>& bal, const std::vector<double>& w,
                                  std::size_t i, std::size_t j, double eff) {
    const auto G = [&](double out) {
        return w[i] * std::log1p(eff / bal[i]) + w[j] * std::log1p(-out / bal[j]);
    };
    double lo = 0, hi = bal[j] * (1.0 - 1e-16);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (G(mid) > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// StableSwap D by sign-change bisection of
/// G(D) = Ann·S + D − Ann·D − D^{n+1}/(n^n·Πx).
inline double curve_D_bisect(const std::vector<double>& xs, double amp) {
    const double n = static_cast<double>(xs.size());
    const double Ann = amp * std::pow(n, n);
    double S = 0, logP = 0;
    for (double x : xs) {
        S += x;
        logP += std::log(x);
    }
    const double nnP = std::exp(n * std::log(n) + logP);
    const auto G = [&](double D) {
        return Ann * S + D - Ann * D - std::pow(D, n + 1.0) / nnP;
    };
    double lo = S * 1e-12, hi = 2.0 * S;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (G(mid) > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// StableSwap output via bisection on the remaining balance y_j given D.
inline double curve_out_bisect(const std::vector<double>& xs, double amp, std::size_t i,
                               std::size_t j, double eff) {
    const double n = static_cast<double>(xs.size());
    const double Ann = amp * std::pow(n, n);
    const double D = curve_D_bisect(xs, amp);
    std::vector<double> xp = xs;
    xp[i] += eff;
    double Sp = 0, logPp = 0;
    for (std::size_t k = 0; k < xp.size(); ++k) {
        if (k == j) continue;
        Sp += xp[k];
        logPp += std::log(xp[k]);
    }
    const double nnPp = std::exp(n * std::log(n) + logPp);
    const auto H = [&](double y) {
        return Ann * (Sp + y) + D - Ann * D - std::pow(D, n + 1.0) / (nnPp * y);
    };
    double hi = D;
    int guard = 0;
    while (H(hi) < 0 && guard++ < 100) hi *= 2.0;
    double lo = 0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (H(mid) < 0 ? lo : hi) = mid;
    }
    return xs[j] - 0.5 * (lo + hi);
}

/// Dodo linear price curve integrated by midpoint quadrature over the base
/// inventory displacement (exact for a linear integrand).
inline double dodo_integral(const DodoParams& q, double from_b, double to_b, int steps = 4096) {
    const double h = (to_b - from_b) / steps;
    double acc = 0;
    for (int i = 0; i < steps; ++i) {
        const double u = from_b + (i + 0.5) * h;
        acc += h * q.oracle_price * (1.0 + q.slope * (q.base_target - u) / q.base_target);
    }
    return acc;
}

/// Kyber: constant product on the virtual reserves, invariant arrangement.
inline double kyber_out(double vx, double vy, double eff) { return vy - vx * vy / (vx + eff); }

}  // namespace oracles
