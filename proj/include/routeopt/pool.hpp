#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "errors.hpp"

namespace routeopt {

struct Token {
    std::string id;
    int decimals = 18;
    double eth_price = 1.0;  // reference price in the ETH numeraire
};

enum class PoolKind { UniV2, UniV3, BalancerWeighted, CurveStable, DodoPMM, KyberDMM };

inline const char* kind_name(PoolKind k) {
    switch (k) {
        case PoolKind::UniV2: return "UniV2";
        case PoolKind::UniV3: return "UniV3";
        case PoolKind::BalancerWeighted: return "BalancerWeighted";
        case PoolKind::CurveStable: return "CurveStable";
        case PoolKind::DodoPMM: return "DodoPMM";
        case PoolKind::KyberDMM: return "KyberDMM";
    }
    return "?";
}

inline PoolKind kind_from_name(const std::string& s) {
    for (PoolKind k : {PoolKind::UniV2, PoolKind::UniV3, PoolKind::BalancerWeighted,
                       PoolKind::CurveStable, PoolKind::DodoPMM, PoolKind::KyberDMM})
        if (s == kind_name(k)) return k;
    throw Error(Errc::unknown_venue, "unknown pool kind: " + s);
}

// ---- kind-specific parameter records ----

struct UniV2Params {
    double reserve0 = 0, reserve1 = 0;
};

/// One constant-liquidity band in sqrt-price space.  Bands are stored in
/// ascending price order and must tile a contiguous interval.
struct TickBand {
    double liquidity = 0;
    double sqrt_lo = 0, sqrt_hi = 0;
};

struct UniV3Params {
    double sqrt_price = 0;  // current sqrt(token1/token0)
    std::vector<TickBand> bands;
};

struct BalancerParams {
    std::vector<double> balances;  // parallel to Pool::tokens
    std::vector<double> weights;   // strictly positive, sum to 1
};

struct CurveParams {
    double amplification = 0;      // A > 0
    std::vector<double> balances;  // parallel to Pool::tokens
};

/// Proactive market maker with a linearised price curve: the quoted price of
/// base (token0) in quote (token1) is p0·(1 + k·(B0 − b)/B0) where b is the
/// current base inventory and B0 its target.  k = 0 degenerates to a fixed
/// oracle price; k = 1 gives the steepest inventory response.
struct DodoParams {
    double oracle_price = 0;   // p0, quote per base
    double slope = 0;          // k in [0,1]
    double base_reserve = 0;   // token0 inventory b
    double quote_reserve = 0;  // token1 inventory
    double base_target = 0;    // B0
};

/// Constant product on amplified virtual reserves; swaps move virtual and
/// real reserves in lockstep and output is capped by the real reserve.
struct KyberParams {
    double reserve0 = 0, reserve1 = 0;
    double virtual0 = 0, virtual1 = 0;
    double amplification = 1;  // a >= 1; virtuals start at a·reserve
};

using PoolParams =
    std::variant<UniV2Params, UniV3Params, BalancerParams, CurveParams, DodoParams, KyberParams>;

struct Pool {
    std::string id;
    PoolKind kind = PoolKind::UniV2;
    std::vector<int> tokens;  // token indices; size 2 except Curve/Balancer (2..n)
    double fee = 0.0;         // input fraction taken before curve math
    PoolParams params;

    std::size_t arity() const { return tokens.size(); }

    /// Position of a token index within this pool, or -1.
    int slot_of(int token) const {
        for (std::size_t i = 0; i < tokens.size(); ++i)
            if (tokens[i] == token) return static_cast<int>(i);
        return -1;
    }
};

namespace detail {
inline bool pos_finite(double x) { return std::isfinite(x) && x > 0.0; }
}  // namespace detail

/// Check the structural invariants of a pool; throws on violation.
inline void validate_pool(const Pool& p) {
    auto fail = [&](Errc c, const std::string& msg) {
        throw Error(c, "pool '" + p.id + "': " + msg);
    };
    if (!(p.fee >= 0.0 && p.fee < 1.0)) fail(Errc::invalid_input, "fee must lie in [0,1)");
    if (p.tokens.size() < 2) fail(Errc::invalid_input, "pool needs at least two tokens");
    for (std::size_t i = 0; i < p.tokens.size(); ++i)
        for (std::size_t j = i + 1; j < p.tokens.size(); ++j)
            if (p.tokens[i] == p.tokens[j]) fail(Errc::invalid_input, "duplicate token in pool");

    const bool two_token = p.tokens.size() == 2;
    switch (p.kind) {
        case PoolKind::UniV2: {
            const auto& q = std::get<UniV2Params>(p.params);
            if (!two_token) fail(Errc::invalid_input, "UniV2 pools are two-token");
            if (!detail::pos_finite(q.reserve0) || !detail::pos_finite(q.reserve1))
                fail(Errc::non_positive_reserve, "reserves must be > 0");
            break;
        }
        case PoolKind::UniV3: {
            const auto& q = std::get<UniV3Params>(p.params);
            if (!two_token) fail(Errc::invalid_input, "UniV3 pools are two-token");
            if (q.bands.empty()) fail(Errc::invalid_input, "at least one tick band required");
            for (std::size_t i = 0; i < q.bands.size(); ++i) {
                const auto& b = q.bands[i];
                if (!detail::pos_finite(b.liquidity)) fail(Errc::non_positive_reserve, "band liquidity must be > 0");
                if (!(detail::pos_finite(b.sqrt_lo) && b.sqrt_hi > b.sqrt_lo))
                    fail(Errc::invalid_input, "band bounds must satisfy 0 < lo < hi");
                if (i > 0 && std::fabs(b.sqrt_lo - q.bands[i - 1].sqrt_hi) > 1e-12)
                    fail(Errc::invalid_input, "bands must be contiguous in sqrt-price");
            }
            if (!(q.sqrt_price >= q.bands.front().sqrt_lo && q.sqrt_price <= q.bands.back().sqrt_hi))
                fail(Errc::invalid_input, "sqrt price outside banded range");
            break;
        }
        case PoolKind::BalancerWeighted: {
            const auto& q = std::get<BalancerParams>(p.params);
            if (q.balances.size() != p.tokens.size() || q.weights.size() != p.tokens.size())
                fail(Errc::invalid_input, "balances/weights must match token count");
            double wsum = 0;
            for (double b : q.balances)
                if (!detail::pos_finite(b)) fail(Errc::non_positive_reserve, "balances must be > 0");
            for (double w : q.weights) {
                if (!detail::pos_finite(w)) fail(Errc::invalid_input, "weights must be > 0");
                wsum += w;
            }
            if (std::fabs(wsum - 1.0) > 1e-12) fail(Errc::invalid_input, "weights must sum to 1");
            break;
        }
        case PoolKind::CurveStable: {
            const auto& q = std::get<CurveParams>(p.params);
            if (!detail::pos_finite(q.amplification)) fail(Errc::invalid_input, "amplification must be > 0");
            if (q.balances.size() != p.tokens.size())
                fail(Errc::invalid_input, "balances must match token count");
            for (double b : q.balances)
                if (!detail::pos_finite(b)) fail(Errc::non_positive_reserve, "balances must be > 0");
            break;
        }
        case PoolKind::DodoPMM: {
            const auto& q = std::get<DodoParams>(p.params);
            if (!two_token) fail(Errc::invalid_input, "DodoPMM pools are two-token");
            if (!detail::pos_finite(q.oracle_price)) fail(Errc::invalid_input, "oracle price must be > 0");
            if (!(q.slope >= 0.0 && q.slope <= 1.0)) fail(Errc::invalid_input, "slope must lie in [0,1]");
            if (!detail::pos_finite(q.base_reserve) || !detail::pos_finite(q.quote_reserve) ||
                !detail::pos_finite(q.base_target))
                fail(Errc::non_positive_reserve, "inventories must be > 0");
            // Quoted price must stay positive at the current inventory.
            if (1.0 + q.slope * (q.base_target - q.base_reserve) / q.base_target <= 0.0)
                fail(Errc::invalid_input, "price curve non-positive at current inventory");
            break;
        }
        case PoolKind::KyberDMM: {
            const auto& q = std::get<KyberParams>(p.params);
            if (!two_token) fail(Errc::invalid_input, "KyberDMM pools are two-token");
            if (!detail::pos_finite(q.reserve0) || !detail::pos_finite(q.reserve1))
                fail(Errc::non_positive_reserve, "reserves must be > 0");
            if (!(q.amplification >= 1.0)) fail(Errc::invalid_input, "amplification must be >= 1");
            if (!(q.virtual0 >= q.reserve0 - 1e-12) || !(q.virtual1 >= q.reserve1 - 1e-12))
                fail(Errc::invalid_input, "virtual reserves must dominate real reserves");
            break;
        }
    }
}

/// Input-side reserve proxy used for liquidity-biased sampling, utilization
/// ratios and order-profile features.
inline double depth(const Pool& p, int token) {
    const int s = p.slot_of(token);
    if (s < 0) throw Error(Errc::unknown_token, "pool '" + p.id + "' does not carry the token");
    switch (p.kind) {
        case PoolKind::UniV2: {
            const auto& q = std::get<UniV2Params>(p.params);
            return s == 0 ? q.reserve0 : q.reserve1;
        }
        case PoolKind::UniV3: {
            // Token amounts implied by the active band's liquidity at s0.
            const auto& q = std::get<UniV3Params>(p.params);
            double liq = q.bands.front().liquidity;
            for (const auto& b : q.bands)
                if (q.sqrt_price >= b.sqrt_lo && q.sqrt_price <= b.sqrt_hi) liq = b.liquidity;
            return s == 0 ? liq / q.sqrt_price : liq * q.sqrt_price;
        }
        case PoolKind::BalancerWeighted:
            return std::get<BalancerParams>(p.params).balances[static_cast<std::size_t>(s)];
        case PoolKind::CurveStable:
            return std::get<CurveParams>(p.params).balances[static_cast<std::size_t>(s)];
        case PoolKind::DodoPMM: {
            const auto& q = std::get<DodoParams>(p.params);
            return s == 0 ? q.base_reserve : q.quote_reserve;
        }
        case PoolKind::KyberDMM: {
            const auto& q = std::get<KyberParams>(p.params);
            return s == 0 ? q.reserve0 : q.reserve1;
        }
    }
    return 0;
}

}  // namespace routeopt
