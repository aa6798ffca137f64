#pragma once

// Benchmark stratification: order size x fragmentation x AMM diversity x gas
// regime.  Only 14 of the 54 combinations are admissible benchmark cells;
// they are hard-coded below in canonical (reporting) order.

#include <array>
#include <string>
#include <vector>

#include <routeopt/errors.hpp>

namespace routeopt {

enum class OrderSize { small, medium, large };
enum class FragLevel { low, medium, high };
enum class AmmDiversity { homogeneous_v2, mixed };
enum class GasRegime { low, medium, high };

inline const char* name_of(OrderSize v) {
    switch (v) {
        case OrderSize::small: return "small";
        case OrderSize::medium: return "medium";
        case OrderSize::large: return "large";
    }
    return "?";
}
inline const char* name_of(FragLevel v) {
    switch (v) {
        case FragLevel::low: return "low";
        case FragLevel::medium: return "medium";
        case FragLevel::high: return "high";
    }
    return "?";
}
inline const char* name_of(AmmDiversity v) {
    switch (v) {
        case AmmDiversity::homogeneous_v2: return "homogeneous_v2";
        case AmmDiversity::mixed: return "mixed";
    }
    return "?";
}
inline const char* name_of(GasRegime v) {
    switch (v) {
        case GasRegime::low: return "low";
        case GasRegime::medium: return "medium";
        case GasRegime::high: return "high";
    }
    return "?";
}

/// Order quantity in src-token units (src is pinned to the ETH numeraire).
inline double order_quantity_eth(OrderSize v) {
    switch (v) {
        case OrderSize::small: return 1.0;
        case OrderSize::medium: return 10.0;
        case OrderSize::large: return 200.0;
    }
    return 0.0;
}

inline double gas_price_gwei(GasRegime v) {
    switch (v) {
        case GasRegime::low: return 10.0;
        case GasRegime::medium: return 30.0;
        case GasRegime::high: return 80.0;
    }
    return 0.0;
}

/// Target order-to-mean-depth ratio Q / D-bar per size class.
inline double depth_ratio(OrderSize v) {
    switch (v) {
        case OrderSize::small: return 0.005;
        case OrderSize::medium: return 0.05;
        case OrderSize::large: return 0.5;
    }
    return 0.0;
}

struct Stratum {
    OrderSize order_size = OrderSize::small;
    FragLevel fragmentation = FragLevel::low;
    AmmDiversity amm_diversity = AmmDiversity::homogeneous_v2;
    GasRegime gas_regime = GasRegime::low;

    bool operator==(const Stratum&) const = default;

    /// Canonical "size/frag/diversity/gas" label, e.g. "small/high/mixed/medium".
    std::string label() const {
        return std::string(name_of(order_size)) + "/" + name_of(fragmentation) + "/" +
               name_of(amm_diversity) + "/" + name_of(gas_regime);
    }
};

/// The 14 admissible benchmark cells, in canonical reporting order.
inline const std::vector<Stratum>& admissible_strata() {
    using O = OrderSize;
    using F = FragLevel;
    using A = AmmDiversity;
    using G = GasRegime;
    static const std::vector<Stratum> rows = {
        {O::small, F::low, A::homogeneous_v2, G::low},
        {O::small, F::low, A::mixed, G::low},
        {O::small, F::medium, A::mixed, G::medium},
        {O::small, F::high, A::mixed, G::medium},
        {O::medium, F::low, A::mixed, G::medium},
        {O::medium, F::medium, A::homogeneous_v2, G::low},
        {O::medium, F::medium, A::homogeneous_v2, G::medium},
        {O::medium, F::medium, A::homogeneous_v2, G::high},
        {O::medium, F::high, A::mixed, G::medium},
        {O::large, F::low, A::mixed, G::medium},
        {O::large, F::medium, A::mixed, G::medium},
        {O::large, F::high, A::homogeneous_v2, G::high},
        {O::large, F::high, A::mixed, G::low},
        {O::large, F::high, A::mixed, G::high},
    };
    return rows;
}

inline bool is_admissible(const Stratum& s) {
    for (const auto& row : admissible_strata())
        if (row == s) return true;
    return false;
}

namespace detail {

template <typename Enum, std::size_t N>
Enum enum_from(const std::string& s, const std::array<Enum, N>& values, const char* what) {
    for (Enum v : values)
        if (s == name_of(v)) return v;
    throw Error(Errc::invalid_stratum, std::string("unknown ") + what + ": '" + s + "'");
}

}  // namespace detail

/// Parse a "size/frag/diversity/gas" label.  The result need not be
/// admissible; callers that require admissibility check separately.
inline Stratum parse_stratum(const std::string& label) {
    std::array<std::string, 4> parts;
    std::size_t start = 0, idx = 0;
    for (; idx < 4; ++idx) {
        const auto slash = label.find('/', start);
        if ((slash == std::string::npos) != (idx == 3))
            throw Error(Errc::invalid_stratum, "stratum label needs 4 '/'-separated fields: '" +
                                                   label + "'");
        parts[idx] = label.substr(start, slash == std::string::npos ? slash : slash - start);
        start = slash + 1;
    }
    Stratum s;
    s.order_size = detail::enum_from(
        parts[0], std::array{OrderSize::small, OrderSize::medium, OrderSize::large}, "order size");
    s.fragmentation = detail::enum_from(
        parts[1], std::array{FragLevel::low, FragLevel::medium, FragLevel::high}, "fragmentation");
    s.amm_diversity = detail::enum_from(
        parts[2], std::array{AmmDiversity::homogeneous_v2, AmmDiversity::mixed}, "AMM diversity");
    s.gas_regime = detail::enum_from(
        parts[3], std::array{GasRegime::low, GasRegime::medium, GasRegime::high}, "gas regime");
    return s;
}

}  // namespace routeopt
