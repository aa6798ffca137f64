#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"
#include "pool.hpp"

namespace routeopt {

struct Order {
    int src = -1, dst = -1;  // token indices
    double quantity = 0;     // Q, in src-token units
};

/// One self-contained problem: tokens with ETH reference prices, the pool
/// set, the order to route, and the gas price regime.
struct Instance {
    std::string id;
    std::string stratum;  // "size/frag/diversity/gas" label; empty for ad-hoc instances
    std::vector<Token> tokens;
    std::vector<Pool> pools;
    Order order;
    double gas_price_gwei = 30.0;
    std::uint64_t gen_seed = 0;

    double eth_price(int token) const { return tokens[static_cast<std::size_t>(token)].eth_price; }
};

inline void validate_instance(const Instance& inst) {
    const int n = static_cast<int>(inst.tokens.size());
    auto fail = [&](Errc c, const std::string& m) {
        throw Error(c, "instance '" + inst.id + "': " + m);
    };
    if (inst.tokens.empty()) fail(Errc::invalid_input, "no tokens");
    for (const auto& t : inst.tokens)
        if (!(t.eth_price > 0) || !std::isfinite(t.eth_price))
            fail(Errc::invalid_input, "token '" + t.id + "' needs a positive reference price");
    for (const auto& p : inst.pools) {
        validate_pool(p);
        for (int tok : p.tokens)
            if (tok < 0 || tok >= n) fail(Errc::unknown_token, "pool '" + p.id + "' references a missing token");
    }
    if (inst.order.src < 0 || inst.order.src >= n || inst.order.dst < 0 || inst.order.dst >= n)
        fail(Errc::unknown_token, "order references a missing token");
    if (inst.order.src == inst.order.dst) fail(Errc::src_equals_dst, "order src equals dst");
    if (!(inst.order.quantity >= 0) || !std::isfinite(inst.order.quantity))
        fail(Errc::invalid_amount, "order quantity must be finite and non-negative");
    if (!(inst.gas_price_gwei >= 0)) fail(Errc::invalid_input, "gas price must be non-negative");
}

}  // namespace routeopt
