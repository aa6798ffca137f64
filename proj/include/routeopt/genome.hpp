#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"
#include "instance.hpp"

namespace routeopt {

inline constexpr int k_max_default = 3;
inline constexpr int max_hops_default = 4;

/// Genotype: up to K_max parallel paths with split ratios on the simplex.
struct RouteGenome {
    std::vector<Path> paths;
    std::vector<double> weights;

    std::size_t k() const { return paths.size(); }

    bool operator==(const RouteGenome&) const = default;
};

/// Structural check against the routing problem: every path must chain
/// src→dst with at most max_hops legs, and the weights must sit on the
/// simplex within 1e-9.
inline void validate_genome(const RouteGenome& g, const DexGraph& graph, const Order& order,
                            int k_max = k_max_default, int max_hops = max_hops_default) {
    if (g.paths.empty() || std::cmp_greater(g.paths.size(), k_max))
        throw Error(Errc::invalid_input, "genome must carry 1..K_max paths");
    if (g.weights.size() != g.paths.size())
        throw Error(Errc::invalid_input, "one weight per path required");

    double sum = 0;
    for (double w : g.weights) {
        if (!(w >= 0) || !std::isfinite(w)) throw Error(Errc::invalid_input, "weights must be >= 0");
        sum += w;
    }
    if (std::fabs(sum - 1.0) > 1e-9) throw Error(Errc::invalid_input, "weights must sum to 1");

    for (const auto& path : g.paths) {
        if (path.empty() || std::cmp_greater(path.size(), max_hops))
            throw Error(Errc::infeasible_path, "path must have 1..max_hops edges");
        int at = order.src;
        for (int ei : path) {
            if (ei < 0 || std::cmp_greater_equal(ei, graph.edges.size()))
                throw Error(Errc::infeasible_path, "path references a missing edge");
            const auto& e = graph.edges[static_cast<std::size_t>(ei)];
            if (e.from != at) throw Error(Errc::infeasible_path, "path edges do not chain");
            at = e.to;
        }
        if (at != order.dst) throw Error(Errc::infeasible_path, "path does not end at dst");
    }
}

inline bool genome_feasible(const RouteGenome& g, const DexGraph& graph, const Order& order,
                            int k_max = k_max_default, int max_hops = max_hops_default) {
    try {
        validate_genome(g, graph, order, k_max, max_hops);
        return true;
    } catch (const Error&) {
        return false;
    }
}

}  // namespace routeopt
