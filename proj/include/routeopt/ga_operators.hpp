#pragma once

// NSGA-II building blocks: fast non-dominated sorting, crowding distance,
// tournament selection, and the variation operators (edge-stitching
// crossover, the five mutations, repair).  Everything draws randomness from
// the caller's Rng only, so a seed fixes the whole evolution.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "deterministic.hpp"
#include "genome.hpp"
#include "objectives.hpp"
#include "rng.hpp"

namespace routeopt {

struct GAConfig {
    int population = 64;
    int max_generations = 100;
    double crossover_rate = 0.8;
    double mutation_rate = 0.2;
    int elite_count = 5;
    int tournament_size = 3;
    double convergence_threshold = 0.001;  // net-surplus ETH per generation
    double time_budget_ms = 2000;
    int max_hops = max_hops_default;
    int k_max = k_max_default;
    std::uint64_t rng_seed = 0;
    // Meter the budget on the solver thread's CPU clock instead of wall time.
    // Termination is already logical, so this only matters when parallel runs
    // contend for cores and wall time would charge one run for another's work.
    bool thread_clock = false;
};

struct Individual {
    RouteGenome genome;
    ObjectiveVector vector{};
    int rank = 1;          // 1 = non-dominated
    double crowding = 0;
};

// ---- ranking ----

/// Deb's fast non-dominated sort; fronts hold ascending indices into `vs`.
inline std::vector<std::vector<std::size_t>> non_dominated_sort(
    const std::vector<ObjectiveVector>& vs) {
    const std::size_t n = vs.size();
    std::vector<std::vector<std::size_t>> dominated(n);
    std::vector<int> n_dominators(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dominates(vs[i], vs[j])) {
                dominated[i].push_back(j);
                ++n_dominators[j];
            } else if (dominates(vs[j], vs[i])) {
                dominated[j].push_back(i);
                ++n_dominators[i];
            }
        }

    std::vector<std::vector<std::size_t>> fronts;
    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < n; ++i)
        if (n_dominators[i] == 0) current.push_back(i);
    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (std::size_t i : current)
            for (std::size_t j : dominated[i])
                if (--n_dominators[j] == 0) next.push_back(j);
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(current));
        current = std::move(next);
    }
    return fronts;
}

/// Crowding distance over one front.  Per objective the sort boundaries get
/// infinity; interior points accumulate the normalized neighbor gap, with a
/// degenerate objective (zero span) contributing nothing.
inline std::vector<double> crowding_distance(const std::vector<ObjectiveVector>& front) {
    const std::size_t n = front.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> d(n, 0.0);
    if (n <= 2) {
        std::fill(d.begin(), d.end(), inf);
        return d;
    }
    std::vector<std::size_t> idx(n);
    for (std::size_t m = 0; m < 4; ++m) {
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return maximize_form(front[a])[m] < maximize_form(front[b])[m];
        });
        d[idx.front()] = inf;
        d[idx.back()] = inf;
        const double span =
            maximize_form(front[idx.back()])[m] - maximize_form(front[idx.front()])[m];
        if (!(span > 0)) continue;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (d[idx[i]] == inf) continue;
            d[idx[i]] += (maximize_form(front[idx[i + 1]])[m] -
                          maximize_form(front[idx[i - 1]])[m]) /
                         span;
        }
    }
    return d;
}

/// Binary-or-larger tournament: lowest rank wins, then highest crowding, then
/// lowest index.  Returns an index into the population.
inline std::size_t tournament_select(const std::vector<Individual>& pop, const GAConfig& cfg,
                                     Rng& rng) {
    std::size_t best = rng.index(pop.size());
    for (int t = 1; t < cfg.tournament_size; ++t) {
        const std::size_t c = rng.index(pop.size());
        const auto &a = pop[c], &b = pop[best];
        if (a.rank < b.rank || (a.rank == b.rank && a.crowding > b.crowding) ||
            (a.rank == b.rank && a.crowding == b.crowding && c < best))
            best = c;
    }
    return best;
}

// ---- path sampling ----

/// Liquidity-biased random walks from src to dst.  A hop-count table to dst
/// prunes dead ends; a deterministic fallback path covers the rare walk that
/// still strands itself.
class PathSampler {
public:
    PathSampler(const EvalContext& ctx, int max_hops) : ctx_(&ctx), max_hops_(max_hops) {
        const auto& g = *ctx.graph;
        const auto& order = ctx.inst->order;
        dist_.assign(static_cast<std::size_t>(g.n_tokens), unreachable);
        dist_[static_cast<std::size_t>(order.dst)] = 0;
        for (int round = 0; round < g.n_tokens; ++round)
            for (const auto& e : g.edges)
                if (dist_[static_cast<std::size_t>(e.to)] + 1 <
                    dist_[static_cast<std::size_t>(e.from)])
                    dist_[static_cast<std::size_t>(e.from)] =
                        dist_[static_cast<std::size_t>(e.to)] + 1;

        // Cheapest 1-hop path at full order size, else cheapest overall.
        auto all = enumerate_paths(g, order.src, order.dst, max_hops);
        if (all.empty())
            throw Error(Errc::no_feasible_path, "instance has no src->dst route");
        const auto w = edge_weights(g, order.quantity);
        double best_c = std::numeric_limits<double>::infinity();
        for (const auto& p : all) {
            if (fallback_.size() == 1 && p.size() > 1) break;  // 1-hop found, list is size-sorted
            double c = 0;
            for (int ei : p) c += w[static_cast<std::size_t>(ei)].c;
            if ((p.size() == 1 && fallback_.size() != 1) || c < best_c) {
                best_c = c;
                fallback_ = p;
            }
        }
    }

    const Path& fallback() const { return fallback_; }

    Path sample(Rng& rng) const {
        const auto& g = *ctx_->graph;
        const auto& order = ctx_->inst->order;
        for (int attempt = 0; attempt < 32; ++attempt) {
            Path path;
            std::vector<char> visited(static_cast<std::size_t>(g.n_tokens), 0);
            visited[static_cast<std::size_t>(order.src)] = 1;
            int at = order.src;
            while (at != order.dst) {
                const int left = max_hops_ - static_cast<int>(path.size());
                std::vector<int> options;
                std::vector<double> mass;
                double total = 0;
                for (int ei : g.out[static_cast<std::size_t>(at)]) {
                    const auto& e = g.edges[static_cast<std::size_t>(ei)];
                    if (visited[static_cast<std::size_t>(e.to)]) continue;
                    if (dist_[static_cast<std::size_t>(e.to)] > left - 1) continue;
                    options.push_back(ei);
                    const double m =
                        depth(g.pools[static_cast<std::size_t>(e.pool)], e.from);
                    mass.push_back(m);
                    total += m;
                }
                if (options.empty()) break;
                const double u = rng.uniform(0, total);
                double acc = 0;
                std::size_t pick = options.size() - 1;
                for (std::size_t i = 0; i < options.size(); ++i) {
                    acc += mass[i];
                    if (u < acc) {
                        pick = i;
                        break;
                    }
                }
                const auto& e = g.edges[static_cast<std::size_t>(options[pick])];
                path.push_back(options[pick]);
                visited[static_cast<std::size_t>(e.to)] = 1;
                at = e.to;
            }
            if (at == order.dst && !path.empty()) return path;
        }
        return fallback_;
    }

private:
    static constexpr int unreachable = 1 << 20;
    const EvalContext* ctx_;
    int max_hops_;
    std::vector<int> dist_;
    Path fallback_;
};

// ---- repair ----

/// Make a genome well-formed again: drop paths whose token chain is broken
/// (or that revisit a token), merge paths with identical edge sequences by
/// summing weights, drop non-positive weights, renormalize.  An emptied
/// genome falls back to the cheapest 1-hop baseline path.
inline RouteGenome repair(const RouteGenome& genome, const EvalContext& ctx,
                          const GAConfig& cfg = {}) {
    const auto& g = *ctx.graph;
    const auto& order = ctx.inst->order;

    const auto path_ok = [&](const Path& p) {
        if (p.empty() || std::cmp_greater(p.size(), cfg.max_hops)) return false;
        std::vector<char> seen(static_cast<std::size_t>(g.n_tokens), 0);
        seen[static_cast<std::size_t>(order.src)] = 1;
        int at = order.src;
        for (int ei : p) {
            if (ei < 0 || std::cmp_greater_equal(ei, g.edges.size())) return false;
            const auto& e = g.edges[static_cast<std::size_t>(ei)];
            if (e.from != at || seen[static_cast<std::size_t>(e.to)]) return false;
            seen[static_cast<std::size_t>(e.to)] = 1;
            at = e.to;
        }
        return at == order.dst;
    };

    RouteGenome out;
    for (std::size_t k = 0; k < genome.paths.size() && k < genome.weights.size(); ++k) {
        const double w = genome.weights[k];
        if (!(w > 0) || !std::isfinite(w)) continue;
        if (!path_ok(genome.paths[k])) continue;
        bool merged = false;
        for (std::size_t j = 0; j < out.paths.size(); ++j)
            if (out.paths[j] == genome.paths[k]) {
                out.weights[j] += w;
                merged = true;
                break;
            }
        if (!merged) {
            out.paths.push_back(genome.paths[k]);
            out.weights.push_back(w);
        }
    }

    while (std::cmp_greater(out.paths.size(), cfg.k_max)) {  // defensive: cap by weight
        const auto low = std::min_element(out.weights.begin(), out.weights.end());
        const auto at = static_cast<std::size_t>(low - out.weights.begin());
        out.paths.erase(out.paths.begin() + static_cast<std::ptrdiff_t>(at));
        out.weights.erase(out.weights.begin() + static_cast<std::ptrdiff_t>(at));
    }

    if (out.paths.empty()) {
        PathSampler sampler(ctx, cfg.max_hops);  // throws NoFeasiblePath when hopeless
        out.paths.push_back(sampler.fallback());
        out.weights.push_back(1.0);
        return out;
    }
    double sum = 0;
    for (double w : out.weights) sum += w;
    for (double& w : out.weights) w /= sum;
    return out;
}

// ---- crossover ----

namespace detail {

/// Marginal surplus of each path at the current weights: its own output value
/// minus its share of the input, inside the joint simulation.
inline std::vector<double> path_marginals(const RouteGenome& genome, const EvalContext& ctx) {
    const auto& inst = *ctx.inst;
    const auto sim = simulate_route(genome, *ctx.graph, inst.pools, inst.order);
    const double p_dst = inst.eth_price(inst.order.dst);
    const double p_src = inst.eth_price(inst.order.src);
    std::vector<double> m(genome.paths.size());
    for (std::size_t k = 0; k < genome.paths.size(); ++k)
        m[k] = sim.path_out[k] * p_dst - genome.weights[k] * inst.order.quantity * p_src;
    return m;
}

}  // namespace detail

/// Edge-stitching crossover.  Children are seeded by crossing parent A's
/// prefix into parent B's suffix at a shared edge, then topped up with the
/// parents' own paths; duplicated paths average their weights, and any excess
/// beyond K_max is pruned by lowest marginal surplus at the current split.
inline RouteGenome crossover(const RouteGenome& a, const RouteGenome& b, const EvalContext& ctx,
                             const GAConfig& cfg = {}) {
    const auto& g = *ctx.graph;
    const auto& order = ctx.inst->order;

    RouteGenome child;
    const auto contains = [&](const Path& p) {
        return std::find(child.paths.begin(), child.paths.end(), p) != child.paths.end();
    };
    const auto weight_in = [](const RouteGenome& parent, const Path& p, double* w) {
        for (std::size_t k = 0; k < parent.paths.size(); ++k)
            if (parent.paths[k] == p) {
                *w = parent.weights[k];
                return true;
            }
        return false;
    };
    const auto simple = [&](const Path& p) {
        if (p.empty() || std::cmp_greater(p.size(), cfg.max_hops)) return false;
        std::vector<char> seen(static_cast<std::size_t>(g.n_tokens), 0);
        seen[static_cast<std::size_t>(order.src)] = 1;
        for (int ei : p) {
            const int to = g.edges[static_cast<std::size_t>(ei)].to;
            if (seen[static_cast<std::size_t>(to)]) return false;
            seen[static_cast<std::size_t>(to)] = 1;
        }
        return true;
    };

    // Stitched paths: cross at the first edge the two parent paths share.
    for (std::size_t i = 0; i < a.paths.size(); ++i)
        for (std::size_t j = 0; j < b.paths.size(); ++j) {
            const auto& pa = a.paths[i];
            const auto& pb = b.paths[j];
            std::size_t ia = pa.size(), jb = 0;
            for (std::size_t x = 0; x < pa.size() && ia == pa.size(); ++x)
                for (std::size_t y = 0; y < pb.size(); ++y)
                    if (pa[x] == pb[y]) {
                        ia = x;
                        jb = y;
                        break;
                    }
            if (ia == pa.size()) continue;
            Path stitched(pa.begin(), pa.begin() + static_cast<std::ptrdiff_t>(ia) + 1);
            stitched.insert(stitched.end(), pb.begin() + static_cast<std::ptrdiff_t>(jb) + 1,
                            pb.end());
            if (!simple(stitched) || contains(stitched)) continue;
            // A stitch that merely reproduces a parent path is not a
            // recombination; the fill step below adds it with proper weights.
            const auto is_parent_path = [&](const RouteGenome& parent) {
                return std::find(parent.paths.begin(), parent.paths.end(), stitched) !=
                       parent.paths.end();
            };
            if (is_parent_path(a) || is_parent_path(b)) continue;
            child.paths.push_back(std::move(stitched));
            child.weights.push_back((a.weights[i] + b.weights[j]) / 2);
        }

    // Fill from the parents, alternating; a path present in both gets the
    // averaged weight once.
    const std::size_t fill = std::max(a.paths.size(), b.paths.size());
    for (std::size_t k = 0; k < fill; ++k)
        for (const auto* parent : {&a, &b}) {
            const auto* other = parent == &a ? &b : &a;
            if (k >= parent->paths.size()) continue;
            const auto& p = parent->paths[k];
            if (contains(p)) continue;
            double w = parent->weights[k], wo = 0;
            if (weight_in(*other, p, &wo)) w = (w + wo) / 2;
            child.paths.push_back(p);
            child.weights.push_back(w);
        }

    double sum = 0;
    for (double w : child.weights) sum += w;
    if (sum > 0)
        for (double& w : child.weights) w /= sum;

    // Cap K by dropping the weakest marginal contributor at the current w.
    while (std::cmp_greater(child.paths.size(), cfg.k_max)) {
        const auto marg = detail::path_marginals(child, ctx);
        std::size_t drop = 0;
        for (std::size_t k = 1; k < marg.size(); ++k)
            if (marg[k] <= marg[drop]) drop = k;  // ties drop the later path
        child.paths.erase(child.paths.begin() + static_cast<std::ptrdiff_t>(drop));
        child.weights.erase(child.weights.begin() + static_cast<std::ptrdiff_t>(drop));
        double s = 0;
        for (double w : child.weights) s += w;
        for (double& w : child.weights) w /= s;
    }

    try {
        child = repair(child, ctx, cfg);
        validate_genome(child, g, order, cfg.k_max, cfg.max_hops);
        return child;
    } catch (const Error&) {
        // No feasible child: hand back the fitter parent.
        const auto net = [&](const RouteGenome& p) {
            return evaluate_surplus(p, g, *ctx.inst) - evaluate_gas(p, g, ctx.gas);
        };
        return net(a) >= net(b) ? a : b;
    }
}

// ---- mutation ----

enum class MutationOp { splice_add, splice_drop, edge_swap, pool_substitution, ratio_perturb };

/// Apply one operator unconditionally (no rate gate); used by `mutate` and
/// directly testable.  Inapplicable operators return the genome unchanged.
inline RouteGenome apply_mutation(const RouteGenome& genome, MutationOp op, const EvalContext& ctx,
                                  const GAConfig& cfg, Rng& rng, const PathSampler& sampler) {
    const auto& g = *ctx.graph;
    RouteGenome out = genome;

    /// Parallel edges between the same ordered token pair, excluding `ei`.
    const auto alternatives = [&](int ei) {
        const auto& e = g.edges[static_cast<std::size_t>(ei)];
        std::vector<int> alt;
        for (int other : g.out[static_cast<std::size_t>(e.from)])
            if (other != ei && g.edges[static_cast<std::size_t>(other)].to == e.to)
                alt.push_back(other);
        return alt;
    };

    switch (op) {
        case MutationOp::splice_add: {
            if (std::cmp_greater_equal(out.paths.size(), cfg.k_max)) return genome;
            out.paths.push_back(sampler.sample(rng));
            out.weights.push_back(1.0 / static_cast<double>(out.paths.size()));
            break;
        }
        case MutationOp::splice_drop: {
            if (out.paths.size() <= 1) return genome;
            const auto k = rng.index(out.paths.size());
            out.paths.erase(out.paths.begin() + static_cast<std::ptrdiff_t>(k));
            out.weights.erase(out.weights.begin() + static_cast<std::ptrdiff_t>(k));
            break;
        }
        case MutationOp::edge_swap:
        case MutationOp::pool_substitution: {
            std::vector<std::pair<std::size_t, std::size_t>> spots;  // (path, hop)
            for (std::size_t k = 0; k < out.paths.size(); ++k)
                for (std::size_t h = 0; h < out.paths[k].size(); ++h)
                    if (!alternatives(out.paths[k][h]).empty()) spots.emplace_back(k, h);
            if (spots.empty()) return genome;
            const auto [k, h] = spots[rng.index(spots.size())];
            const auto alt = alternatives(out.paths[k][h]);
            if (op == MutationOp::edge_swap) {
                out.paths[k][h] = alt[rng.index(alt.size())];
            } else {
                double total = 0;
                std::vector<double> mass;
                for (int ei : alt) {
                    const auto& e = g.edges[static_cast<std::size_t>(ei)];
                    mass.push_back(depth(g.pools[static_cast<std::size_t>(e.pool)], e.from));
                    total += mass.back();
                }
                const double u = rng.uniform(0, total);
                double acc = 0;
                std::size_t pick = alt.size() - 1;
                for (std::size_t i = 0; i < alt.size(); ++i) {
                    acc += mass[i];
                    if (u < acc) {
                        pick = i;
                        break;
                    }
                }
                out.paths[k][h] = alt[pick];
            }
            break;
        }
        case MutationOp::ratio_perturb: {
            double sum = 0;
            for (double& w : out.weights) {
                w = std::max(0.0, w + rng.normal(0.0, 0.1));
                sum += w;
            }
            if (sum <= 0)
                std::fill(out.weights.begin(), out.weights.end(),
                          1.0 / static_cast<double>(out.weights.size()));
            else
                for (double& w : out.weights) w /= sum;
            break;
        }
    }
    return repair(out, ctx, cfg);
}

/// With probability mutation_rate, apply one operator drawn uniformly from
/// the applicable ones, then repair.
inline RouteGenome mutate(const RouteGenome& genome, const EvalContext& ctx, const GAConfig& cfg,
                          Rng& rng, const PathSampler& sampler) {
    if (!rng.bernoulli(cfg.mutation_rate)) return genome;

    const auto& g = *ctx.graph;
    bool swappable = false;
    for (const auto& path : genome.paths) {
        for (int ei : path) {
            const auto& e = g.edges[static_cast<std::size_t>(ei)];
            for (int other : g.out[static_cast<std::size_t>(e.from)])
                if (other != ei && g.edges[static_cast<std::size_t>(other)].to == e.to) {
                    swappable = true;
                    break;
                }
            if (swappable) break;
        }
        if (swappable) break;
    }

    std::vector<MutationOp> ops;
    if (std::cmp_less(genome.paths.size(), cfg.k_max)) ops.push_back(MutationOp::splice_add);
    if (genome.paths.size() > 1) ops.push_back(MutationOp::splice_drop);
    if (swappable) {
        ops.push_back(MutationOp::edge_swap);
        ops.push_back(MutationOp::pool_substitution);
    }
    ops.push_back(MutationOp::ratio_perturb);
    return apply_mutation(genome, ops[rng.index(ops.size())], ctx, cfg, rng, sampler);
}

// ---- initialization ----

/// Seeds (deduplicated, feasibility-checked) plus liquidity-biased random
/// genomes up to the population size.
inline std::vector<RouteGenome> init_population(const EvalContext& ctx,
                                                const std::vector<RouteGenome>& seeds,
                                                const GAConfig& cfg, Rng& rng) {
    const PathSampler sampler(ctx, cfg.max_hops);
    std::vector<RouteGenome> pop;
    for (const auto& seed : seeds) {
        if (std::cmp_greater_equal(pop.size(), cfg.population)) break;
        if (!genome_feasible(seed, *ctx.graph, ctx.inst->order, cfg.k_max, cfg.max_hops)) continue;
        if (std::find(pop.begin(), pop.end(), seed) == pop.end()) pop.push_back(seed);
    }
    while (std::cmp_less(pop.size(), cfg.population)) {
        const auto k = static_cast<std::size_t>(rng.uniform_int(1, cfg.k_max));
        RouteGenome genome;
        for (std::size_t i = 0; i < k; ++i) genome.paths.push_back(sampler.sample(rng));
        genome.weights = rng.simplex(k);
        pop.push_back(repair(genome, ctx, cfg));
    }
    return pop;
}

}  // namespace routeopt
