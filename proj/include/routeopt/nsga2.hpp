#pragma once

// Anytime NSGA-II over route genomes.  The engine owns the population and RNG
// so a solve can be resumed with a later deadline; termination is logical
// (generation cap or converged best net surplus) with the clock as a
// backstop, which keeps equally-configured runs bit-identical in practice.
// GAConfig::thread_clock selects which clock backs the budget.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ga_operators.hpp"
#include "hypervolume.hpp"
#include "timing.hpp"

namespace routeopt {

struct GenerationStat {
    double best_net = 0;       // max net surplus in the population
    std::size_t front_size = 0;  // distinct rank-1 genomes
    double hypervolume = 0;    // archive volume vs. the fixed reference point
};

struct GAResult {
    Individual best;                  // argmax net surplus
    std::vector<Individual> front;    // rank-1, deduplicated by genome
    int generations_run = 0;
    long long evaluations = 0;        // cache misses, i.e. true fitness evaluations
    double elapsed_ms = 0;
    bool converged = false;
    std::vector<GenerationStat> history;  // entry per generation incl. generation 0
    double fitness_ms = 0, sorting_ms = 0, selection_ms = 0, variation_ms = 0;
};

class Nsga2Engine {
public:
    Nsga2Engine(const EvalContext& ctx, const std::vector<RouteGenome>& seeds, GAConfig cfg)
        : ctx_(&ctx), cfg_(cfg), rng_(cfg.rng_seed), sampler_(ctx, cfg.max_hops) {
        const double t0 = now_ms();
        auto genomes = init_population(ctx, seeds, cfg_, rng_);
        pop_.reserve(genomes.size());
        for (auto& genome : genomes) {
            Individual ind;
            ind.vector = evaluate(genome);
            ind.genome = std::move(genome);
            pop_.push_back(std::move(ind));
        }
        rank_and_crowd(pop_);
        init_reference();
        std::vector<ObjectiveVector> rank1;
        for (const auto& ind : pop_)
            if (ind.rank == 1) rank1.push_back(ind.vector);
        update_archive(rank1);
        best_net_ = net_of(best_index());
        history_.push_back(snapshot_stat());
        elapsed_ms_ += now_ms() - t0;
    }

    /// Advance until the generation cap, convergence, or `deadline_ms` of
    /// total elapsed time (across all calls); returns the current result.
    GAResult run(double deadline_ms) {
        while (!finished_ && elapsed_ms_ < deadline_ms) {
            const double t0 = now_ms();
            step();
            elapsed_ms_ += now_ms() - t0;
        }
        return result();
    }

    GAResult result() const {
        GAResult r;
        r.best = pop_[best_index()];
        for (const auto& ind : pop_) {
            if (ind.rank != 1) continue;
            bool dup = false;
            for (const auto& kept : r.front)
                if (kept.genome == ind.genome) {
                    dup = true;
                    break;
                }
            if (!dup) r.front.push_back(ind);
        }
        r.generations_run = generations_;
        r.evaluations = evaluations_;
        r.elapsed_ms = elapsed_ms_;
        r.converged = converged_;
        r.history = history_;
        r.fitness_ms = fitness_ms_;
        r.sorting_ms = sorting_ms_;
        r.selection_ms = selection_ms_;
        r.variation_ms = variation_ms_;
        return r;
    }

    const std::vector<Individual>& population() const { return pop_; }
    const ObjectiveVector& reference_point() const { return ref_; }

private:
    double now_ms() const { return detail::now_ms(cfg_.thread_clock); }

    static std::string genome_key(const RouteGenome& g) {
        std::string key;
        key.reserve(g.paths.size() * 24);
        for (std::size_t k = 0; k < g.paths.size(); ++k) {
            key += 'P';
            for (int ei : g.paths[k]) {
                key += std::to_string(ei);
                key += ',';
            }
            key += '@';
            std::uint64_t bits;
            static_assert(sizeof bits == sizeof(double));
            std::memcpy(&bits, &g.weights[k], sizeof bits);
            key += std::to_string(bits);
        }
        return key;
    }

    ObjectiveVector evaluate(const RouteGenome& genome) {
        const double t0 = now_ms();
        const auto key = genome_key(genome);
        if (const auto it = cache_.find(key); it != cache_.end()) {
            fitness_ms_ += now_ms() - t0;
            return it->second;
        }
        const auto v = evaluate_vector(genome, *ctx_);
        cache_.emplace(key, v);
        ++evaluations_;
        fitness_ms_ += now_ms() - t0;
        return v;
    }

    void rank_and_crowd(std::vector<Individual>& pop) {
        const double t0 = now_ms();
        std::vector<ObjectiveVector> vs;
        vs.reserve(pop.size());
        for (const auto& ind : pop) vs.push_back(ind.vector);
        const auto fronts = non_dominated_sort(vs);
        for (std::size_t f = 0; f < fronts.size(); ++f) {
            std::vector<ObjectiveVector> fv;
            fv.reserve(fronts[f].size());
            for (std::size_t i : fronts[f]) fv.push_back(vs[i]);
            const auto d = crowding_distance(fv);
            for (std::size_t i = 0; i < fronts[f].size(); ++i) {
                pop[fronts[f][i]].rank = static_cast<int>(f) + 1;
                pop[fronts[f][i]].crowding = d[i];
            }
        }
        sorting_ms_ += now_ms() - t0;
    }

    std::size_t best_index() const {
        std::size_t best = 0;
        for (std::size_t i = 1; i < pop_.size(); ++i)
            if (net_surplus(pop_[i].vector) > net_surplus(pop_[best].vector)) best = i;
        return best;
    }
    double net_of(std::size_t i) const { return net_surplus(pop_[i].vector); }

    /// Fixed hypervolume reference: slightly worse than the worst initial
    /// point in every maximize coordinate.  Later points that fall below it
    /// are clipped inside hypervolume(), which keeps the archive volume
    /// monotone.
    void init_reference() {
        std::array<double, 4> lo = maximize_form(pop_[0].vector);
        std::array<double, 4> hi = lo;
        for (const auto& ind : pop_) {
            const auto m = maximize_form(ind.vector);
            for (std::size_t i = 0; i < 4; ++i) {
                lo[i] = std::min(lo[i], m[i]);
                hi[i] = std::max(hi[i], m[i]);
            }
        }
        for (std::size_t i = 0; i < 4; ++i) lo[i] -= 1e-9 + 0.05 * (hi[i] - lo[i]);
        ref_.S = lo[0];
        ref_.G = -lo[1];
        ref_.Sigma = -lo[2];
        ref_.R = -lo[3];
    }

    void update_archive(const std::vector<ObjectiveVector>& rank1) {
        for (const auto& v : rank1) {
            bool dominated_or_dup = false;
            for (const auto& kept : archive_)
                if (kept == v || dominates(kept, v)) {
                    dominated_or_dup = true;
                    break;
                }
            if (dominated_or_dup) continue;
            std::erase_if(archive_, [&](const ObjectiveVector& kept) { return dominates(v, kept); });
            archive_.push_back(v);
        }
    }

    GenerationStat snapshot_stat() const {
        GenerationStat s;
        s.best_net = best_net_;
        std::vector<const RouteGenome*> seen;
        for (const auto& ind : pop_) {
            if (ind.rank != 1) continue;
            bool dup = false;
            for (const auto* g : seen)
                if (*g == ind.genome) {
                    dup = true;
                    break;
                }
            if (!dup) seen.push_back(&ind.genome);
        }
        s.front_size = seen.size();
        s.hypervolume = hypervolume(archive_, ref_);
        return s;
    }

    void step() {
        // Variation: N offspring from tournament-selected parents.
        std::vector<Individual> offspring;
        offspring.reserve(pop_.size());
        while (offspring.size() < pop_.size()) {
            const double t_sel = now_ms();
            const auto i1 = tournament_select(pop_, cfg_, rng_);
            const auto i2 = tournament_select(pop_, cfg_, rng_);
            selection_ms_ += now_ms() - t_sel;

            const double t_var = now_ms();
            RouteGenome child;
            if (rng_.bernoulli(cfg_.crossover_rate)) {
                child = rng_.bernoulli(0.5) ? crossover(pop_[i1].genome, pop_[i2].genome, *ctx_, cfg_)
                                            : crossover(pop_[i2].genome, pop_[i1].genome, *ctx_, cfg_);
            } else {
                child = pop_[i1].genome;
            }
            child = mutate(child, *ctx_, cfg_, rng_, sampler_);
            variation_ms_ += now_ms() - t_var;

            Individual ind;
            ind.vector = evaluate(child);
            ind.genome = std::move(child);
            offspring.push_back(std::move(ind));
        }

        // (mu + lambda) environmental selection with a net-surplus elite hold.
        std::vector<Individual> combined = pop_;
        combined.insert(combined.end(), std::make_move_iterator(offspring.begin()),
                        std::make_move_iterator(offspring.end()));
        rank_and_crowd(combined);

        const double t_sel = now_ms();
        std::vector<std::size_t> order(combined.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::vector<char> chosen(combined.size(), 0);
        std::vector<std::size_t> next;

        auto by_net = order;
        std::stable_sort(by_net.begin(), by_net.end(), [&](std::size_t a, std::size_t b) {
            return net_surplus(combined[a].vector) > net_surplus(combined[b].vector);
        });
        for (std::size_t i = 0; i < by_net.size() && std::cmp_less(next.size(), cfg_.elite_count);
             ++i) {
            chosen[by_net[i]] = 1;
            next.push_back(by_net[i]);
        }

        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (combined[a].rank != combined[b].rank) return combined[a].rank < combined[b].rank;
            return combined[a].crowding > combined[b].crowding;
        });
        for (std::size_t i : order) {
            if (next.size() >= pop_.size()) break;
            if (chosen[i]) continue;
            chosen[i] = 1;
            next.push_back(i);
        }

        std::vector<Individual> new_pop;
        new_pop.reserve(next.size());
        for (std::size_t i : next) new_pop.push_back(std::move(combined[i]));
        selection_ms_ += now_ms() - t_sel;

        std::vector<ObjectiveVector> rank1;
        for (const auto& ind : new_pop)
            if (ind.rank == 1) rank1.push_back(ind.vector);
        pop_ = std::move(new_pop);
        update_archive(rank1);

        ++generations_;
        const double best = net_of(best_index());
        if (best - best_net_ < cfg_.convergence_threshold)
            ++stall_;
        else
            stall_ = 0;
        best_net_ = std::max(best_net_, best);
        history_.push_back(snapshot_stat());
        if (stall_ >= convergence_window || generations_ >= cfg_.max_generations) {
            converged_ = stall_ >= convergence_window;
            finished_ = true;
        }
    }

    static constexpr int convergence_window = 10;

    const EvalContext* ctx_;
    GAConfig cfg_;
    Rng rng_;
    PathSampler sampler_;
    std::vector<Individual> pop_;
    std::unordered_map<std::string, ObjectiveVector> cache_;
    std::vector<ObjectiveVector> archive_;  // non-dominated rank-1 vectors ever seen
    ObjectiveVector ref_{};
    std::vector<GenerationStat> history_;
    double best_net_ = 0;
    int generations_ = 0;
    long long evaluations_ = 0;
    double elapsed_ms_ = 0;
    double fitness_ms_ = 0, sorting_ms_ = 0, selection_ms_ = 0, variation_ms_ = 0;
    int stall_ = 0;
    bool converged_ = false;
    bool finished_ = false;
};

/// One-shot evolve under the configured time budget.
inline GAResult evolve(const EvalContext& ctx, const std::vector<RouteGenome>& seeds,
                       const GAConfig& cfg = {}) {
    Nsga2Engine engine(ctx, seeds, cfg);
    return engine.run(cfg.time_budget_ms);
}

}  // namespace routeopt
