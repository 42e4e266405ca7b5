#pragma once

// Age-layered population structure GA over symbolic discriminant trees.
// Genotypic age counts the generations a lineage's material has evolved:
// fresh random individuals start at 1, offspring take 1 + the oldest
// parent's age, and every survivor ages by one per generation. Each layer
// only admits individuals up to its age limit (linear schedule
// age_gap * (layer + 1), topmost unbounded); layers are evolved top-down,
// one generation each. Individuals that outgrow their layer migrate upward
// (the displaced bottom cohort moves up when L0 is re-seeded with fresh
// random individuals every age_gap generations). A best-ever archive kept
// outside the layers makes the reported fitness monotone even though layer
// contents churn.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "bwc/gp/expression.hpp"
#include "bwc/rng.hpp"

namespace bwc::gp {

struct EmptyData : std::runtime_error {
    EmptyData() : std::runtime_error("training data is empty") {}
};

struct EmptyPool : std::runtime_error {
    EmptyPool() : std::runtime_error("selection pool is empty") {}
};

struct Sample {
    std::vector<double> features;
    double target = 1.0;  // -1 or +1
};

using Dataset = std::vector<Sample>;

struct Individual {
    Expr genome;
    int age = 1;               // >= 1 always; advances each generation survived
    double fitness = 0.0;      // MSE, lower is better
    int birth_generation = 0;  // generation the individual was created in
};

struct AgeLayer {
    int index = 0;
    int max_age = std::numeric_limits<int>::max();
    std::vector<Individual> members;
};

struct AlpsConfig {
    int n_layers = 5;
    int layer_capacity = 60;  // m individuals per layer
    int age_gap = 10;
    double mutation_probability = 0.18;
    int max_generations = 100;
    int tournament_k = 3;
    int max_depth = 8;
    std::uint64_t seed = 0;
    int n_features = 1;
    std::vector<Op> ops = {Op::add, Op::sub, Op::mul, Op::div};

    void validate() const {
        if (n_layers < 1 || layer_capacity < 1 || age_gap < 1 || tournament_k < 1 ||
            max_depth < 1 || n_features < 1 || max_generations < 0)
            throw std::invalid_argument("all ALPS counts must be >= 1");
        if (mutation_probability < 0.0 || mutation_probability > 1.0)
            throw std::invalid_argument("mutation probability must be in [0, 1]");
        if (ops.empty()) throw std::invalid_argument("operator set must not be empty");
    }

    TreeGenConfig tree_config() const { return {n_features, max_depth, ops, 0.25}; }

    int layer_max_age(int layer) const {
        return layer == n_layers - 1 ? std::numeric_limits<int>::max() : age_gap * (layer + 1);
    }
};

// Mean squared error of the clamped expression output against +-1 targets.
inline double fitness_mse(const Expr& e, const Dataset& data) {
    if (data.empty()) throw EmptyData();
    double sum = 0.0;
    for (const auto& s : data) {
        const double raw = e.evaluate(s.features);
        const double out = std::clamp(raw, -1.0, 1.0);
        const double d = out - s.target;
        sum += d * d;
    }
    return sum / static_cast<double>(data.size());
}

inline int offspring_age(const std::vector<const Individual*>& parents) {
    if (parents.empty()) return 1;  // fresh random individual
    int oldest = 0;
    for (const auto* p : parents) oldest = std::max(oldest, p->age);
    return 1 + oldest;
}

// Best-of-k tournament with k distinct entrants (k is clamped to the pool
// size, so k == pool size degenerates to picking the global best).
inline const Individual& tournament_select(const std::vector<const Individual*>& pool,
                                           int k, Rng& rng) {
    if (pool.empty()) throw EmptyPool();
    const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k), pool.size());
    std::vector<std::size_t> idx(pool.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    const Individual* best = nullptr;
    for (std::size_t draw = 0; draw < kk; ++draw) {
        const std::size_t j = draw + static_cast<std::size_t>(rng.below(idx.size() - draw));
        std::swap(idx[draw], idx[j]);
        const Individual* cand = pool[idx[draw]];
        if (best == nullptr || cand->fitness < best->fitness) best = cand;
    }
    return *best;
}

// Subtree exchange: a random subtree of `a` is replaced by a copy of a
// random subtree of `b`. Rejected and retried (up to 5 times) when the
// result would exceed the depth bound; after that, `a` is returned as is.
inline Expr crossover(const Expr& a, const Expr& b, int max_depth, Rng& rng) {
    for (int attempt = 0; attempt < 5; ++attempt) {
        Expr child = a;
        std::vector<std::pair<Expr*, int>> nodes_a;
        child.collect(nodes_a);
        auto [target, target_depth] = nodes_a[rng.below(nodes_a.size())];

        Expr donor = b;
        std::vector<std::pair<Expr*, int>> nodes_b;
        donor.collect(nodes_b);
        Expr* source = nodes_b[rng.below(nodes_b.size())].first;

        if (target_depth - 1 + source->depth() <= max_depth) {
            *target = std::move(*source);
            return child;
        }
    }
    return a;
}

// With probability p, replace a uniformly chosen subtree with a fresh random
// subtree sized to keep the whole tree within the depth bound.
inline Expr mutate(const Expr& e, double p, const TreeGenConfig& cfg, Rng& rng) {
    if (!rng.chance(p)) return e;
    Expr out = e;
    std::vector<std::pair<Expr*, int>> nodes;
    out.collect(nodes);
    auto [target, target_depth] = nodes[rng.below(nodes.size())];
    const int depth_left = std::max(1, cfg.max_depth - target_depth + 1);
    TreeGenConfig sub_cfg = cfg;
    sub_cfg.max_depth = depth_left;
    *target = random_expression(sub_cfg, rng);
    return out;
}

// Per-generation bookkeeping for the training log.
struct GenerationStats {
    int generation = 0;
    double best_mse = 0.0;  // best-ever archive, monotone non-increasing
    double mean_mse = 0.0;  // mean fitness of the currently living population
    bool layer0_refresh = false;
};

// Optional instrumentation: every reproduction and refill event, for tests
// that audit the age bookkeeping.
struct AlpsTrace {
    struct Reproduction {
        int generation = 0;
        int layer = 0;
        int parent_age_a = 0;
        int parent_age_b = 0;
        int offspring_age = 0;
    };
    std::vector<Reproduction> reproductions;
    std::vector<int> refill_generations;
};

struct AlpsState {
    std::vector<AgeLayer> layers;
    Individual best;  // best-ever archive
    int generation = 0;
    std::vector<GenerationStats> history;
};

namespace detail {

inline void update_best(AlpsState& state, const Individual& ind) {
    if (ind.fitness < state.best.fitness) state.best = ind;
}

inline double mean_population_mse(const AlpsState& state) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& layer : state.layers) {
        for (const auto& m : layer.members) {
            sum += m.fitness;
            ++n;
        }
    }
    return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

inline Individual fresh_individual(const AlpsConfig& cfg, const Dataset& data, Rng& rng,
                                   int generation) {
    Individual ind;
    ind.genome = random_expression(cfg.tree_config(), rng);
    ind.age = 1;
    ind.fitness = fitness_mse(ind.genome, data);
    ind.birth_generation = generation;
    return ind;
}

// Push an over-age individual to the lowest layer above `from` that admits
// its age: fill free space, else replace the worst member if beaten, else
// drop the candidate.
inline void migrate_up(AlpsState& state, const AlpsConfig& cfg, Individual ind, int from) {
    int target = from + 1;
    while (target < cfg.n_layers - 1 && ind.age > cfg.layer_max_age(target)) ++target;
    if (target >= cfg.n_layers) return;  // single-layer setup: discard
    auto& members = state.layers[static_cast<std::size_t>(target)].members;
    if (members.size() < static_cast<std::size_t>(cfg.layer_capacity)) {
        members.push_back(std::move(ind));
        return;
    }
    auto worst = std::max_element(members.begin(), members.end(),
                                  [](const Individual& x, const Individual& y) {
                                      return x.fitness < y.fitness;
                                  });
    if (ind.fitness < worst->fitness) *worst = std::move(ind);
}

inline void breed_layer(AlpsState& state, const AlpsConfig& cfg, const Dataset& data, int layer,
                        Rng& rng, AlpsTrace* trace) {
    auto& self = state.layers[static_cast<std::size_t>(layer)];
    if (self.members.empty()) return;  // upper layers fill only by migration

    std::vector<const Individual*> pool;
    for (const auto& m : self.members) pool.push_back(&m);
    if (layer > 0) {
        for (const auto& m : state.layers[static_cast<std::size_t>(layer - 1)].members)
            pool.push_back(&m);
    }

    // Elitism of one: the layer's best survives in place.
    const auto elite_it = std::min_element(self.members.begin(), self.members.end(),
                                           [](const Individual& x, const Individual& y) {
                                               return x.fitness < y.fitness;
                                           });
    std::vector<Individual> next;
    next.reserve(static_cast<std::size_t>(cfg.layer_capacity));
    next.push_back(*elite_it);

    std::vector<Individual> migrants;
    for (int i = 1; i < cfg.layer_capacity; ++i) {
        const Individual& pa = tournament_select(pool, cfg.tournament_k, rng);
        const Individual& pb = tournament_select(pool, cfg.tournament_k, rng);
        Individual child;
        child.genome = mutate(crossover(pa.genome, pb.genome, cfg.max_depth, rng),
                              cfg.mutation_probability, cfg.tree_config(), rng);
        child.age = offspring_age({&pa, &pb});
        child.birth_generation = state.generation;
        child.fitness = fitness_mse(child.genome, data);
        update_best(state, child);
        if (trace)
            trace->reproductions.push_back(
                {state.generation, layer, pa.age, pb.age, child.age});
        if (child.age > cfg.layer_max_age(layer))
            migrants.push_back(std::move(child));
        else
            next.push_back(std::move(child));
    }
    self.members = std::move(next);
    for (auto& m : migrants) migrate_up(state, cfg, std::move(m), layer);
}

}  // namespace detail

inline AlpsState init_alps(const AlpsConfig& cfg, const Dataset& data) {
    cfg.validate();
    if (data.empty()) throw EmptyData();

    AlpsState state;
    state.layers.resize(static_cast<std::size_t>(cfg.n_layers));
    for (int i = 0; i < cfg.n_layers; ++i) {
        state.layers[static_cast<std::size_t>(i)].index = i;
        state.layers[static_cast<std::size_t>(i)].max_age = cfg.layer_max_age(i);
    }

    Rng rng(derive_seed(cfg.seed, "alps/init"));
    auto& bottom = state.layers[0].members;
    bottom.reserve(static_cast<std::size_t>(cfg.layer_capacity));
    state.best.fitness = std::numeric_limits<double>::infinity();
    for (int i = 0; i < cfg.layer_capacity; ++i) {
        bottom.push_back(detail::fresh_individual(cfg, data, rng, 0));
        detail::update_best(state, bottom.back());
    }
    state.history.push_back({0, state.best.fitness, detail::mean_population_mse(state), false});
    return state;
}

inline void alps_step(AlpsState& state, const AlpsConfig& cfg, const Dataset& data,
                      AlpsTrace* trace = nullptr) {
    ++state.generation;
    const bool refresh = state.generation % cfg.age_gap == 0;
    Rng rng(derive_seed(cfg.seed, derive_seed(static_cast<std::uint64_t>(state.generation),
                                              "alps/step")));

    for (int layer = cfg.n_layers - 1; layer >= 0; --layer) {
        if (layer == 0 && refresh) {
            // The displaced cohort has reached the layer's age limit; it moves
            // up before the fresh random individuals take its place.
            auto& bottom = state.layers[0].members;
            std::vector<Individual> displaced = std::move(bottom);
            bottom.clear();
            for (auto& m : displaced) detail::migrate_up(state, cfg, std::move(m), 0);
            for (int i = 0; i < cfg.layer_capacity; ++i) {
                bottom.push_back(detail::fresh_individual(cfg, data, rng, state.generation));
                detail::update_best(state, bottom.back());
            }
            if (trace) trace->refill_generations.push_back(state.generation);
        } else {
            detail::breed_layer(state, cfg, data, layer, rng, trace);
        }
    }

    // Survivors' genotypic material has evolved one more generation; anyone
    // now past their layer's limit moves up so the age invariants hold at
    // every generation boundary.
    for (auto& layer : state.layers) {
        for (auto& m : layer.members) {
            if (m.birth_generation < state.generation) ++m.age;
        }
    }
    for (int layer = cfg.n_layers - 2; layer >= 0; --layer) {
        auto& members = state.layers[static_cast<std::size_t>(layer)].members;
        std::vector<Individual> keep;
        keep.reserve(members.size());
        std::vector<Individual> leavers;
        for (auto& m : members) {
            if (m.age > cfg.layer_max_age(layer))
                leavers.push_back(std::move(m));
            else
                keep.push_back(std::move(m));
        }
        members = std::move(keep);
        for (auto& m : leavers) detail::migrate_up(state, cfg, std::move(m), layer);
    }

    state.history.push_back(
        {state.generation, state.best.fitness, detail::mean_population_mse(state), refresh});
}

struct AlpsResult {
    Individual best;
    std::vector<GenerationStats> history;
};

inline AlpsResult run_alps(const AlpsConfig& cfg, const Dataset& data,
                           AlpsTrace* trace = nullptr) {
    AlpsState state = init_alps(cfg, data);
    for (int gen = 0; gen < cfg.max_generations; ++gen) alps_step(state, cfg, data, trace);
    return {state.best, state.history};
}

}  // namespace bwc::gp
