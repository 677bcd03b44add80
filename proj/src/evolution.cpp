#include "rfgen/evolution.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numeric>
#include <thread>

namespace rfgen {

void EvolutionConfig::validate() const
{
    if (population_size < 2) {
        throw ConfigError("evolution: population_size must be >= 2");
    }
    if (generations < 0) {
        throw ConfigError("evolution: generations must be >= 0");
    }
    if (crossover_rate < 0.0 || mutation_rate < 0.0 || std::abs(crossover_rate + mutation_rate - 1.0) > 1e-9) {
        throw ConfigError("evolution: crossover_rate + mutation_rate must equal 1");
    }
    if (elitism_count < 0 || elitism_count >= population_size) {
        throw ConfigError("evolution: elitism_count must lie in [0, population_size)");
    }
    if (max_depth < 1) {
        throw ConfigError("evolution: max_depth must be >= 1");
    }
    if (tournament_size < 1) {
        throw ConfigError("evolution: tournament_size must be >= 1");
    }
    if (init_min_depth < 1 || init_max_depth < init_min_depth) {
        throw ConfigError("evolution: invalid initialization depth range");
    }
    if (mutation_depth < 1) {
        throw ConfigError("evolution: mutation_depth must be >= 1");
    }
    if (threads < 0) {
        throw ConfigError("evolution: threads must be >= 0");
    }
    fitness.validate();
    conditioning.validate();
}

std::vector<Individual> initialize(const EvolutionConfig& cfg, Rng& rng)
{
    // ramped half-and-half: cycle depths over [init_min, init_max], alternating grow/full per ramp
    const int lo = std::min(cfg.init_min_depth, cfg.max_depth);
    const int hi = std::min(cfg.init_max_depth, cfg.max_depth);
    const int ramp = hi - lo + 1;
    std::vector<Individual> pop(static_cast<std::size_t>(cfg.population_size));
    std::size_t counter = 0;
    for (auto& ind : pop) {
        ind.trees.reserve(static_cast<std::size_t>(cfg.fitness.n_trees));
        for (int t = 0; t < cfg.fitness.n_trees; ++t, ++counter) {
            const int depth = lo + static_cast<int>(counter % static_cast<std::size_t>(ramp));
            const auto method = (counter / static_cast<std::size_t>(ramp)) % 2 == 0 ? InitMethod::Grow : InitMethod::Full;
            ind.trees.push_back(random_tree(depth, method, rng));
        }
    }
    return pop;
}

std::pair<Individual, Individual> crossover_at(const Individual& a, const Individual& b, std::size_t tree_index,
    std::size_t node_a, std::size_t node_b, int max_depth)
{
    Individual ca{a.trees, false, std::nullopt};
    Individual cb{b.trees, false, std::nullopt};
    const GpTree& ta = a.trees.at(tree_index);
    const GpTree& tb = b.trees.at(tree_index);
    GpTree na = ta.with_subtree(node_a, tb.subtree(node_b));
    GpTree nb = tb.with_subtree(node_b, ta.subtree(node_a));
    if (na.depth() <= max_depth) {
        ca.trees[tree_index] = std::move(na);
    }
    if (nb.depth() <= max_depth) {
        cb.trees[tree_index] = std::move(nb);
    }
    return {std::move(ca), std::move(cb)};
}

std::pair<Individual, Individual> crossover(const Individual& a, const Individual& b, int max_depth, Rng& rng)
{
    const std::size_t t = uniform_index(rng, a.trees.size());
    const std::size_t na = uniform_index(rng, a.trees[t].size());
    const std::size_t nb = uniform_index(rng, b.trees[t].size());
    return crossover_at(a, b, t, na, nb, max_depth);
}

Individual mutate_at(const Individual& a, std::size_t tree_index, std::size_t node, const GpTree& replacement, int max_depth)
{
    Individual c{a.trees, false, std::nullopt};
    GpTree t = a.trees.at(tree_index).with_subtree(node, replacement);
    if (t.depth() <= max_depth) {
        c.trees[tree_index] = std::move(t);
    }
    return c;
}

Individual mutate(const Individual& a, int max_depth, int replacement_depth, Rng& rng)
{
    const std::size_t t = uniform_index(rng, a.trees.size());
    const std::size_t node = uniform_index(rng, a.trees[t].size());
    const GpTree replacement = random_tree(replacement_depth, InitMethod::Grow, rng);
    return mutate_at(a, t, node, replacement, max_depth);
}

namespace {

bool better(const Individual& a, std::size_t ia, const Individual& b, std::size_t ib)
{
    const auto c = compare_fitness(a.fitness, b.fitness, a.total_nodes(), b.total_nodes());
    if (c != 0) {
        return c > 0;
    }
    return ia < ib;
}

void evaluate_population(std::vector<Individual>& pop, FitnessEvaluator& eval, int threads)
{
    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < pop.size(); ++i) {
        if (!pop[i].evaluated) {
            todo.push_back(i);
        }
    }
    auto work = [&](std::size_t i) {
        pop[i].fitness = eval.evaluate(pop[i]);
        pop[i].evaluated = true;
    };
    unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : static_cast<unsigned>(threads);
    workers = std::min<unsigned>(workers, static_cast<unsigned>(todo.size()));
    if (workers <= 1) {
        for (std::size_t i : todo) {
            work(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            try {
                for (std::size_t k = next++; k < todo.size(); k = next++) {
                    work(todo[k]);
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                failure = std::current_exception();
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

std::size_t best_index(const std::vector<Individual>& pop)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < pop.size(); ++i) {
        if (better(pop[i], i, pop[best], best)) {
            best = i;
        }
    }
    return best;
}

} // namespace

std::size_t tournament(std::span<const Individual> pop, int tournament_size, Rng& rng)
{
    std::size_t winner = uniform_index(rng, pop.size());
    for (int i = 1; i < tournament_size; ++i) {
        const std::size_t c = uniform_index(rng, pop.size());
        if (better(pop[c], c, pop[winner], winner)) {
            winner = c;
        }
    }
    return winner;
}

RunResult run(std::span<const double> source_original, const EvolutionConfig& cfg)
{
    const auto start = std::chrono::steady_clock::now();
    cfg.validate();
    if (!all_finite({source_original.begin(), source_original.end()})) {
        throw DataError("run: source feature has non-finite values");
    }

    FeatureVector original(source_original.begin(), source_original.end());
    FeatureVector conditioned = condition_source(original, cfg.conditioning);
    if (cfg.mi_subsample > 0 && original.size() > cfg.mi_subsample) {
        std::vector<std::size_t> idx(original.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        Rng sub(mix64(cfg.seed, 0x5ab5a3b1eULL));
        for (std::size_t i = 0; i < cfg.mi_subsample; ++i) {
            std::swap(idx[i], idx[i + uniform_index(sub, idx.size() - i)]);
        }
        idx.resize(cfg.mi_subsample);
        std::sort(idx.begin(), idx.end());
        FeatureVector o;
        FeatureVector c;
        for (std::size_t i : idx) {
            o.push_back(original[i]);
            c.push_back(conditioned[i]);
        }
        original = std::move(o);
        conditioned = std::move(c);
    }
    if (original.size() < 2 * static_cast<std::size_t>(cfg.fitness.estimator.k_neighbors) + 1) {
        throw DataError("run: too few instances for the MI estimator");
    }

    const double psi = baseline_psi(original, cfg.fitness.estimator);
    FitnessConfig fitness_cfg = cfg.fitness;
    fitness_cfg.rounding_places = cfg.conditioning.rounding_places;
    FitnessEvaluator eval(original, conditioned, psi, fitness_cfg);
    Rng rng(cfg.seed);

    RunResult result;
    result.config = cfg;
    result.psi = psi;

    std::vector<Individual> pop = initialize(cfg, rng);
    evaluate_population(pop, eval, cfg.threads);
    result.best = pop[best_index(pop)];
    result.fitness_history.push_back(fitness_value(result.best.fitness));

    const auto pop_size = static_cast<std::size_t>(cfg.population_size);
    std::vector<std::size_t> order(pop_size);
    for (int g = 0; g < cfg.generations; ++g) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return better(pop[a], a, pop[b], b); });

        std::vector<Individual> next;
        next.reserve(pop_size);
        for (int e = 0; e < cfg.elitism_count; ++e) {
            next.push_back(pop[order[static_cast<std::size_t>(e)]]);
        }
        while (next.size() < pop_size) {
            if (uniform_real(rng) < cfg.crossover_rate) {
                const std::size_t p1 = tournament(pop, cfg.tournament_size, rng);
                const std::size_t p2 = tournament(pop, cfg.tournament_size, rng);
                auto [c1, c2] = crossover(pop[p1], pop[p2], cfg.max_depth, rng);
                next.push_back(std::move(c1));
                if (next.size() < pop_size) {
                    next.push_back(std::move(c2));
                }
            } else {
                const std::size_t p = tournament(pop, cfg.tournament_size, rng);
                next.push_back(mutate(pop[p], cfg.max_depth, cfg.mutation_depth, rng));
            }
        }
        pop = std::move(next);
        eval.prune();
        evaluate_population(pop, eval, cfg.threads);

        const std::size_t b = best_index(pop);
        if (compare_fitness(pop[b].fitness, result.best.fitness, pop[b].total_nodes(), result.best.total_nodes()) > 0) {
            result.best = pop[b];
        }
        result.fitness_history.push_back(fitness_value(result.best.fitness));
    }

    result.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

} // namespace rfgen
