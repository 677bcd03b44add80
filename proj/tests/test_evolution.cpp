#include <gtest/gtest.h>

#include "rfgen/evolution.hpp"
#include "support.hpp"

using namespace rfgen;

namespace {

EvolutionConfig small_config(std::uint64_t seed)
{
    EvolutionConfig cfg;
    cfg.population_size = 48;
    cfg.generations = 6;
    cfg.elitism_count = 4;
    cfg.seed = seed;
    return cfg;
}

int count_diff(const Individual& a, const Individual& b)
{
    int n = 0;
    for (std::size_t t = 0; t < a.trees.size(); ++t) {
        n += a.trees[t] == b.trees[t] ? 0 : 1;
    }
    return n;
}

} // namespace

TEST(Evolution, InitialPopulationShape)
{
    EvolutionConfig cfg;
    Rng rng(1);
    const auto pop = initialize(cfg, rng);
    ASSERT_EQ(pop.size(), 1024u);
    int min_depth = 100;
    int max_depth = 0;
    for (const auto& ind : pop) {
        ASSERT_EQ(ind.trees.size(), 5u);
        EXPECT_FALSE(ind.evaluated);
        for (const auto& t : ind.trees) {
            EXPECT_LE(t.depth(), 15);
            min_depth = std::min(min_depth, t.depth());
            max_depth = std::max(max_depth, t.depth());
        }
    }
    EXPECT_GE(min_depth, 1);
    EXPECT_EQ(max_depth, 6);
}

TEST(Evolution, InitializationDeterministic)
{
    EvolutionConfig cfg;
    cfg.population_size = 100;
    Rng a(5);
    Rng b(5);
    const auto pa = initialize(cfg, a);
    const auto pb = initialize(cfg, b);
    for (std::size_t i = 0; i < pa.size(); ++i) {
        EXPECT_EQ(pa[i].trees, pb[i].trees);
    }
}

TEST(Evolution, CrossoverOfIdenticalParents)
{
    Individual terminals;
    terminals.trees.assign(5, GpTree{});
    Rng rng(2);
    for (int i = 0; i < 20; ++i) {
        const auto [c1, c2] = crossover(terminals, terminals, 15, rng);
        EXPECT_EQ(c1.trees, terminals.trees);
        EXPECT_EQ(c2.trees, terminals.trees);
    }

    EvolutionConfig cfg;
    cfg.population_size = 10;
    const auto pop = initialize(cfg, rng);
    for (const auto& p : pop) {
        const std::size_t node = uniform_index(rng, p.trees[2].size());
        const auto [r1, r2] = crossover_at(p, p, 2, node, node, 15);
        EXPECT_EQ(r1.trees, p.trees);
        EXPECT_EQ(r2.trees, p.trees);
        const auto [d1, d2] = crossover(p, p, 15, rng);
        EXPECT_LE(count_diff(p, d1), 1);
        EXPECT_LE(count_diff(p, d2), 1);
    }
}

TEST(Evolution, RootCrossoverSwapsWholeTrees)
{
    EvolutionConfig cfg;
    cfg.population_size = 2;
    Rng rng(3);
    const auto pop = initialize(cfg, rng);
    const auto [c1, c2] = crossover_at(pop[0], pop[1], 3, 0, 0, 15);
    for (std::size_t t = 0; t < 5; ++t) {
        EXPECT_EQ(c1.trees[t], t == 3 ? pop[1].trees[t] : pop[0].trees[t]);
        EXPECT_EQ(c2.trees[t], t == 3 ? pop[0].trees[t] : pop[1].trees[t]);
    }
}

TEST(Evolution, CrossoverDepthGuard)
{
    Rng deep_rng(4);
    Individual deep;
    deep.trees.assign(5, random_tree(15, InitMethod::Full, deep_rng));
    const auto [c1, c2] = crossover_at(deep, deep, 0, deep.trees[0].size() - 1, 0, 15);
    EXPECT_EQ(c1.trees[0], deep.trees[0]);
    EXPECT_LE(c2.trees[0].depth(), 15);

    EvolutionConfig cfg;
    cfg.population_size = 50;
    Rng rng(5);
    auto pop = initialize(cfg, rng);
    for (int i = 0; i < 1000; ++i) {
        const std::size_t a = uniform_index(rng, pop.size());
        const std::size_t b = uniform_index(rng, pop.size());
        auto [x, y] = crossover(pop[a], pop[b], 15, rng);
        for (const auto* c : {&x, &y}) {
            for (const auto& t : c->trees) {
                ASSERT_LE(t.depth(), 15);
            }
        }
        pop[a] = std::move(x);
        pop[b] = std::move(y);
    }
}

TEST(Evolution, MutationAtRootReplacesTree)
{
    EvolutionConfig cfg;
    cfg.population_size = 1;
    Rng rng(6);
    const auto pop = initialize(cfg, rng);
    const GpTree fresh = parse_sexpr("(sin (tanh X))");
    const auto m = mutate_at(pop[0], 1, 0, fresh, 15);
    EXPECT_EQ(m.trees[1], fresh);
    EXPECT_EQ(count_diff(pop[0], m), pop[0].trees[1] == fresh ? 0 : 1);
    EXPECT_FALSE(m.evaluated);
}

TEST(Evolution, MutationChangesAtMostOneTree)
{
    EvolutionConfig cfg;
    cfg.population_size = 20;
    Rng rng(7);
    auto pop = initialize(cfg, rng);
    int changed = 0;
    for (int i = 0; i < 1000; ++i) {
        auto& p = pop[static_cast<std::size_t>(i % 20)];
        auto m = mutate(p, 15, 4, rng);
        const int d = count_diff(p, m);
        EXPECT_LE(d, 1);
        changed += d;
        for (const auto& t : m.trees) {
            ASSERT_LE(t.depth(), 15);
        }
        p = std::move(m);
    }
    EXPECT_GT(changed, 700);
}

TEST(Evolution, TournamentPicksBestOfDraws)
{
    std::vector<Individual> pop(20);
    for (std::size_t i = 0; i < pop.size(); ++i) {
        pop[i].fitness = fitness_from_stats(0.8, 0.8 - 0.01 * static_cast<double>(i), 0.8, {});
    }
    Rng rng(8);
    EXPECT_EQ(tournament(pop, 1000, rng), 19u);
}

TEST(Evolution, ZeroGenerationsReturnsInitialBest)
{
    const auto d = testing_support::iris();
    auto cfg = small_config(11);
    cfg.generations = 0;
    const auto r = run(d.column("F1"), cfg);
    ASSERT_EQ(r.fitness_history.size(), 1u);
    EXPECT_EQ(r.best.trees.size(), 5u);
    EXPECT_EQ(r.fitness_history[0], fitness_value(r.best.fitness));
}

TEST(Evolution, EqualSeedsIdenticalRuns)
{
    const auto d = testing_support::iris();
    const auto a = run(d.column("F3"), small_config(12));
    const auto b = run(d.column("F3"), small_config(12));
    EXPECT_EQ(a.best.trees, b.best.trees);
    EXPECT_EQ(a.best.fitness, b.best.fitness);
    EXPECT_EQ(a.fitness_history, b.fitness_history);
    EXPECT_EQ(a.psi, b.psi);
}

TEST(Evolution, ThreadedEvaluationMatchesSerial)
{
    const auto d = testing_support::iris();
    auto cfg = small_config(13);
    const auto a = run(d.column("F0"), cfg);
    cfg.threads = 3;
    const auto b = run(d.column("F0"), cfg);
    EXPECT_EQ(a.best.trees, b.best.trees);
    EXPECT_EQ(a.fitness_history, b.fitness_history);
}

TEST(EvolutionProperty, ElitismMonotonicity)
{
    const auto d = testing_support::iris();
    for (std::uint64_t seed : {20, 21, 22}) {
        auto cfg = small_config(seed);
        cfg.generations = 10;
        const auto r = run(d.column("F2"), cfg);
        ASSERT_EQ(r.fitness_history.size(), 11u);
        for (std::size_t g = 1; g < r.fitness_history.size(); ++g) {
            EXPECT_GE(r.fitness_history[g], r.fitness_history[g - 1]);
        }
        EXPECT_EQ(r.fitness_history.back(), fitness_value(r.best.fitness));
        for (const auto& t : r.best.trees) {
            EXPECT_LE(t.depth(), 15);
        }
    }
}

TEST(Evolution, SubsampleStillRuns)
{
    const auto d = testing_support::iris();
    auto cfg = small_config(14);
    cfg.mi_subsample = 60;
    const auto r = run(d.column("F2"), cfg);
    EXPECT_TRUE(r.best.fitness.has_value());
}

TEST(Evolution, ConfigValidationAndErrors)
{
    EvolutionConfig cfg;
    cfg.crossover_rate = 0.7;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = {};
    cfg.elitism_count = cfg.population_size;
    EXPECT_THROW(cfg.validate(), ConfigError);
    const std::vector<double> constant(50, 1.0);
    EXPECT_THROW(run(constant, small_config(1)), DataError);
}
