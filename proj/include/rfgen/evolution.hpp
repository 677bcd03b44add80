#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rfgen/dataset.hpp"
#include "rfgen/fitness.hpp"
#include "rfgen/individual.hpp"

namespace rfgen {

struct EvolutionConfig {
    int population_size = 1024;
    int generations = 50;
    double crossover_rate = 0.6;
    double mutation_rate = 0.4;
    int elitism_count = 10;
    int max_depth = 15;
    int tournament_size = 7;
    int init_min_depth = 2;
    int init_max_depth = 6;
    int mutation_depth = 4;
    std::uint64_t seed = 0;
    /// When > 0 and the source has more instances, fitness is computed on a
    /// seeded uniform subsample of this many instances (an approximation).
    std::size_t mi_subsample = 0;
    /// Worker threads for fitness evaluation; 0 uses the hardware count.
    int threads = 1;
    FitnessConfig fitness;
    ConditioningConfig conditioning;

    void validate() const;
};

struct RunResult {
    Individual best;
    /// Best-ever fitness after each generation (index 0 = initial population).
    std::vector<double> fitness_history;
    EvolutionConfig config;
    double psi = 0.0;
    double elapsed_seconds = 0.0;
};

std::vector<Individual> initialize(const EvolutionConfig& cfg, Rng& rng);

/// Subtree crossover on tree `tree_index` of both parents at the given node
/// positions. A child tree deeper than max_depth reverts to its parent's tree.
std::pair<Individual, Individual> crossover_at(const Individual& a, const Individual& b, std::size_t tree_index,
    std::size_t node_a, std::size_t node_b, int max_depth);
std::pair<Individual, Individual> crossover(const Individual& a, const Individual& b, int max_depth, Rng& rng);

/// Replaces the subtree at `node` of tree `tree_index` with `replacement`,
/// reverting when the result exceeds max_depth.
Individual mutate_at(const Individual& a, std::size_t tree_index, std::size_t node, const GpTree& replacement, int max_depth);
Individual mutate(const Individual& a, int max_depth, int replacement_depth, Rng& rng);

/// Index of the tournament winner among `tournament_size` uniform draws.
std::size_t tournament(std::span<const Individual> pop, int tournament_size, Rng& rng);

/// Generational loop for one source feature. Throws DataError when the
/// source is constant or its baseline MI is not positive.
RunResult run(std::span<const double> source_original, const EvolutionConfig& cfg);

} // namespace rfgen
