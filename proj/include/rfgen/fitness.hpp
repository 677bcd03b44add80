#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "rfgen/individual.hpp"
#include "rfgen/mi.hpp"

namespace rfgen {

struct FitnessConfig {
    double theta = 0.7;
    int n_trees = 5;
    EstimatorConfig estimator;
    int rounding_places = 5;
    /// Infeasible individuals with mean_source_mi at or below this guard get
    /// penalty_floor instead of -1 / mean_source_mi.
    double mean_guard = 0.01;
    double penalty_floor = -100.0;

    void validate() const;
};

/// Piecewise fitness from already-normalized statistics:
/// quality = min_source - max_shared when min_source >= theta, otherwise
/// penalty = -1 / mean_source (or the floor when mean_source <= guard).
FitnessRecord fitness_from_stats(double min_source_mi, double max_shared_mi, double mean_source_mi, const FitnessConfig& cfg);

/// Statistics over n trees given normalized MI of each tree with the source
/// and the symmetric matrix of normalized pairwise MI (row-major n x n,
/// diagonal ignored).
FitnessRecord fitness_from_matrix(std::span<const double> source_mi, std::span<const double> shared_mi, const FitnessConfig& cfg);

/// Uncached evaluation. Returns nullopt (Invalid) when any tree produces a
/// non-finite or constant output.
std::optional<FitnessRecord> evaluate_individual(const Individual& ind, std::span<const double> source_original,
    std::span<const double> source_conditioned, double psi, const FitnessConfig& cfg);

/// Total order used for selection and elitism. Invalid is below every valid
/// record; equal fitness prefers fewer nodes. Returns `greater` when a is better.
std::weak_ordering compare_fitness(const std::optional<FitnessRecord>& a, const std::optional<FitnessRecord>& b,
    std::size_t nodes_a = 0, std::size_t nodes_b = 0);

/// Fitness value with Invalid mapped to -infinity.
double fitness_value(const std::optional<FitnessRecord>& r) noexcept;

/// Post-processed redundant feature produced by `tree` on the conditioned
/// source, or nullopt when invalid or constant.
std::optional<FeatureVector> redundant_feature(const GpTree& tree, std::span<const double> source_conditioned, int rounding_places);

/// Memoizing evaluator for one source feature within one run. Results are
/// bit-identical to evaluate_individual; the cache only skips recomputation
/// of per-tree outputs and pairwise estimates. Safe to call concurrently.
class FitnessEvaluator {
public:
    FitnessEvaluator(FeatureVector source_original, FeatureVector source_conditioned, double psi, FitnessConfig cfg);

    std::optional<FitnessRecord> evaluate(const Individual& ind);

    /// Drops cache entries that were not used since the previous call.
    void prune();

    std::size_t cached_trees() const;
    double psi() const noexcept { return psi_; }

private:
    struct TreeOutcome {
        bool valid = false;
        FeatureVector values;
        std::uint64_t value_hash = 0;
        double source_mi = 0.0;
    };
    struct TreeEntry {
        std::shared_ptr<const TreeOutcome> outcome;
        bool used = true;
    };
    struct PairEntry {
        double mi = 0.0;
        bool used = true;
    };
    struct PairKeyHash {
        std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& k) const noexcept
        {
            return static_cast<std::size_t>(mix64(k.first, k.second));
        }
    };

    std::shared_ptr<const TreeOutcome> outcome(const GpTree& tree);
    double pair_mi(const TreeOutcome& a, const TreeOutcome& b);

    FeatureVector original_;
    FeatureVector conditioned_;
    double psi_;
    FitnessConfig cfg_;

    mutable std::mutex mutex_;
    std::unordered_map<std::uint64_t, TreeEntry> trees_;
    std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, PairEntry, PairKeyHash> pairs_;
};

} // namespace rfgen
