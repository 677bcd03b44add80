#include "rfgen/fitness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rfgen/dataset.hpp"

namespace rfgen {

void FitnessConfig::validate() const
{
    if (!(theta >= 0.0 && theta <= 1.0)) {
        throw ConfigError("fitness: theta must lie in [0, 1]");
    }
    if (n_trees < 2 || n_trees > 26) {
        throw ConfigError("fitness: n_trees must lie in [2, 26]");
    }
    if (rounding_places < 1 || rounding_places > 15) {
        throw ConfigError("fitness: rounding_places must lie in [1, 15]");
    }
    estimator.validate();
}

FitnessRecord fitness_from_stats(double min_source_mi, double max_shared_mi, double mean_source_mi, const FitnessConfig& cfg)
{
    FitnessRecord r;
    r.min_source_mi = min_source_mi;
    r.max_shared_mi = max_shared_mi;
    r.mean_source_mi = mean_source_mi;
    r.feasible = min_source_mi >= cfg.theta;
    if (r.feasible) {
        r.fitness = min_source_mi - max_shared_mi;
    } else if (mean_source_mi <= cfg.mean_guard) {
        r.fitness = cfg.penalty_floor;
    } else {
        r.fitness = -1.0 / mean_source_mi;
    }
    return r;
}

namespace {

// Order-independent sum: sorting first makes the result invariant to the
// order of trees inside an individual.
double sorted_sum(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    double s = 0.0;
    for (double d : v) {
        s += d;
    }
    return s;
}

bool canonical_first(std::uint64_t ha, const FeatureVector& a, std::uint64_t hb, const FeatureVector& b)
{
    if (ha != hb) {
        return ha < hb;
    }
    return a <= b;
}

double canonical_pair_mi(const FeatureVector& a, std::uint64_t ha, const FeatureVector& b, std::uint64_t hb,
    double psi, const EstimatorConfig& est)
{
    if (canonical_first(ha, a, hb, b)) {
        return estimate_mi(a, b, est) / psi;
    }
    return estimate_mi(b, a, est) / psi;
}

} // namespace

FitnessRecord fitness_from_matrix(std::span<const double> source_mi, std::span<const double> shared_mi, const FitnessConfig& cfg)
{
    const std::size_t n = source_mi.size();
    if (n < 2 || shared_mi.size() != n * n) {
        throw DomainError("fitness_from_matrix: need n >= 2 trees and an n x n matrix");
    }
    const double min_source = *std::min_element(source_mi.begin(), source_mi.end());
    const double mean_source = sorted_sum({source_mi.begin(), source_mi.end()}) / static_cast<double>(n);
    double max_shared = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
        std::vector<double> others;
        others.reserve(n - 1);
        for (std::size_t y = 0; y < n; ++y) {
            if (y != t) {
                others.push_back(shared_mi[t * n + y]);
            }
        }
        max_shared = std::max(max_shared, sorted_sum(std::move(others)) / static_cast<double>(n - 1));
    }
    return fitness_from_stats(min_source, max_shared, mean_source, cfg);
}

std::optional<FeatureVector> redundant_feature(const GpTree& tree, std::span<const double> source_conditioned, int rounding_places)
{
    auto raw = evaluate_tree(tree, source_conditioned);
    if (!raw) {
        return std::nullopt;
    }
    return try_postprocess_rf(*raw, rounding_places);
}

std::optional<FitnessRecord> evaluate_individual(const Individual& ind, std::span<const double> source_original,
    std::span<const double> source_conditioned, double psi, const FitnessConfig& cfg)
{
    if (!(psi > 0.0)) {
        throw DomainError("evaluate_individual: psi must be > 0");
    }
    if (source_original.size() != source_conditioned.size()) {
        throw DataError("evaluate_individual: original and conditioned source lengths differ");
    }
    const std::size_t n = ind.trees.size();
    std::vector<FeatureVector> rfs;
    std::vector<std::uint64_t> hashes;
    rfs.reserve(n);
    for (const auto& t : ind.trees) {
        auto rf = redundant_feature(t, source_conditioned, cfg.rounding_places);
        if (!rf) {
            return std::nullopt;
        }
        hashes.push_back(hash_values(*rf));
        rfs.push_back(std::move(*rf));
    }
    std::vector<double> source_mi(n);
    for (std::size_t t = 0; t < n; ++t) {
        source_mi[t] = estimate_mi(source_original, rfs[t], cfg.estimator) / psi;
    }
    std::vector<double> shared(n * n, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            const double mi = canonical_pair_mi(rfs[a], hashes[a], rfs[b], hashes[b], psi, cfg.estimator);
            shared[a * n + b] = mi;
            shared[b * n + a] = mi;
        }
    }
    return fitness_from_matrix(source_mi, shared, cfg);
}

double fitness_value(const std::optional<FitnessRecord>& r) noexcept
{
    return r ? r->fitness : -std::numeric_limits<double>::infinity();
}

std::weak_ordering compare_fitness(const std::optional<FitnessRecord>& a, const std::optional<FitnessRecord>& b,
    std::size_t nodes_a, std::size_t nodes_b)
{
    if (!a || !b) {
        if (a.has_value() == b.has_value()) {
            return nodes_b <=> nodes_a;
        }
        return a ? std::weak_ordering::greater : std::weak_ordering::less;
    }
    if (a->fitness > b->fitness) {
        return std::weak_ordering::greater;
    }
    if (a->fitness < b->fitness) {
        return std::weak_ordering::less;
    }
    // fewer nodes is better
    return nodes_b <=> nodes_a;
}

FitnessEvaluator::FitnessEvaluator(FeatureVector source_original, FeatureVector source_conditioned, double psi, FitnessConfig cfg)
    : original_(std::move(source_original))
    , conditioned_(std::move(source_conditioned))
    , psi_(psi)
    , cfg_(std::move(cfg))
{
    if (!(psi_ > 0.0)) {
        throw DomainError("FitnessEvaluator: psi must be > 0");
    }
    if (original_.size() != conditioned_.size()) {
        throw DataError("FitnessEvaluator: original and conditioned source lengths differ");
    }
}

std::shared_ptr<const FitnessEvaluator::TreeOutcome> FitnessEvaluator::outcome(const GpTree& tree)
{
    const std::uint64_t key = tree.structural_hash();
    {
        std::lock_guard lock(mutex_);
        if (auto it = trees_.find(key); it != trees_.end()) {
            it->second.used = true;
            return it->second.outcome;
        }
    }
    auto o = std::make_shared<TreeOutcome>();
    if (auto rf = redundant_feature(tree, conditioned_, cfg_.rounding_places)) {
        o->valid = true;
        o->value_hash = hash_values(*rf);
        o->source_mi = estimate_mi(original_, *rf, cfg_.estimator) / psi_;
        o->values = std::move(*rf);
    }
    std::lock_guard lock(mutex_);
    auto [it, inserted] = trees_.try_emplace(key, TreeEntry{o, true});
    return it->second.outcome;
}

double FitnessEvaluator::pair_mi(const TreeOutcome& a, const TreeOutcome& b)
{
    const bool a_first = canonical_first(a.value_hash, a.values, b.value_hash, b.values);
    const auto key = a_first ? std::make_pair(a.value_hash, b.value_hash) : std::make_pair(b.value_hash, a.value_hash);
    {
        std::lock_guard lock(mutex_);
        if (auto it = pairs_.find(key); it != pairs_.end()) {
            it->second.used = true;
            return it->second.mi;
        }
    }
    const double mi = canonical_pair_mi(a.values, a.value_hash, b.values, b.value_hash, psi_, cfg_.estimator);
    std::lock_guard lock(mutex_);
    pairs_.try_emplace(key, PairEntry{mi, true});
    return mi;
}

std::optional<FitnessRecord> FitnessEvaluator::evaluate(const Individual& ind)
{
    const std::size_t n = ind.trees.size();
    std::vector<std::shared_ptr<const TreeOutcome>> outs;
    outs.reserve(n);
    for (const auto& t : ind.trees) {
        auto o = outcome(t);
        if (!o->valid) {
            return std::nullopt;
        }
        outs.push_back(std::move(o));
    }
    std::vector<double> source_mi(n);
    for (std::size_t t = 0; t < n; ++t) {
        source_mi[t] = outs[t]->source_mi;
    }
    std::vector<double> shared(n * n, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            const double mi = pair_mi(*outs[a], *outs[b]);
            shared[a * n + b] = mi;
            shared[b * n + a] = mi;
        }
    }
    return fitness_from_matrix(source_mi, shared, cfg_);
}

void FitnessEvaluator::prune()
{
    std::lock_guard lock(mutex_);
    std::erase_if(trees_, [](const auto& kv) { return !kv.second.used; });
    std::erase_if(pairs_, [](const auto& kv) { return !kv.second.used; });
    for (auto& kv : trees_) kv.second.used = false;
    for (auto& kv : pairs_) kv.second.used = false;
}

std::size_t FitnessEvaluator::cached_trees() const
{
    std::lock_guard lock(mutex_);
    return trees_.size();
}

} // namespace rfgen
