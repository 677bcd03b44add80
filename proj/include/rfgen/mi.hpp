#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rfgen/common.hpp"

namespace rfgen {

/// Settings for the Kraskov-Stoegbauer-Grassberger (algorithm 1) estimator.
///
/// Each marginal is standardized to zero mean and unit variance and then
/// jittered with uniform noise in [-tie_noise_amplitude, tie_noise_amplitude].
/// The noise for argument slot s at instance i depends only on
/// (noise_seed, s, i), so repeated calls are bit-identical.
struct EstimatorConfig {
    int k_neighbors = 4;
    double tie_noise_amplitude = 1e-8;
    std::uint64_t noise_seed = 0;

    void validate() const;
};

struct MiEstimate {
    double raw = 0.0;          // nats
    double baseline_psi = 0.0; // nats
    double normalized = 0.0;   // raw / baseline_psi
};

enum class NeighborSearch {
    BruteForce,
    SortedMarginal,
};

/// Per-instance statistics of one KSG pass; exposed so the two neighbor
/// searches can be checked against each other.
struct KsgCounts {
    std::vector<double> kth_distance;
    std::vector<int> nx;
    std::vector<int> ny;
};

KsgCounts ksg_counts(std::span<const double> x, std::span<const double> y, int k,
    NeighborSearch search = NeighborSearch::SortedMarginal);

/// KSG estimate on already-prepared (jittered) samples. Exactly symmetric in x and y.
double ksg_mi(std::span<const double> x, std::span<const double> y, int k,
    NeighborSearch search = NeighborSearch::SortedMarginal);

/// Standardized + jittered copy of v as used for argument slot `slot`.
FeatureVector prepare_marginal(std::span<const double> v, const EstimatorConfig& cfg, int slot);

/// MI in nats between x and y. May be slightly negative; never clamped.
double estimate_mi(std::span<const double> x, std::span<const double> y, const EstimatorConfig& cfg);

/// estimate_mi(x, x); throws DataError when the result is not positive.
double baseline_psi(std::span<const double> x, const EstimatorConfig& cfg);

MiEstimate normalized_mi(std::span<const double> x, std::span<const double> y, double psi, const EstimatorConfig& cfg);

} // namespace rfgen
