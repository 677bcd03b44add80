#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rfgen/dataset.hpp"

namespace rfgen {

/// Train / validation / test fractions and the shuffle seed.
struct SplitSpec {
    double train = 0.7;
    double validation = 0.0;
    double test = 0.3;
    std::uint64_t shuffle_seed = 0;

    void validate() const;
};

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
    std::vector<std::size_t> test;
};

/// Seeded split, stratified by label when labels are given. The three index
/// sets partition [0, n) exactly.
Split make_split(std::size_t n, const SplitSpec& spec, std::span<const int> labels = {});

/// Row-major instances x features.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
    std::span<const double> row(std::size_t r) const { return {values.data() + r * cols, cols}; }
};

Matrix gather(const std::vector<FeatureVector>& columns, std::span<const std::size_t> rows, std::span<const std::size_t> cols);
std::vector<int> gather_labels(std::span<const int> labels, std::span<const std::size_t> rows);

double accuracy(std::span<const int> predicted, std::span<const int> truth);

// ---- information gain -------------------------------------------------------

double entropy_bits(std::span<const int> counts);

/// Fayyad-Irani MDL cut points (ascending) for a continuous feature.
std::vector<double> mdl_cut_points(std::span<const double> feature, std::span<const int> labels);

/// IG in bits of the MDL-discretized feature with respect to the labels;
/// zero when no cut is accepted.
double info_gain(std::span<const double> feature, std::span<const int> labels);

struct RankingEntry {
    std::string feature;
    double info_gain = 0.0;
};
using RankingReport = std::vector<RankingEntry>;

/// IG per feature sorted descending, ties by name. Throws DataError without labels.
RankingReport rank_features(const Dataset& data);

// ---- classifiers ------------------------------------------------------------

struct KnnOptions {
    int k = 3;
    /// Min-max scale each column by the training range before measuring distance.
    bool normalize = true;
};

std::vector<int> knn_classify(const Matrix& train, std::span<const int> train_labels, const Matrix& test, const KnnOptions& opts = {});

/// Gaussian naive Bayes in log space; variance_floor is added to every
/// class-conditional variance. Throws DataError when a class in
/// [0, num_classes) has no training instance.
std::vector<int> nb_classify(const Matrix& train, std::span<const int> train_labels, const Matrix& test, std::size_t num_classes,
    double variance_floor = 1e-9);

enum class Wrapper { Knn, NaiveBayes };

struct ClassifierSpec {
    Wrapper kind = Wrapper::Knn;
    KnnOptions knn;

    std::string describe() const;
};

struct ClassificationReport {
    double knn_accuracy = 0.0;
    double nb_accuracy = 0.0;
};

ClassificationReport classify_report(const Dataset& data, const SplitSpec& split);

// ---- feature selection --------------------------------------------------------

struct SelectionReport {
    std::vector<std::string> selected;
    /// Validation accuracy after every accepted add or removal.
    std::vector<double> validation_trace;
    double validation_accuracy = 0.0;
    double test_accuracy = 0.0;
    std::string wrapper;
};

/// Sequential floating forward search with a wrapper trained on the train
/// partition and scored on the validation partition.
SelectionReport sffs(const Dataset& data, const SplitSpec& split, const ClassifierSpec& wrapper = {});

/// Validation accuracy of the wrapper on a given feature subset (column indices).
double subset_accuracy(const Dataset& data, const Split& split, std::span<const std::size_t> features, const ClassifierSpec& wrapper,
    bool on_test = false);

// ---- clustering ----------------------------------------------------------------

struct KMeansResult {
    std::vector<int> assignment;
    double inertia = 0.0;
    std::vector<double> inertia_trace;
    int iterations = 0;
};

/// One k-means++ seeded Lloyd run (centroid shift < 1e-9 or 300 iterations).
KMeansResult kmeans(const Matrix& data, int k, Rng& rng);

double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

struct ClusterReport {
    std::vector<int> assignment;
    double ari = 0.0;
    double inertia = 0.0;
    std::vector<double> restart_inertia;
    std::vector<double> restart_ari;
};

/// Best-inertia clustering over `restarts` runs, scored against the labels.
ClusterReport kmeans_ari(const Dataset& data, int k, int restarts, std::uint64_t seed);

} // namespace rfgen
