#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rfgen/dataset.hpp"
#include "rfgen/evolution.hpp"

namespace rfgen {

/// Where one redundant-feature column came from.
struct RfProvenance {
    std::string name;
    std::string source;
    std::size_t tree_index = 0;
    std::string sexpr;
    /// Fitness of the individual the tree belongs to.
    std::optional<FitnessRecord> fitness;
    /// Normalized MI between the original source column and this column.
    double source_mi = 0.0;
};

/// Original columns followed by n redundant features per source, named
/// `<source>a`, `<source>b`, ...
struct AugmentedDataset {
    Dataset data;
    std::vector<RfProvenance> provenance;
    ConditioningConfig conditioning;
    int n_trees = 0;

    /// Throws DataError for a name that is not a redundant feature.
    const RfProvenance& lookup(const std::string& rf_name) const;
};

std::string rf_name(const std::string& source, std::size_t tree_index);

/// `results[f]` must be the run for `data.columns[f]`. Throws DataError when a
/// result is missing or its best individual does not produce valid features.
AugmentedDataset augment(const Dataset& data, const std::vector<RunResult>& results, const ConditioningConfig& conditioning,
    const EstimatorConfig& estimator = {});

/// Re-evaluates the provenance tree on the conditioned source column of
/// `original` and post-processes it.
FeatureVector regenerate_rf(const Dataset& original, const RfProvenance& prov, const ConditioningConfig& conditioning);

} // namespace rfgen
