#include "rfgen/augment.hpp"

#include "rfgen/mi.hpp"

namespace rfgen {

std::string rf_name(const std::string& source, std::size_t tree_index)
{
    if (tree_index >= 26) {
        throw DomainError("rf_name: at most 26 redundant features per source");
    }
    return source + static_cast<char>('a' + tree_index);
}

const RfProvenance& AugmentedDataset::lookup(const std::string& name) const
{
    for (const auto& p : provenance) {
        if (p.name == name) {
            return p;
        }
    }
    throw DataError("no provenance for '" + name + "'");
}

AugmentedDataset augment(const Dataset& data, const std::vector<RunResult>& results, const ConditioningConfig& conditioning,
    const EstimatorConfig& estimator)
{
    data.validate();
    if (results.size() != data.num_features()) {
        throw DataError("augment: expected one run result per source feature");
    }
    AugmentedDataset out;
    out.data = data;
    out.conditioning = conditioning;
    out.n_trees = results.empty() ? 0 : static_cast<int>(results.front().best.trees.size());

    for (std::size_t f = 0; f < data.num_features(); ++f) {
        const auto& source = data.feature_names[f];
        const auto& best = results[f].best;
        if (static_cast<int>(best.trees.size()) != out.n_trees) {
            throw DataError("augment: runs disagree on the number of trees");
        }
        const FeatureVector conditioned = condition_source(data.columns[f], conditioning);
        const double psi = baseline_psi(data.columns[f], estimator);
        for (std::size_t t = 0; t < best.trees.size(); ++t) {
            auto rf = redundant_feature(best.trees[t], conditioned, conditioning.rounding_places);
            if (!rf) {
                throw DataError("augment: best individual for '" + source + "' produces an invalid feature");
            }
            RfProvenance p;
            p.name = rf_name(source, t);
            p.source = source;
            p.tree_index = t;
            p.sexpr = to_sexpr(best.trees[t]);
            p.fitness = best.fitness;
            p.source_mi = estimate_mi(data.columns[f], *rf, estimator) / psi;
            out.data.feature_names.push_back(p.name);
            out.data.columns.push_back(std::move(*rf));
            out.provenance.push_back(std::move(p));
        }
    }
    out.data.validate();
    return out;
}

FeatureVector regenerate_rf(const Dataset& original, const RfProvenance& prov, const ConditioningConfig& conditioning)
{
    const FeatureVector conditioned = condition_source(original.column(prov.source), conditioning);
    auto rf = redundant_feature(parse_sexpr(prov.sexpr), conditioned, conditioning.rounding_places);
    if (!rf) {
        throw DataError("regenerate_rf: tree for '" + prov.name + "' produces an invalid feature");
    }
    return std::move(*rf);
}

} // namespace rfgen
