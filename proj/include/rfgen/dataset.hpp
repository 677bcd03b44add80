#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rfgen/common.hpp"

namespace rfgen {

/// Named continuous columns over a shared set of instances, with optional
/// class or cluster labels.
struct Dataset {
    std::vector<std::string> feature_names;
    std::vector<FeatureVector> columns;
    std::optional<std::vector<std::string>> labels;
    std::string label_name = "class";

    std::size_t num_features() const noexcept { return columns.size(); }
    std::size_t num_instances() const noexcept
    {
        if (!columns.empty()) {
            return columns.front().size();
        }
        return labels ? labels->size() : 0;
    }
    bool has_labels() const noexcept { return labels.has_value(); }

    /// Throws DataError for an unknown name.
    std::size_t index_of(const std::string& name) const;
    const FeatureVector& column(const std::string& name) const { return columns[index_of(name)]; }

    /// Checks equal column lengths, unique names, finite values.
    void validate() const;

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct LoadOptions {
    /// Label column name; empty selects "class" when such a column exists.
    std::string label_column;
    bool no_labels = false;
};

enum class FileFormat { Csv, Arff };

Dataset load_csv(const std::filesystem::path& path, const LoadOptions& opts = {});
Dataset parse_csv(std::string_view text, const LoadOptions& opts = {});
Dataset load_arff(const std::filesystem::path& path);
Dataset parse_arff(std::string_view text);
/// Format chosen by extension (.arff, otherwise CSV).
Dataset load(const std::filesystem::path& path, const LoadOptions& opts = {});

/// CSV with header; label column last. Numbers use the shortest text that
/// round-trips.
std::string to_csv(const Dataset& data);
void save_csv(const Dataset& data, const std::filesystem::path& path);

struct ConditioningConfig {
    double epsilon = 1e-3;
    std::uint64_t delta_seed = 1;
    int rounding_places = 5;

    void validate() const;
};

/// Min-max scale to [0, 1], add a jitter delta in [0.001 eps, eps] keyed on
/// (delta_seed, instance index), then add eps. Duplicate inputs become
/// distinct; the result is fixed for a given seed and row order.
/// Throws DataError for a constant feature.
FeatureVector condition_source(std::span<const double> x, const ConditioningConfig& cfg);

/// Min-max scale to [0, 1] and round half-up to cfg.rounding_places decimals.
/// Throws DataError when y is constant or not finite.
FeatureVector postprocess_rf(std::span<const double> y, const ConditioningConfig& cfg);
/// Non-throwing form used on the fitness hot path.
std::optional<FeatureVector> try_postprocess_rf(std::span<const double> y, int rounding_places);

/// y_i = alpha * x_i + beta. Throws DomainError for alpha == 0.
FeatureVector linear_rf(std::span<const double> x, double alpha, double beta);

/// Label strings mapped to dense ids in sorted label order.
struct EncodedLabels {
    std::vector<int> ids;
    std::vector<std::string> names;

    std::size_t num_classes() const noexcept { return names.size(); }
};

EncodedLabels encode_labels(const std::vector<std::string>& labels);

} // namespace rfgen
