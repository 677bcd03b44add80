#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "rfgen/augment.hpp"
#include "rfgen/eval.hpp"
#include "rfgen/evolution.hpp"

namespace rfgen {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Every knob of a pipeline invocation. Values come from defaults, then an
/// optional JSON file, then command-line flags (last wins).
struct RunConfig {
    std::string input;
    std::string out;
    std::string label_col;
    bool no_labels = false;
    bool json_output = false;
    int jobs = 1;
    std::uint64_t seed = 0;

    EvolutionConfig evolution;
    SplitSpec split;
    ClassifierSpec wrapper;
    int clusters = 2;
    int restarts = 30;
    bool plot_jitter = false;
};

json to_json(const EstimatorConfig& c);
json to_json(const FitnessConfig& c);
json to_json(const ConditioningConfig& c);
json to_json(const EvolutionConfig& c);
json to_json(const SplitSpec& c);
json to_json(const RunConfig& c);
json to_json(const std::optional<FitnessRecord>& r);
/// RunResult without timing, so that equal seeds give identical documents.
json to_json(const RunResult& r);
json to_json(const RankingReport& r);
json to_json(const SelectionReport& r);

/// Overlays the keys present in `j` onto `base`. Unknown keys are rejected
/// with ConfigError.
RunConfig merge_config(RunConfig base, const json& j);
RunConfig load_config_file(const std::filesystem::path& path, RunConfig base = {});

std::optional<FitnessRecord> fitness_from_json(const json& j);

/// Sidecar describing an augmented dataset.
struct ProvenanceFile {
    std::vector<RfProvenance> features;
    ConditioningConfig conditioning;
    EstimatorConfig estimator;
    int n_trees = 0;
    json config;
};

json provenance_document(const AugmentedDataset& aug, const std::vector<RunResult>& results, const std::vector<std::string>& sources,
    const std::vector<std::uint64_t>& seeds, const RunConfig& cfg);
ProvenanceFile read_provenance(const std::filesystem::path& path);
ProvenanceFile parse_provenance(const json& doc);

std::string format_number(double v);

} // namespace rfgen
