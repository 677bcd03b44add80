#include "rfgen/report.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <fmt/format.h>

namespace rfgen {

std::string format_number(double v)
{
    return fmt::format("{}", v);
}

namespace {

json number_or_null(double v)
{
    if (std::isfinite(v)) {
        return v;
    }
    return nullptr;
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& where)
{
    if (!j.is_object()) {
        throw ConfigError("config: '" + where + "' must be an object");
    }
    std::set<std::string> k(known.begin(), known.end());
    for (const auto& [key, value] : j.items()) {
        if (!k.count(key)) {
            throw ConfigError("config: unknown key '" + key + "' in " + where);
        }
    }
}

template <typename T>
void take(const json& j, const char* key, T& out)
{
    if (j.contains(key)) {
        try {
            out = j.at(key).get<T>();
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(fmt::format("config: bad value for '{}': {}", key, e.what()));
        }
    }
}

} // namespace

json to_json(const EstimatorConfig& c)
{
    return json{{"k_neighbors", c.k_neighbors}, {"tie_noise_amplitude", c.tie_noise_amplitude}, {"noise_seed", c.noise_seed}};
}

json to_json(const FitnessConfig& c)
{
    return json{{"theta", c.theta}, {"n_trees", c.n_trees}, {"mean_guard", c.mean_guard}, {"penalty_floor", c.penalty_floor},
        {"estimator", to_json(c.estimator)}};
}

json to_json(const ConditioningConfig& c)
{
    return json{{"epsilon", c.epsilon}, {"delta_seed", c.delta_seed}, {"rounding_places", c.rounding_places}};
}

json to_json(const EvolutionConfig& c)
{
    return json{
        {"population_size", c.population_size},
        {"generations", c.generations},
        {"crossover_rate", c.crossover_rate},
        {"mutation_rate", c.mutation_rate},
        {"elitism_count", c.elitism_count},
        {"max_depth", c.max_depth},
        {"tournament_size", c.tournament_size},
        {"init_min_depth", c.init_min_depth},
        {"init_max_depth", c.init_max_depth},
        {"mutation_depth", c.mutation_depth},
        {"mi_subsample", c.mi_subsample},
        {"fitness", to_json(c.fitness)},
        {"conditioning", to_json(c.conditioning)},
    };
}

json to_json(const SplitSpec& c)
{
    return json{{"train", c.train}, {"validation", c.validation}, {"test", c.test}, {"shuffle_seed", c.shuffle_seed}};
}

json to_json(const RunConfig& c)
{
    return json{
        {"input", c.input},
        {"out", c.out},
        {"label_col", c.label_col},
        {"no_labels", c.no_labels},
        {"jobs", c.jobs},
        {"seed", c.seed},
        {"evolution", to_json(c.evolution)},
        {"split", to_json(c.split)},
        {"wrapper", c.wrapper.kind == Wrapper::Knn ? "knn" : "nb"},
        {"knn_k", c.wrapper.knn.k},
        {"clusters", c.clusters},
        {"restarts", c.restarts},
        {"plot_jitter", c.plot_jitter},
    };
}

json to_json(const std::optional<FitnessRecord>& r)
{
    if (!r) {
        return json{{"valid", false}};
    }
    return json{
        {"valid", true},
        {"min_source_mi", r->min_source_mi},
        {"max_shared_mi", r->max_shared_mi},
        {"mean_source_mi", r->mean_source_mi},
        {"feasible", r->feasible},
        {"fitness", r->fitness},
    };
}

std::optional<FitnessRecord> fitness_from_json(const json& j)
{
    if (!j.value("valid", false)) {
        return std::nullopt;
    }
    FitnessRecord r;
    r.min_source_mi = j.at("min_source_mi").get<double>();
    r.max_shared_mi = j.at("max_shared_mi").get<double>();
    r.mean_source_mi = j.at("mean_source_mi").get<double>();
    r.feasible = j.at("feasible").get<bool>();
    r.fitness = j.at("fitness").get<double>();
    return r;
}

json to_json(const RunResult& r)
{
    json trees = json::array();
    for (const auto& t : r.best.trees) {
        trees.push_back(to_sexpr(t));
    }
    json history = json::array();
    for (double h : r.fitness_history) {
        history.push_back(number_or_null(h));
    }
    return json{
        {"seed", r.config.seed},
        {"psi", r.psi},
        {"trees", trees},
        {"fitness", to_json(r.best.fitness)},
        {"fitness_history", history},
    };
}

json to_json(const RankingReport& r)
{
    json rows = json::array();
    for (const auto& e : r) {
        rows.push_back(json{{"feature", e.feature}, {"info_gain", e.info_gain}});
    }
    return rows;
}

json to_json(const SelectionReport& r)
{
    return json{
        {"selected", r.selected},
        {"validation_trace", r.validation_trace},
        {"validation_accuracy", r.validation_accuracy},
        {"test_accuracy", r.test_accuracy},
        {"wrapper", r.wrapper},
    };
}

RunConfig merge_config(RunConfig c, const json& j)
{
    reject_unknown(j,
        {"input", "out", "label_col", "no_labels", "json", "jobs", "seed", "evolution", "split", "wrapper", "knn_k", "clusters", "restarts",
            "plot_jitter"},
        "top level");
    take(j, "input", c.input);
    take(j, "out", c.out);
    take(j, "label_col", c.label_col);
    take(j, "no_labels", c.no_labels);
    take(j, "json", c.json_output);
    take(j, "jobs", c.jobs);
    take(j, "seed", c.seed);
    take(j, "knn_k", c.wrapper.knn.k);
    take(j, "clusters", c.clusters);
    take(j, "restarts", c.restarts);
    take(j, "plot_jitter", c.plot_jitter);
    if (j.contains("wrapper")) {
        const auto w = j.at("wrapper").get<std::string>();
        if (w == "knn") {
            c.wrapper.kind = Wrapper::Knn;
        } else if (w == "nb") {
            c.wrapper.kind = Wrapper::NaiveBayes;
        } else {
            throw ConfigError("config: wrapper must be 'knn' or 'nb'");
        }
    }
    if (j.contains("split")) {
        const auto& s = j.at("split");
        reject_unknown(s, {"train", "validation", "test", "shuffle_seed"}, "split");
        take(s, "train", c.split.train);
        take(s, "validation", c.split.validation);
        take(s, "test", c.split.test);
        take(s, "shuffle_seed", c.split.shuffle_seed);
    }
    if (j.contains("evolution")) {
        const auto& e = j.at("evolution");
        reject_unknown(e,
            {"population_size", "generations", "crossover_rate", "mutation_rate", "elitism_count", "max_depth", "tournament_size",
                "init_min_depth", "init_max_depth", "mutation_depth", "mi_subsample", "fitness", "conditioning"},
            "evolution");
        auto& ev = c.evolution;
        take(e, "population_size", ev.population_size);
        take(e, "generations", ev.generations);
        take(e, "crossover_rate", ev.crossover_rate);
        take(e, "mutation_rate", ev.mutation_rate);
        take(e, "elitism_count", ev.elitism_count);
        take(e, "max_depth", ev.max_depth);
        take(e, "tournament_size", ev.tournament_size);
        take(e, "init_min_depth", ev.init_min_depth);
        take(e, "init_max_depth", ev.init_max_depth);
        take(e, "mutation_depth", ev.mutation_depth);
        take(e, "mi_subsample", ev.mi_subsample);
        if (e.contains("fitness")) {
            const auto& f = e.at("fitness");
            reject_unknown(f, {"theta", "n_trees", "mean_guard", "penalty_floor", "estimator"}, "evolution.fitness");
            take(f, "theta", ev.fitness.theta);
            take(f, "n_trees", ev.fitness.n_trees);
            take(f, "mean_guard", ev.fitness.mean_guard);
            take(f, "penalty_floor", ev.fitness.penalty_floor);
            if (f.contains("estimator")) {
                const auto& s = f.at("estimator");
                reject_unknown(s, {"k_neighbors", "tie_noise_amplitude", "noise_seed"}, "evolution.fitness.estimator");
                take(s, "k_neighbors", ev.fitness.estimator.k_neighbors);
                take(s, "tie_noise_amplitude", ev.fitness.estimator.tie_noise_amplitude);
                take(s, "noise_seed", ev.fitness.estimator.noise_seed);
            }
        }
        if (e.contains("conditioning")) {
            const auto& s = e.at("conditioning");
            reject_unknown(s, {"epsilon", "delta_seed", "rounding_places"}, "evolution.conditioning");
            take(s, "epsilon", ev.conditioning.epsilon);
            take(s, "delta_seed", ev.conditioning.delta_seed);
            take(s, "rounding_places", ev.conditioning.rounding_places);
        }
    }
    c.evolution.fitness.rounding_places = c.evolution.conditioning.rounding_places;
    return c;
}

RunConfig load_config_file(const std::filesystem::path& path, RunConfig base)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path.string() + "'");
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    return merge_config(std::move(base), j);
}

json provenance_document(const AugmentedDataset& aug, const std::vector<RunResult>& results, const std::vector<std::string>& sources,
    const std::vector<std::uint64_t>& seeds, const RunConfig& cfg)
{
    json runs = json::array();
    for (std::size_t f = 0; f < results.size(); ++f) {
        json r = to_json(results[f]);
        r["source"] = sources[f];
        r["seed"] = seeds[f];
        runs.push_back(std::move(r));
    }
    json features = json::array();
    for (const auto& p : aug.provenance) {
        features.push_back(json{
            {"name", p.name},
            {"source", p.source},
            {"tree_index", p.tree_index},
            {"sexpr", p.sexpr},
            {"source_mi", p.source_mi},
            {"fitness", to_json(p.fitness)},
        });
    }
    return json{
        {"schema_version", kSchemaVersion},
        {"kind", "provenance"},
        {"config", to_json(cfg)},
        {"n_trees", aug.n_trees},
        {"conditioning", to_json(aug.conditioning)},
        {"estimator", to_json(cfg.evolution.fitness.estimator)},
        {"runs", runs},
        {"features", features},
    };
}

ProvenanceFile parse_provenance(const json& doc)
{
    try {
        if (doc.at("schema_version").get<int>() != kSchemaVersion) {
            throw DataError("provenance: unsupported schema_version");
        }
        ProvenanceFile p;
        p.n_trees = doc.at("n_trees").get<int>();
        const auto& c = doc.at("conditioning");
        p.conditioning.epsilon = c.at("epsilon").get<double>();
        p.conditioning.delta_seed = c.at("delta_seed").get<std::uint64_t>();
        p.conditioning.rounding_places = c.at("rounding_places").get<int>();
        const auto& e = doc.at("estimator");
        p.estimator.k_neighbors = e.at("k_neighbors").get<int>();
        p.estimator.tie_noise_amplitude = e.at("tie_noise_amplitude").get<double>();
        p.estimator.noise_seed = e.at("noise_seed").get<std::uint64_t>();
        p.config = doc.at("config");
        for (const auto& f : doc.at("features")) {
            RfProvenance r;
            r.name = f.at("name").get<std::string>();
            r.source = f.at("source").get<std::string>();
            r.tree_index = f.at("tree_index").get<std::size_t>();
            r.sexpr = f.at("sexpr").get<std::string>();
            r.source_mi = f.at("source_mi").get<double>();
            r.fitness = fitness_from_json(f.at("fitness"));
            p.features.push_back(std::move(r));
        }
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("provenance: malformed document: ") + e.what());
    }
}

ProvenanceFile read_provenance(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open provenance file '" + path.string() + "'");
    }
    try {
        return parse_provenance(json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(std::string("provenance: invalid JSON: ") + e.what());
    }
}

} // namespace rfgen
