// rfgen: create redundant features with multi-tree GP and measure how much
// harder they make feature selection, classification and clustering.

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <numeric>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "rfgen/augment.hpp"
#include "rfgen/eval.hpp"
#include "rfgen/evolution.hpp"
#include "rfgen/report.hpp"

namespace fs = std::filesystem;
using namespace rfgen;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kRun = 3 };

// Raised when one or more per-feature runs fail; carries the failure list.
struct RunFailure : std::runtime_error {
    int code;
    RunFailure(const std::string& what, int c) : std::runtime_error(what), code(c) {}
};

struct Flags {
    std::string input;
    std::string out;
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string label_col;
    bool no_labels = false;
    bool json = false;
    std::optional<int> jobs;

    std::optional<int> trees;
    std::optional<double> theta;
    std::optional<int> pop;
    std::optional<int> gens;
    std::optional<int> k_neighbors;
    std::optional<double> epsilon;
    std::optional<std::string> split;
    std::optional<std::string> wrapper;
    std::optional<int> k;
    std::optional<int> restarts;
    std::optional<std::size_t> mi_subsample;
    bool jitter = false;
    bool dump_trees = false;
    std::string cols;
    std::string provenance;
};

SplitSpec parse_split(const std::string& text, std::uint64_t seed)
{
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            throw ConfigError("--split: '" + item + "' is not a number");
        }
    }
    if (parts.size() != 2 && parts.size() != 3) {
        throw ConfigError("--split expects TRAIN,TEST or TRAIN,VALIDATION,TEST percentages");
    }
    const double total = std::accumulate(parts.begin(), parts.end(), 0.0);
    if (!(total > 0.0)) {
        throw ConfigError("--split: percentages must sum to a positive value");
    }
    SplitSpec s;
    s.train = parts[0] / total;
    s.validation = parts.size() == 3 ? parts[1] / total : 0.0;
    s.test = parts.back() / total;
    s.shuffle_seed = seed;
    s.validate();
    return s;
}

// Defaults, then the JSON config file, then explicit flags.
RunConfig resolve(const Flags& f, const SplitSpec& default_split, bool& split_from_file)
{
    RunConfig c;
    c.split = default_split;
    split_from_file = false;
    if (!f.config.empty()) {
        std::ifstream in(f.config);
        if (!in) {
            throw ConfigError("cannot open config file '" + f.config + "'");
        }
        json j;
        try {
            j = json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(std::string("config: invalid JSON: ") + e.what());
        }
        split_from_file = j.is_object() && j.contains("split");
        c = merge_config(c, j);
    }
    if (!f.input.empty()) c.input = f.input;
    if (!f.out.empty()) c.out = f.out;
    if (f.seed) c.seed = *f.seed;
    if (!f.label_col.empty()) c.label_col = f.label_col;
    if (f.no_labels) c.no_labels = true;
    if (f.json) c.json_output = true;
    if (f.jobs) c.jobs = *f.jobs;

    auto& ev = c.evolution;
    if (f.trees) ev.fitness.n_trees = *f.trees;
    if (f.theta) ev.fitness.theta = *f.theta;
    if (f.pop) ev.population_size = *f.pop;
    if (f.gens) ev.generations = *f.gens;
    if (f.k_neighbors) ev.fitness.estimator.k_neighbors = *f.k_neighbors;
    if (f.epsilon) ev.conditioning.epsilon = *f.epsilon;
    if (f.mi_subsample) ev.mi_subsample = *f.mi_subsample;
    if (f.restarts) c.restarts = *f.restarts;
    if (f.jitter) c.plot_jitter = true;
    if (f.wrapper) {
        if (*f.wrapper == "knn") {
            c.wrapper.kind = Wrapper::Knn;
        } else if (*f.wrapper == "nb") {
            c.wrapper.kind = Wrapper::NaiveBayes;
        } else {
            throw ConfigError("--wrapper must be 'knn' or 'nb'");
        }
    }
    if (f.split) {
        c.split = parse_split(*f.split, c.seed);
    } else if (!split_from_file) {
        c.split.shuffle_seed = c.seed;
    }
    if (c.jobs < 1) {
        throw ConfigError("--jobs must be >= 1");
    }
    ev.fitness.rounding_places = ev.conditioning.rounding_places;
    ev.validate();
    c.split.validate();
    return c;
}

Dataset load_input(const RunConfig& c)
{
    if (c.input.empty()) {
        throw ConfigError("--input is required");
    }
    LoadOptions opts;
    opts.label_column = c.label_col;
    opts.no_labels = c.no_labels;
    Dataset d = load(c.input, opts);
    d.validate();
    return d;
}

json envelope(const std::string& command, const RunConfig& c)
{
    return json{{"schema_version", kSchemaVersion}, {"command", command}, {"config", to_json(c)}};
}

void print_json(const json& j)
{
    std::cout << j.dump(2) << "\n";
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

void write_file(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write '" + path.string() + "'");
    }
    out << text;
    if (!out) {
        throw DataError("write failed for '" + path.string() + "'");
    }
}

// ---- augment ------------------------------------------------------------------

int cmd_augment(const RunConfig& c, const Flags& f)
{
    if (c.out.empty()) {
        throw ConfigError("augment: --out is required");
    }
    const Dataset data = load_input(c);
    const std::size_t d = data.num_features();
    std::vector<RunResult> results(d);
    std::vector<std::uint64_t> seeds(d);
    std::vector<std::string> errors(d);
    std::vector<bool> data_errors(d, false);
    for (std::size_t i = 0; i < d; ++i) {
        seeds[i] = mix64(c.seed, i);
    }

    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < d; i = next++) {
            EvolutionConfig ev = c.evolution;
            ev.seed = seeds[i];
            ev.threads = 1;
            try {
                results[i] = run(data.columns[i], ev);
                if (!c.json_output) {
                    std::lock_guard lock(log_mutex);
                    std::cerr << fmt::format("{}: fitness {:.4f} ({:.1f}s)\n", data.feature_names[i],
                        fitness_value(results[i].best.fitness), results[i].elapsed_seconds);
                }
            } catch (const DataError& e) {
                errors[i] = e.what();
                data_errors[i] = true;
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    const auto workers = static_cast<std::size_t>(std::max(1, std::min<int>(c.jobs, static_cast<int>(d))));
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }

    std::string failed;
    bool all_data = true;
    for (std::size_t i = 0; i < d; ++i) {
        if (!errors[i].empty()) {
            failed += fmt::format("  {}: {}\n", data.feature_names[i], errors[i]);
            all_data = all_data && data_errors[i];
        }
    }
    if (!failed.empty()) {
        throw RunFailure("augment: runs failed for:\n" + failed, all_data ? kData : kRun);
    }

    const AugmentedDataset aug = augment(data, results, c.evolution.conditioning, c.evolution.fitness.estimator);
    const fs::path csv_path = c.out + ".csv";
    const fs::path prov_path = c.out + ".provenance.json";
    save_csv(aug.data, csv_path);
    write_file(prov_path, provenance_document(aug, results, data.feature_names, seeds, c).dump(2) + "\n");

    if (c.json_output) {
        json j = envelope("augment", c);
        j["outputs"] = {csv_path.string(), prov_path.string()};
        json runs = json::array();
        for (std::size_t i = 0; i < d; ++i) {
            json r = to_json(results[i]);
            r["source"] = data.feature_names[i];
            r["seed"] = seeds[i];
            runs.push_back(std::move(r));
        }
        j["runs"] = std::move(runs);
        print_json(j);
        return kOk;
    }
    std::cout << fmt::format("{:<8} {:>9} {:>9} {:>9} {:>9}\n", "source", "fitness", "min_src", "max_shr", "feasible");
    for (std::size_t i = 0; i < d; ++i) {
        const auto& r = results[i].best.fitness;
        std::cout << fmt::format("{:<8} {:>9.4f} {:>9.4f} {:>9.4f} {:>9}\n", data.feature_names[i], r->fitness, r->min_source_mi,
            r->max_shared_mi, r->feasible ? "yes" : "no");
        if (f.dump_trees) {
            for (std::size_t t = 0; t < results[i].best.trees.size(); ++t) {
                std::cout << fmt::format("  {} = {}\n", rf_name(data.feature_names[i], t), to_sexpr(results[i].best.trees[t]));
            }
        }
    }
    std::cout << fmt::format("wrote {} ({} features) and {}\n", csv_path.string(), aug.data.num_features(), prov_path.string());
    return kOk;
}

// ---- mi -----------------------------------------------------------------------------

int cmd_mi(const RunConfig& c, const Flags& f)
{
    const Dataset data = load_input(c);
    std::vector<std::string> names = f.cols.empty() ? data.feature_names : split_list(f.cols);
    std::vector<std::size_t> idx;
    for (const auto& n : names) {
        idx.push_back(data.index_of(n));
    }
    const auto& est = c.evolution.fitness.estimator;
    std::vector<double> psi;
    for (std::size_t i : idx) {
        psi.push_back(baseline_psi(data.columns[i], est));
    }
    // row i is normalized by the baseline of column i
    std::vector<std::vector<double>> m(idx.size(), std::vector<double>(idx.size()));
    for (std::size_t a = 0; a < idx.size(); ++a) {
        for (std::size_t b = 0; b < idx.size(); ++b) {
            m[a][b] = estimate_mi(data.columns[idx[a]], data.columns[idx[b]], est) / psi[a];
        }
    }
    if (c.json_output) {
        json j = envelope("mi", c);
        j["columns"] = names;
        j["psi"] = psi;
        j["normalized_mi"] = m;
        print_json(j);
        return kOk;
    }
    std::size_t w = 8;
    for (const auto& n : names) w = std::max(w, n.size() + 1);
    std::cout << fmt::format("{:<{}}{:>{}}", "", w, "psi", 9);
    for (const auto& n : names) std::cout << fmt::format("{:>{}}", n, w);
    std::cout << "\n";
    for (std::size_t a = 0; a < idx.size(); ++a) {
        std::cout << fmt::format("{:<{}}{:>9.4f}", names[a], w, psi[a]);
        for (std::size_t b = 0; b < idx.size(); ++b) std::cout << fmt::format("{:>{}.4f}", m[a][b], w);
        std::cout << "\n";
    }
    return kOk;
}

// ---- rank / select / classify / cluster ----------------------------------------------------

int cmd_rank(const RunConfig& c)
{
    const Dataset data = load_input(c);
    const auto r = rank_features(data);
    if (c.json_output) {
        json j = envelope("rank", c);
        j["ranking"] = to_json(r);
        print_json(j);
        return kOk;
    }
    std::cout << fmt::format("{:>4}  {:<12} {:>8}\n", "rank", "feature", "IG");
    for (std::size_t i = 0; i < r.size(); ++i) {
        std::cout << fmt::format("{:>4}  {:<12} {:>8.3f}\n", i + 1, r[i].feature, r[i].info_gain);
    }
    return kOk;
}

int cmd_select(const RunConfig& c)
{
    const Dataset data = load_input(c);
    const auto r = sffs(data, c.split, c.wrapper);
    if (c.json_output) {
        json j = envelope("select", c);
        j["selection"] = to_json(r);
        print_json(j);
        return kOk;
    }
    std::string sel;
    for (const auto& s : r.selected) sel += (sel.empty() ? "" : ",") + s;
    std::cout << fmt::format("wrapper              {}\n", r.wrapper);
    std::cout << fmt::format("selected             [{}]\n", sel);
    std::cout << fmt::format("validation accuracy  {:.4f}\n", r.validation_accuracy);
    std::cout << fmt::format("test accuracy        {:.4f}\n", r.test_accuracy);
    return kOk;
}

int cmd_classify(const RunConfig& c)
{
    const Dataset data = load_input(c);
    const auto r = classify_report(data, c.split);
    if (c.json_output) {
        json j = envelope("classify", c);
        j["accuracy"] = {{"knn", r.knn_accuracy}, {"naive_bayes", r.nb_accuracy}};
        print_json(j);
        return kOk;
    }
    std::cout << fmt::format("{:<12} {:>8}\n", "classifier", "test acc");
    std::cout << fmt::format("{:<12} {:>8.4f}\n", fmt::format("knn(k={})", c.wrapper.knn.k), r.knn_accuracy);
    std::cout << fmt::format("{:<12} {:>8.4f}\n", "naive bayes", r.nb_accuracy);
    return kOk;
}

int cmd_cluster(const RunConfig& c)
{
    const Dataset data = load_input(c);
    const auto r = kmeans_ari(data, c.clusters, c.restarts, c.seed);
    if (c.json_output) {
        json j = envelope("cluster", c);
        j["ari"] = r.ari;
        j["inertia"] = r.inertia;
        j["restart_inertia"] = r.restart_inertia;
        j["restart_ari"] = r.restart_ari;
        j["assignment"] = r.assignment;
        print_json(j);
        return kOk;
    }
    std::cout << fmt::format("ARI {:.4f} (best inertia {:.6g} over {} restarts, k = {})\n", r.ari, r.inertia, r.restart_inertia.size(),
        c.clusters);
    std::cout << fmt::format("{:>7} {:>14} {:>8}\n", "restart", "inertia", "ARI");
    for (std::size_t i = 0; i < r.restart_inertia.size(); ++i) {
        std::cout << fmt::format("{:>7} {:>14.6g} {:>8.4f}\n", i + 1, r.restart_inertia[i], r.restart_ari[i]);
    }
    return kOk;
}

// ---- plot ---------------------------------------------------------------------------

std::string xml_escape(const std::string& s)
{
    std::string out;
    for (char ch : s) {
        switch (ch) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += ch;
        }
    }
    return out;
}

std::string scatter_svg(const FeatureVector& x, const FeatureVector& y, const std::string& x_label, const std::string& y_label,
    bool jitter, std::uint64_t seed)
{
    constexpr double size = 320.0;
    constexpr double margin = 48.0;
    const auto [xlo, xhi] = std::minmax_element(x.begin(), x.end());
    const auto [ylo, yhi] = std::minmax_element(y.begin(), y.end());
    const double xr = *xhi > *xlo ? *xhi - *xlo : 1.0;
    const double yr = *yhi > *ylo ? *yhi - *ylo : 1.0;
    const double total = size + 2 * margin;
    std::string s = fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">\n", total);
    s += fmt::format("<rect x=\"0\" y=\"0\" width=\"{0}\" height=\"{0}\" fill=\"white\"/>\n", total);
    s += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{1}\" y2=\"{1}\" stroke=\"black\"/>\n", margin, margin + size);
    s += fmt::format("<line x1=\"{0}\" y1=\"{0}\" x2=\"{0}\" y2=\"{1}\" stroke=\"black\"/>\n", margin, margin + size);
    for (std::size_t i = 0; i < x.size(); ++i) {
        double jx = 0.0;
        double jy = 0.0;
        if (jitter) {
            jx = (unit_double(mix64(seed, 2 * i)) - 0.5) * 4.0;
            jy = (unit_double(mix64(seed, 2 * i + 1)) - 0.5) * 4.0;
        }
        const double px = margin + (x[i] - *xlo) / xr * size + jx;
        const double py = margin + size - (y[i] - *ylo) / yr * size + jy;
        s += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2\" fill=\"steelblue\" fill-opacity=\"0.6\"/>\n", px, py);
    }
    s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"13\">{}</text>\n", margin + size / 2, total - 12,
        xml_escape(x_label));
    s += fmt::format("<text x=\"16\" y=\"{0}\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 {0})\">{1}</text>\n",
        margin + size / 2, xml_escape(y_label));
    s += "</svg>\n";
    return s;
}

int cmd_plot(const RunConfig& c, const Flags& f)
{
    if (c.input.empty()) {
        throw ConfigError("plot: --input is required");
    }
    if (c.out.empty()) {
        throw ConfigError("plot: --out (output directory) is required");
    }
    fs::path prov_path = f.provenance;
    if (prov_path.empty()) {
        prov_path = fs::path(c.input).replace_extension(".provenance.json");
    }
    if (!fs::exists(prov_path)) {
        throw DataError("plot: provenance file '" + prov_path.string() + "' not found");
    }
    const ProvenanceFile prov = read_provenance(prov_path);
    const Dataset data = load_input(c);
    fs::create_directories(c.out);

    json files = json::array();
    for (const auto& p : prov.features) {
        const auto& x = data.column(p.source);
        const auto& y = data.column(p.name);
        std::string csv = fmt::format("{},{},label\n", p.source, p.name);
        for (std::size_t i = 0; i < x.size(); ++i) {
            csv += fmt::format("{},{},{}\n", format_number(x[i]), format_number(y[i]), data.labels ? (*data.labels)[i] : "");
        }
        const std::string stem = p.source + "_" + p.name;
        const fs::path csv_path = fs::path(c.out) / (stem + ".csv");
        const fs::path svg_path = fs::path(c.out) / (stem + ".svg");
        write_file(csv_path, csv);
        const std::string caption = fmt::format("{} (MI={:.2f})", p.name, p.source_mi);
        write_file(svg_path, scatter_svg(x, y, p.source, caption, c.plot_jitter, mix64(c.seed, p.tree_index)));
        files.push_back(json{{"feature", p.name}, {"csv", csv_path.string()}, {"svg", svg_path.string()}});
    }
    if (c.json_output) {
        json j = envelope("plot", c);
        j["files"] = std::move(files);
        print_json(j);
    } else {
        std::cout << fmt::format("wrote {} scatter plots to {}\n", files.size(), c.out);
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Generate redundant features with multi-tree GP and evaluate their effect"};
    app.require_subcommand(1);
    app.fallthrough();

    Flags f;
    app.add_option("--input", f.input, "Input dataset (CSV or ARFF)");
    app.add_option("--out", f.out, "Output path prefix (augment) or directory (plot)");
    app.add_option("--config", f.config, "JSON config file; flags override its values");
    app.add_option("--seed", f.seed, "Master seed");
    app.add_option("--label-col", f.label_col, "Label column name (default: 'class' when present)");
    app.add_flag("--no-labels", f.no_labels, "Treat every column as a feature");
    app.add_flag("--json", f.json, "Machine-readable JSON output");
    app.add_option("--jobs", f.jobs, "Worker threads for per-feature runs");
    app.add_option("--trees", f.trees, "Redundant features per source");
    app.add_option("--theta", f.theta, "Feasibility threshold on normalized source MI");
    app.add_option("--pop", f.pop, "Population size");
    app.add_option("--gens", f.gens, "Generations");
    app.add_option("--k-neighbors", f.k_neighbors, "Neighbors for the MI estimator");
    app.add_option("--epsilon", f.epsilon, "Input offset for source conditioning");
    app.add_option("--split", f.split, "Split percentages TRAIN,TEST or TRAIN,VALIDATION,TEST");
    app.add_option("--wrapper", f.wrapper, "Selection wrapper: knn or nb");
    app.add_option("--k", f.k, "Clusters (cluster) or KNN neighbors (select, classify)");
    app.add_option("--restarts", f.restarts, "k-means restarts");
    app.add_option("--mi-subsample", f.mi_subsample, "Subsample size for fitness MI (0 = all instances)");

    auto* augment_cmd = app.add_subcommand("augment", "Evolve redundant features for every source feature");
    augment_cmd->add_flag("--dump-trees", f.dump_trees, "Print the evolved trees");
    auto* mi_cmd = app.add_subcommand("mi", "Normalized pairwise MI of columns");
    mi_cmd->add_option("--cols", f.cols, "Comma-separated column names (default: all)");
    app.add_subcommand("rank", "Rank features by information gain");
    app.add_subcommand("select", "SFFS wrapper feature selection");
    app.add_subcommand("classify", "KNN and naive Bayes test accuracy");
    app.add_subcommand("cluster", "k-means++ clustering scored by ARI");
    auto* plot_cmd = app.add_subcommand("plot", "Scatter data and SVGs of each source against its redundant features");
    plot_cmd->add_option("--provenance", f.provenance, "Provenance file (default: <input stem>.provenance.json)");
    plot_cmd->add_flag("--jitter", f.jitter, "Jitter plotted points (rendering only)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        const SplitSpec default_split = name == "select" ? SplitSpec{0.6, 0.2, 0.2, 0} : SplitSpec{};
        bool split_from_file = false;
        RunConfig c = resolve(f, default_split, split_from_file);
        if (f.k) {
            if (name == "cluster") {
                c.clusters = *f.k;
            } else {
                c.wrapper.knn.k = *f.k;
            }
        }
        if (c.wrapper.knn.k < 1) {
            throw ConfigError("--k must be >= 1");
        }
        if (name == "augment") return cmd_augment(c, f);
        if (name == "mi") return cmd_mi(c, f);
        if (name == "rank") return cmd_rank(c);
        if (name == "select") return cmd_select(c);
        if (name == "classify") return cmd_classify(c);
        if (name == "cluster") return cmd_cluster(c);
        return cmd_plot(c, f);
    } catch (const RunFailure& e) {
        std::cerr << "error: " << e.what();
        return e.code;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kData;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRun;
    }
}
