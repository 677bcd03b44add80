#include "rfgen/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace rfgen {

namespace {

std::string trim(std::string_view s)
{
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    std::string out(s.substr(b, e - b));
    if (out.size() >= 2 && ((out.front() == '"' && out.back() == '"') || (out.front() == '\'' && out.back() == '\''))) {
        out = out.substr(1, out.size() - 2);
    }
    return out;
}

std::vector<std::string> split_fields(std::string_view line)
{
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') {
            quoted = !quoted;
            cur += c;
        } else if (c == ',' && !quoted) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

std::optional<double> parse_number(const std::string& s)
{
    if (s.empty()) {
        return std::nullopt;
    }
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (*first == '+') {
        ++first;
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

std::vector<std::string> read_lines(std::string_view text)
{
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string line(text.substr(start, end - start));
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        lines.push_back(std::move(line));
        start = end + 1;
    }
    return lines;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool is_blank(const std::string& s)
{
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

} // namespace

std::size_t Dataset::index_of(const std::string& name) const
{
    const auto it = std::find(feature_names.begin(), feature_names.end(), name);
    if (it == feature_names.end()) {
        throw DataError("unknown feature '" + name + "'");
    }
    return static_cast<std::size_t>(it - feature_names.begin());
}

void Dataset::validate() const
{
    if (feature_names.size() != columns.size()) {
        throw DataError("dataset: name/column count mismatch");
    }
    std::set<std::string> seen;
    for (const auto& n : feature_names) {
        if (!seen.insert(n).second) {
            throw DataError("dataset: duplicate feature name '" + n + "'");
        }
    }
    const std::size_t n = num_instances();
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c].size() != n) {
            throw DataError("dataset: column '" + feature_names[c] + "' has a different length");
        }
        if (!all_finite(columns[c])) {
            throw DataError("dataset: column '" + feature_names[c] + "' has non-finite values");
        }
    }
    if (labels && labels->size() != n) {
        throw DataError("dataset: label count differs from instance count");
    }
}

Dataset parse_csv(std::string_view text, const LoadOptions& opts)
{
    auto lines = read_lines(text);
    while (!lines.empty() && is_blank(lines.back())) {
        lines.pop_back();
    }
    if (lines.empty() || is_blank(lines.front())) {
        throw ParseError("csv: empty input, header row required", 1);
    }
    const auto header = split_fields(lines.front());

    std::optional<std::size_t> label_idx;
    if (!opts.no_labels) {
        const std::string wanted = opts.label_column.empty() ? "class" : opts.label_column;
        const auto it = std::find(header.begin(), header.end(), wanted);
        if (it != header.end()) {
            label_idx = static_cast<std::size_t>(it - header.begin());
        } else if (!opts.label_column.empty()) {
            throw ParseError("csv: label column '" + opts.label_column + "' not found in header", 1);
        }
    }

    Dataset d;
    std::set<std::string> seen;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c].empty()) {
            throw ParseError(fmt::format("csv: line 1, column {}: empty column name", c + 1), 1);
        }
        if (!seen.insert(header[c]).second) {
            throw ParseError(fmt::format("csv: duplicate column name '{}'", header[c]), 1);
        }
        if (label_idx && c == *label_idx) {
            d.label_name = header[c];
        } else {
            d.feature_names.push_back(header[c]);
        }
    }
    d.columns.resize(d.feature_names.size());
    if (label_idx) {
        d.labels.emplace();
    }

    for (std::size_t r = 1; r < lines.size(); ++r) {
        if (is_blank(lines[r])) {
            continue;
        }
        const auto fields = split_fields(lines[r]);
        if (fields.size() != header.size()) {
            throw ParseError(fmt::format("csv: line {}: expected {} fields, found {}", r + 1, header.size(), fields.size()), r + 1);
        }
        std::size_t f = 0;
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (label_idx && c == *label_idx) {
                d.labels->push_back(fields[c]);
                continue;
            }
            const auto v = parse_number(fields[c]);
            if (!v) {
                throw ParseError(fmt::format("csv: line {}, column {}: '{}' is not a finite number", r + 1, c + 1, fields[c]), r + 1);
            }
            d.columns[f++].push_back(*v);
        }
    }
    if (d.num_instances() == 0) {
        throw ParseError("csv: no data rows", lines.size());
    }
    return d;
}

Dataset load_csv(const std::filesystem::path& path, const LoadOptions& opts)
{
    return parse_csv(read_file(path), opts);
}

Dataset parse_arff(std::string_view text)
{
    struct Attribute {
        std::string name;
        bool nominal = false;
    };
    std::vector<Attribute> attrs;
    Dataset d;
    bool in_data = false;
    std::optional<std::size_t> class_idx;

    const auto lines = read_lines(text);
    for (std::size_t r = 0; r < lines.size(); ++r) {
        const std::string line = trim(lines[r]);
        if (line.empty() || line.front() == '%') {
            continue;
        }
        if (!in_data) {
            const std::string low = lower(line);
            if (low.rfind("@relation", 0) == 0) {
                continue;
            }
            if (low.rfind("@data", 0) == 0) {
                in_data = true;
                d.columns.resize(d.feature_names.size());
                if (class_idx) {
                    d.labels.emplace();
                }
                continue;
            }
            if (low.rfind("@attribute", 0) != 0) {
                throw ParseError(fmt::format("arff: line {}: unexpected header line", r + 1), r + 1);
            }
            std::string rest = trim(std::string_view(line).substr(10));
            std::string name;
            if (!rest.empty() && (rest.front() == '\'' || rest.front() == '"')) {
                const char q = rest.front();
                const auto close = rest.find(q, 1);
                if (close == std::string::npos) {
                    throw ParseError(fmt::format("arff: line {}: unterminated attribute name", r + 1), r + 1);
                }
                name = rest.substr(1, close - 1);
                rest = trim(std::string_view(rest).substr(close + 1));
            } else {
                const auto sp = rest.find_first_of(" \t");
                if (sp == std::string::npos) {
                    throw ParseError(fmt::format("arff: line {}: attribute type missing", r + 1), r + 1);
                }
                name = rest.substr(0, sp);
                rest = trim(std::string_view(rest).substr(sp));
            }
            const std::string type = lower(rest);
            Attribute a{name, false};
            if (!type.empty() && type.front() == '{') {
                if (class_idx) {
                    throw ParseError(fmt::format("arff: line {}: only one nominal (class) attribute is supported", r + 1), r + 1);
                }
                a.nominal = true;
                class_idx = attrs.size();
                d.label_name = name;
            } else if (type == "numeric" || type == "real" || type == "integer") {
                d.feature_names.push_back(name);
            } else {
                throw ParseError(fmt::format("arff: line {}: unsupported attribute type '{}'", r + 1, rest), r + 1);
            }
            attrs.push_back(a);
            continue;
        }
        if (line.front() == '{') {
            throw ParseError(fmt::format("arff: line {}: sparse data rows are not supported", r + 1), r + 1);
        }
        const auto fields = split_fields(line);
        if (fields.size() != attrs.size()) {
            throw ParseError(fmt::format("arff: line {}: expected {} fields, found {}", r + 1, attrs.size(), fields.size()), r + 1);
        }
        std::size_t f = 0;
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (attrs[c].nominal) {
                d.labels->push_back(fields[c]);
                continue;
            }
            const auto v = parse_number(fields[c]);
            if (!v) {
                throw ParseError(fmt::format("arff: line {}, column {}: '{}' is not a finite number", r + 1, c + 1, fields[c]), r + 1);
            }
            d.columns[f++].push_back(*v);
        }
    }
    if (!in_data || d.num_instances() == 0) {
        throw ParseError("arff: no @data section or no rows", lines.size());
    }
    return d;
}

Dataset load_arff(const std::filesystem::path& path)
{
    return parse_arff(read_file(path));
}

Dataset load(const std::filesystem::path& path, const LoadOptions& opts)
{
    if (lower(path.extension().string()) == ".arff") {
        return load_arff(path);
    }
    return load_csv(path, opts);
}

std::string to_csv(const Dataset& data)
{
    std::string out;
    for (std::size_t c = 0; c < data.feature_names.size(); ++c) {
        if (c > 0) out += ',';
        out += data.feature_names[c];
    }
    if (data.labels) {
        out += ',';
        out += data.label_name;
    }
    out += '\n';
    for (std::size_t r = 0; r < data.num_instances(); ++r) {
        for (std::size_t c = 0; c < data.columns.size(); ++c) {
            if (c > 0) out += ',';
            out += fmt::format("{}", data.columns[c][r]);
        }
        if (data.labels) {
            out += ',';
            out += (*data.labels)[r];
        }
        out += '\n';
    }
    return out;
}

void save_csv(const Dataset& data, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write '" + path.string() + "'");
    }
    out << to_csv(data);
}

void ConditioningConfig::validate() const
{
    if (!(epsilon > 0.0)) {
        throw ConfigError("conditioning: epsilon must be > 0");
    }
    if (rounding_places < 1 || rounding_places > 15) {
        throw ConfigError("conditioning: rounding_places must be in [1, 15]");
    }
}

FeatureVector condition_source(std::span<const double> x, const ConditioningConfig& cfg)
{
    cfg.validate();
    if (x.empty()) {
        throw DataError("condition_source: empty feature");
    }
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    const double range = *hi - *lo;
    if (!(range > 0.0) || !std::isfinite(range)) {
        throw DataError("condition_source: feature is constant or not finite");
    }
    const double eps = cfg.epsilon;
    FeatureVector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double u = unit_double(mix64(cfg.delta_seed, static_cast<std::uint64_t>(i)));
        const double delta = 0.001 * eps + (eps - 0.001 * eps) * u;
        out[i] = (x[i] - *lo) / range + delta + eps;
    }
    return out;
}

std::optional<FeatureVector> try_postprocess_rf(std::span<const double> y, int rounding_places)
{
    if (y.empty()) {
        return std::nullopt;
    }
    double lo = y[0];
    double hi = y[0];
    for (double v : y) {
        if (!std::isfinite(v)) {
            return std::nullopt;
        }
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double range = hi - lo;
    if (!(range > 0.0) || !std::isfinite(range)) {
        return std::nullopt;
    }
    const double scale = std::pow(10.0, rounding_places);
    FeatureVector out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double s = (y[i] - lo) / range;
        out[i] = std::min(1.0, std::floor(s * scale + 0.5) / scale);
    }
    return out;
}

FeatureVector postprocess_rf(std::span<const double> y, const ConditioningConfig& cfg)
{
    cfg.validate();
    auto out = try_postprocess_rf(y, cfg.rounding_places);
    if (!out) {
        throw DataError("postprocess_rf: degenerate redundant feature (constant or non-finite output)");
    }
    return std::move(*out);
}

FeatureVector linear_rf(std::span<const double> x, double alpha, double beta)
{
    if (alpha == 0.0) {
        throw DomainError("linear_rf: alpha must be non-zero");
    }
    FeatureVector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = alpha * x[i] + beta;
    }
    return out;
}

EncodedLabels encode_labels(const std::vector<std::string>& labels)
{
    EncodedLabels e;
    std::set<std::string> uniq(labels.begin(), labels.end());
    e.names.assign(uniq.begin(), uniq.end());
    std::map<std::string, int> id;
    for (std::size_t i = 0; i < e.names.size(); ++i) {
        id[e.names[i]] = static_cast<int>(i);
    }
    e.ids.reserve(labels.size());
    for (const auto& l : labels) {
        e.ids.push_back(id[l]);
    }
    return e;
}

} // namespace rfgen
