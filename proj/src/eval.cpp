#include "rfgen/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>

#include <fmt/format.h>

namespace rfgen {

void SplitSpec::validate() const
{
    if (train < 0.0 || validation < 0.0 || test < 0.0) {
        throw ConfigError("split: fractions must be non-negative");
    }
    if (std::abs(train + validation + test - 1.0) > 1e-9) {
        throw ConfigError("split: fractions must sum to 1");
    }
}

Split make_split(std::size_t n, const SplitSpec& spec, std::span<const int> labels)
{
    spec.validate();
    if (!labels.empty() && labels.size() != n) {
        throw DataError("split: label count differs from instance count");
    }
    std::map<int, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) {
        groups[labels.empty() ? 0 : labels[i]].push_back(i);
    }
    Rng rng(spec.shuffle_seed);
    Split s;
    for (auto& [label, idx] : groups) {
        for (std::size_t i = idx.size(); i > 1; --i) {
            std::swap(idx[i - 1], idx[uniform_index(rng, i)]);
        }
        const std::size_t m = idx.size();
        const auto n_train = std::min(m, static_cast<std::size_t>(std::llround(spec.train * static_cast<double>(m))));
        const auto n_val = std::min(m - n_train, static_cast<std::size_t>(std::llround(spec.validation * static_cast<double>(m))));
        s.train.insert(s.train.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
        s.validation.insert(s.validation.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_train),
            idx.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
        s.test.insert(s.test.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), idx.end());
    }
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.validation.begin(), s.validation.end());
    std::sort(s.test.begin(), s.test.end());
    return s;
}

Matrix gather(const std::vector<FeatureVector>& columns, std::span<const std::size_t> rows, std::span<const std::size_t> cols)
{
    Matrix m;
    m.rows = rows.size();
    m.cols = cols.size();
    m.values.resize(m.rows * m.cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            m.values[r * m.cols + c] = columns[cols[c]][rows[r]];
        }
    }
    return m;
}

std::vector<int> gather_labels(std::span<const int> labels, std::span<const std::size_t> rows)
{
    std::vector<int> out;
    out.reserve(rows.size());
    for (std::size_t r : rows) {
        out.push_back(labels[r]);
    }
    return out;
}

double accuracy(std::span<const int> predicted, std::span<const int> truth)
{
    if (predicted.size() != truth.size() || truth.empty()) {
        throw DataError("accuracy: empty or mismatched prediction vectors");
    }
    std::size_t hit = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        hit += predicted[i] == truth[i] ? 1 : 0;
    }
    return static_cast<double>(hit) / static_cast<double>(truth.size());
}

// ---- information gain ---------------------------------------------------------

double entropy_bits(std::span<const int> counts)
{
    double total = 0.0;
    for (int c : counts) total += c;
    if (total <= 0.0) {
        return 0.0;
    }
    double h = 0.0;
    for (int c : counts) {
        if (c > 0) {
            const double p = c / total;
            h -= p * std::log2(p);
        }
    }
    return h;
}

namespace {

std::size_t num_label_values(std::span<const int> labels)
{
    int mx = -1;
    for (int l : labels) {
        if (l < 0) {
            throw DataError("labels must be non-negative class ids");
        }
        mx = std::max(mx, l);
    }
    return static_cast<std::size_t>(mx + 1);
}

int nonzero(std::span<const int> counts)
{
    return static_cast<int>(std::count_if(counts.begin(), counts.end(), [](int c) { return c > 0; }));
}

struct Sorted {
    std::vector<double> values;
    std::vector<int> labels;
    std::size_t classes;
};

void mdl_recurse(const Sorted& s, std::size_t first, std::size_t last, std::vector<double>& cuts)
{
    const std::size_t n = last - first;
    if (n < 2) {
        return;
    }
    const std::size_t c = s.classes;
    std::vector<int> total(c, 0);
    for (std::size_t i = first; i < last; ++i) {
        ++total[static_cast<std::size_t>(s.labels[i])];
    }
    const double prior = entropy_bits(total);

    std::vector<int> left(c, 0);
    std::vector<int> right = total;
    double best_entropy = std::numeric_limits<double>::infinity();
    std::size_t best_split = 0; // index of first instance in the right part
    std::vector<int> best_left;
    std::vector<int> best_right;
    std::size_t candidates = 0;
    for (std::size_t i = first; i + 1 < last; ++i) {
        const auto l = static_cast<std::size_t>(s.labels[i]);
        ++left[l];
        --right[l];
        if (s.values[i] < s.values[i + 1]) {
            ++candidates;
            const double nl = static_cast<double>(i + 1 - first);
            const double nr = static_cast<double>(last - i - 1);
            const double e = (nl * entropy_bits(left) + nr * entropy_bits(right)) / static_cast<double>(n);
            if (e < best_entropy) {
                best_entropy = e;
                best_split = i + 1;
                best_left = left;
                best_right = right;
            }
        }
    }
    if (best_split == 0) {
        return;
    }
    const double gain = prior - best_entropy;
    if (gain <= 0.0) {
        return;
    }
    const double k = nonzero(total);
    const double k1 = nonzero(best_left);
    const double k2 = nonzero(best_right);
    const double delta = std::log2(std::pow(3.0, k) - 2.0)
        - (k * prior - k1 * entropy_bits(best_left) - k2 * entropy_bits(best_right));
    // log2 of the candidate boundary count (n - 1 without ties), as in WEKA
    const double threshold = (std::log2(static_cast<double>(candidates)) + delta) / static_cast<double>(n);
    if (gain <= threshold) {
        return;
    }
    mdl_recurse(s, first, best_split, cuts);
    cuts.push_back((s.values[best_split - 1] + s.values[best_split]) / 2.0);
    mdl_recurse(s, best_split, last, cuts);
}

} // namespace

std::vector<double> mdl_cut_points(std::span<const double> feature, std::span<const int> labels)
{
    if (feature.size() != labels.size()) {
        throw DataError("mdl_cut_points: feature and label lengths differ");
    }
    std::vector<std::size_t> order(feature.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return feature[a] < feature[b]; });
    Sorted s;
    s.classes = num_label_values(labels);
    for (std::size_t i : order) {
        s.values.push_back(feature[i]);
        s.labels.push_back(labels[i]);
    }
    std::vector<double> cuts;
    mdl_recurse(s, 0, s.values.size(), cuts);
    return cuts;
}

double info_gain(std::span<const double> feature, std::span<const int> labels)
{
    if (labels.empty()) {
        throw DataError("info_gain: labels required");
    }
    const auto cuts = mdl_cut_points(feature, labels);
    const std::size_t c = num_label_values(labels);
    std::vector<int> total(c, 0);
    for (int l : labels) ++total[static_cast<std::size_t>(l)];
    if (cuts.empty()) {
        return 0.0;
    }
    std::vector<std::vector<int>> bins(cuts.size() + 1, std::vector<int>(c, 0));
    for (std::size_t i = 0; i < feature.size(); ++i) {
        const auto b = static_cast<std::size_t>(std::upper_bound(cuts.begin(), cuts.end(), feature[i]) - cuts.begin());
        ++bins[b][static_cast<std::size_t>(labels[i])];
    }
    const double n = static_cast<double>(labels.size());
    double conditional = 0.0;
    for (const auto& b : bins) {
        const double nb = std::accumulate(b.begin(), b.end(), 0.0);
        conditional += nb / n * entropy_bits(b);
    }
    return std::max(0.0, entropy_bits(total) - conditional);
}

RankingReport rank_features(const Dataset& data)
{
    if (!data.labels) {
        throw DataError("rank: dataset has no labels");
    }
    const auto enc = encode_labels(*data.labels);
    RankingReport r;
    for (std::size_t f = 0; f < data.num_features(); ++f) {
        r.push_back({data.feature_names[f], info_gain(data.columns[f], enc.ids)});
    }
    std::stable_sort(r.begin(), r.end(), [](const RankingEntry& a, const RankingEntry& b) {
        if (a.info_gain != b.info_gain) {
            return a.info_gain > b.info_gain;
        }
        return a.feature < b.feature;
    });
    return r;
}

// ---- classifiers ------------------------------------------------------------------

std::vector<int> knn_classify(const Matrix& train, std::span<const int> train_labels, const Matrix& test, const KnnOptions& opts)
{
    if (train.rows == 0) {
        throw DataError("knn: empty training set");
    }
    if (opts.k < 1) {
        throw DomainError("knn: k must be >= 1");
    }
    if (train_labels.size() != train.rows || test.cols != train.cols) {
        throw DataError("knn: shape mismatch");
    }
    const std::size_t d = train.cols;
    std::vector<double> lo(d, 0.0);
    std::vector<double> scale(d, 1.0);
    if (opts.normalize) {
        for (std::size_t c = 0; c < d; ++c) {
            double mn = train(0, c);
            double mx = train(0, c);
            for (std::size_t r = 1; r < train.rows; ++r) {
                mn = std::min(mn, train(r, c));
                mx = std::max(mx, train(r, c));
            }
            lo[c] = mn;
            scale[c] = mx > mn ? 1.0 / (mx - mn) : 1.0;
        }
    }
    const std::size_t classes = num_label_values(train_labels);
    std::vector<int> train_freq(classes, 0);
    for (int l : train_labels) ++train_freq[static_cast<std::size_t>(l)];

    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(opts.k), train.rows);
    std::vector<std::pair<double, std::size_t>> dist(train.rows);
    std::vector<int> out;
    out.reserve(test.rows);
    for (std::size_t q = 0; q < test.rows; ++q) {
        for (std::size_t r = 0; r < train.rows; ++r) {
            double s = 0.0;
            for (std::size_t c = 0; c < d; ++c) {
                const double diff = (test(q, c) - lo[c]) * scale[c] - (train(r, c) - lo[c]) * scale[c];
                s += diff * diff;
            }
            dist[r] = {s, r};
        }
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
        std::vector<int> votes(classes, 0);
        for (std::size_t i = 0; i < k; ++i) {
            ++votes[static_cast<std::size_t>(train_labels[dist[i].second])];
        }
        int best = 0;
        for (std::size_t cl = 1; cl < classes; ++cl) {
            const auto b = static_cast<std::size_t>(best);
            if (votes[cl] > votes[b] || (votes[cl] == votes[b] && train_freq[cl] > train_freq[b])) {
                best = static_cast<int>(cl);
            }
        }
        out.push_back(best);
    }
    return out;
}

std::vector<int> nb_classify(const Matrix& train, std::span<const int> train_labels, const Matrix& test, std::size_t num_classes,
    double variance_floor)
{
    if (train.rows == 0) {
        throw DataError("naive bayes: empty training set");
    }
    if (train_labels.size() != train.rows || test.cols != train.cols) {
        throw DataError("naive bayes: shape mismatch");
    }
    const std::size_t d = train.cols;
    std::vector<double> count(num_classes, 0.0);
    std::vector<double> mean(num_classes * d, 0.0);
    std::vector<double> var(num_classes * d, 0.0);
    for (std::size_t r = 0; r < train.rows; ++r) {
        const auto c = static_cast<std::size_t>(train_labels[r]);
        if (c >= num_classes) {
            throw DataError("naive bayes: label outside [0, num_classes)");
        }
        count[c] += 1.0;
        for (std::size_t f = 0; f < d; ++f) mean[c * d + f] += train(r, f);
    }
    for (std::size_t c = 0; c < num_classes; ++c) {
        if (count[c] == 0.0) {
            throw DataError(fmt::format("naive bayes: class {} has no training instances", c));
        }
        for (std::size_t f = 0; f < d; ++f) mean[c * d + f] /= count[c];
    }
    for (std::size_t r = 0; r < train.rows; ++r) {
        const auto c = static_cast<std::size_t>(train_labels[r]);
        for (std::size_t f = 0; f < d; ++f) {
            const double diff = train(r, f) - mean[c * d + f];
            var[c * d + f] += diff * diff;
        }
    }
    for (std::size_t c = 0; c < num_classes; ++c) {
        for (std::size_t f = 0; f < d; ++f) var[c * d + f] = var[c * d + f] / count[c] + variance_floor;
    }
    const double n = static_cast<double>(train.rows);
    constexpr double log_2pi = 1.8378770664093453;
    std::vector<int> out;
    out.reserve(test.rows);
    for (std::size_t q = 0; q < test.rows; ++q) {
        int best = 0;
        double best_score = -std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < num_classes; ++c) {
            double s = std::log(count[c] / n);
            for (std::size_t f = 0; f < d; ++f) {
                const double v = var[c * d + f];
                const double diff = test(q, f) - mean[c * d + f];
                s -= 0.5 * (log_2pi + std::log(v) + diff * diff / v);
            }
            if (s > best_score) {
                best_score = s;
                best = static_cast<int>(c);
            }
        }
        out.push_back(best);
    }
    return out;
}

std::string ClassifierSpec::describe() const
{
    if (kind == Wrapper::Knn) {
        return fmt::format("knn(k={}{})", knn.k, knn.normalize ? ", normalized" : "");
    }
    return "gaussian-naive-bayes";
}

namespace {

std::vector<int> run_classifier(const ClassifierSpec& spec, const Matrix& train, std::span<const int> train_labels, const Matrix& test,
    std::size_t num_classes)
{
    if (spec.kind == Wrapper::Knn) {
        return knn_classify(train, train_labels, test, spec.knn);
    }
    return nb_classify(train, train_labels, test, num_classes);
}

std::vector<std::size_t> all_columns(const Dataset& d)
{
    std::vector<std::size_t> c(d.num_features());
    std::iota(c.begin(), c.end(), std::size_t{0});
    return c;
}

} // namespace

double subset_accuracy(const Dataset& data, const Split& split, std::span<const std::size_t> features, const ClassifierSpec& wrapper,
    bool on_test)
{
    if (!data.labels) {
        throw DataError("classification requires labels");
    }
    const auto enc = encode_labels(*data.labels);
    const auto& eval_rows = on_test ? split.test : split.validation;
    const Matrix train = gather(data.columns, split.train, features);
    const Matrix eval = gather(data.columns, eval_rows, features);
    const auto train_labels = gather_labels(enc.ids, split.train);
    const auto truth = gather_labels(enc.ids, eval_rows);
    return accuracy(run_classifier(wrapper, train, train_labels, eval, enc.num_classes()), truth);
}

ClassificationReport classify_report(const Dataset& data, const SplitSpec& spec)
{
    if (!data.labels) {
        throw DataError("classify: dataset has no labels");
    }
    const auto enc = encode_labels(*data.labels);
    const Split split = make_split(data.num_instances(), spec, enc.ids);
    const auto cols = all_columns(data);
    ClassificationReport r;
    r.knn_accuracy = subset_accuracy(data, split, cols, ClassifierSpec{Wrapper::Knn, {}}, true);
    r.nb_accuracy = subset_accuracy(data, split, cols, ClassifierSpec{Wrapper::NaiveBayes, {}}, true);
    return r;
}

// ---- feature selection ------------------------------------------------------------

SelectionReport sffs(const Dataset& data, const SplitSpec& spec, const ClassifierSpec& wrapper)
{
    if (!data.labels) {
        throw DataError("select: dataset has no labels");
    }
    if (data.num_features() == 0) {
        throw DataError("select: dataset has no features");
    }
    const auto enc = encode_labels(*data.labels);
    const Split split = make_split(data.num_instances(), spec, enc.ids);
    if (split.train.empty() || split.validation.empty() || split.test.empty()) {
        throw ConfigError("select: train, validation and test partitions must all be non-empty");
    }

    // tie-break order: IG on the training partition (descending), then name
    const auto train_labels = gather_labels(enc.ids, split.train);
    std::vector<double> ig(data.num_features());
    for (std::size_t f = 0; f < data.num_features(); ++f) {
        FeatureVector col;
        for (std::size_t r : split.train) col.push_back(data.columns[f][r]);
        ig[f] = info_gain(col, train_labels);
    }
    auto preferred = [&](std::size_t a, std::size_t b) {
        if (ig[a] != ig[b]) {
            return ig[a] > ig[b];
        }
        return data.feature_names[a] < data.feature_names[b];
    };

    std::vector<std::size_t> selected;
    std::vector<bool> in(data.num_features(), false);
    SelectionReport rep;
    rep.wrapper = wrapper.describe();
    double best = -std::numeric_limits<double>::infinity();

    while (true) {
        // forward step
        std::optional<std::size_t> add;
        double add_acc = -std::numeric_limits<double>::infinity();
        for (std::size_t f = 0; f < data.num_features(); ++f) {
            if (in[f]) continue;
            auto trial = selected;
            trial.push_back(f);
            const double acc = subset_accuracy(data, split, trial, wrapper);
            if (!add || acc > add_acc || (acc == add_acc && preferred(f, *add))) {
                add = f;
                add_acc = acc;
            }
        }
        if (!add || !(add_acc > best)) {
            break;
        }
        selected.push_back(*add);
        in[*add] = true;
        best = add_acc;
        rep.validation_trace.push_back(best);

        // floating backward steps
        while (selected.size() > 1) {
            std::optional<std::size_t> drop;
            double drop_acc = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < selected.size(); ++i) {
                auto trial = selected;
                trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
                const double acc = subset_accuracy(data, split, trial, wrapper);
                // prefer removing the least preferred feature on ties
                if (!drop || acc > drop_acc || (acc == drop_acc && preferred(selected[*drop], selected[i]))) {
                    drop = i;
                    drop_acc = acc;
                }
            }
            if (!(drop_acc > best)) {
                break;
            }
            in[selected[*drop]] = false;
            selected.erase(selected.begin() + static_cast<std::ptrdiff_t>(*drop));
            best = drop_acc;
            rep.validation_trace.push_back(best);
        }
    }

    rep.validation_accuracy = best;
    rep.test_accuracy = subset_accuracy(data, split, selected, wrapper, true);
    std::vector<std::size_t> ordered = selected;
    std::sort(ordered.begin(), ordered.end());
    for (std::size_t f : ordered) {
        rep.selected.push_back(data.feature_names[f]);
    }
    return rep;
}

// ---- clustering --------------------------------------------------------------------

KMeansResult kmeans(const Matrix& data, int k, Rng& rng)
{
    const std::size_t n = data.rows;
    const std::size_t d = data.cols;
    if (k < 1 || static_cast<std::size_t>(k) > n) {
        throw DomainError("kmeans: k must lie in [1, number of instances]");
    }
    const auto kk = static_cast<std::size_t>(k);
    auto sqdist = [&](std::size_t r, const double* c) {
        double s = 0.0;
        for (std::size_t f = 0; f < d; ++f) {
            const double diff = data(r, f) - c[f];
            s += diff * diff;
        }
        return s;
    };

    // k-means++ seeding
    std::vector<double> centers(kk * d);
    const std::size_t first = uniform_index(rng, n);
    std::copy_n(data.row(first).begin(), d, centers.begin());
    std::vector<double> closest(n);
    for (std::size_t r = 0; r < n; ++r) closest[r] = sqdist(r, centers.data());
    for (std::size_t c = 1; c < kk; ++c) {
        const double total = std::accumulate(closest.begin(), closest.end(), 0.0);
        std::size_t pick = 0;
        if (total > 0.0) {
            double target = uniform_real(rng) * total;
            pick = n - 1;
            for (std::size_t r = 0; r < n; ++r) {
                target -= closest[r];
                if (target < 0.0) {
                    pick = r;
                    break;
                }
            }
        } else {
            pick = uniform_index(rng, n);
        }
        std::copy_n(data.row(pick).begin(), d, centers.begin() + static_cast<std::ptrdiff_t>(c * d));
        for (std::size_t r = 0; r < n; ++r) closest[r] = std::min(closest[r], sqdist(r, centers.data() + c * d));
    }

    KMeansResult res;
    res.assignment.assign(n, 0);
    for (int it = 0; it < 300; ++it) {
        double inertia = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            std::size_t best = 0;
            double bd = sqdist(r, centers.data());
            for (std::size_t c = 1; c < kk; ++c) {
                const double dd = sqdist(r, centers.data() + c * d);
                if (dd < bd) {
                    bd = dd;
                    best = c;
                }
            }
            res.assignment[r] = static_cast<int>(best);
            inertia += bd;
        }
        res.inertia_trace.push_back(inertia);
        res.iterations = it + 1;

        std::vector<double> next(kk * d, 0.0);
        std::vector<double> count(kk, 0.0);
        for (std::size_t r = 0; r < n; ++r) {
            const auto c = static_cast<std::size_t>(res.assignment[r]);
            count[c] += 1.0;
            for (std::size_t f = 0; f < d; ++f) next[c * d + f] += data(r, f);
        }
        double shift = 0.0;
        for (std::size_t c = 0; c < kk; ++c) {
            if (count[c] == 0.0) {
                std::copy_n(centers.begin() + static_cast<std::ptrdiff_t>(c * d), d, next.begin() + static_cast<std::ptrdiff_t>(c * d));
                continue;
            }
            double s = 0.0;
            for (std::size_t f = 0; f < d; ++f) {
                next[c * d + f] /= count[c];
                const double diff = next[c * d + f] - centers[c * d + f];
                s += diff * diff;
            }
            shift = std::max(shift, std::sqrt(s));
        }
        centers = std::move(next);
        if (shift < 1e-9) {
            break;
        }
    }
    res.inertia = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        res.inertia += sqdist(r, centers.data() + static_cast<std::size_t>(res.assignment[r]) * d);
    }
    return res;
}

double adjusted_rand_index(std::span<const int> a, std::span<const int> b)
{
    if (a.size() != b.size()) {
        throw DataError("ari: assignment lengths differ");
    }
    const std::size_t n = a.size();
    if (n < 2) {
        return 1.0;
    }
    std::map<std::pair<int, int>, double> table;
    std::map<int, double> ra;
    std::map<int, double> rb;
    for (std::size_t i = 0; i < n; ++i) {
        table[{a[i], b[i]}] += 1.0;
        ra[a[i]] += 1.0;
        rb[b[i]] += 1.0;
    }
    auto choose2 = [](double m) { return m * (m - 1.0) / 2.0; };
    double index = 0.0;
    for (const auto& [key, v] : table) index += choose2(v);
    double sa = 0.0;
    for (const auto& [key, v] : ra) sa += choose2(v);
    double sb = 0.0;
    for (const auto& [key, v] : rb) sb += choose2(v);
    const double expected = sa * sb / choose2(static_cast<double>(n));
    const double max_index = 0.5 * (sa + sb);
    if (max_index == expected) {
        // both partitions trivial (all singletons or one block)
        return index == max_index ? 1.0 : 0.0;
    }
    return (index - expected) / (max_index - expected);
}

ClusterReport kmeans_ari(const Dataset& data, int k, int restarts, std::uint64_t seed)
{
    if (!data.labels) {
        throw DataError("cluster: ARI requires ground-truth labels");
    }
    if (k < 2) {
        throw DomainError("cluster: k must be >= 2");
    }
    if (static_cast<std::size_t>(k) > data.num_instances()) {
        throw DomainError("cluster: k exceeds the number of instances");
    }
    if (restarts < 1) {
        throw DomainError("cluster: restarts must be >= 1");
    }
    const auto enc = encode_labels(*data.labels);
    std::vector<std::size_t> rows(data.num_instances());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    const Matrix m = gather(data.columns, rows, all_columns(data));

    Rng rng(seed);
    ClusterReport rep;
    rep.inertia = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        auto res = kmeans(m, k, rng);
        const double ari = adjusted_rand_index(res.assignment, enc.ids);
        rep.restart_inertia.push_back(res.inertia);
        rep.restart_ari.push_back(ari);
        if (res.inertia < rep.inertia) {
            rep.inertia = res.inertia;
            rep.assignment = std::move(res.assignment);
            rep.ari = ari;
        }
    }
    return rep;
}

} // namespace rfgen
