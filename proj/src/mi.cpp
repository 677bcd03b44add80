#include "rfgen/mi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>

#include "rfgen/digamma.hpp"

namespace rfgen {

void EstimatorConfig::validate() const
{
    if (k_neighbors < 1) {
        throw DomainError("estimator: k_neighbors must be >= 1");
    }
    if (!(tie_noise_amplitude > 0.0)) {
        throw DomainError("estimator: tie_noise_amplitude must be > 0");
    }
}

namespace {

void check_inputs(std::span<const double> x, std::span<const double> y, int k)
{
    if (k < 1) {
        throw DomainError("estimator: k_neighbors must be >= 1");
    }
    if (x.size() != y.size()) {
        throw DataError("estimator: length mismatch (" + std::to_string(x.size()) + " vs "
            + std::to_string(y.size()) + ")");
    }
    if (x.size() <= static_cast<std::size_t>(k)) {
        throw DataError("estimator: need more than k_neighbors instances");
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
            throw DataError("estimator: non-finite value at instance " + std::to_string(i));
        }
    }
}

std::vector<double> kth_distances_brute(std::span<const double> x, std::span<const double> y, int k)
{
    const std::size_t n = x.size();
    std::vector<double> out(n);
    std::vector<double> dist(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t m = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                dist[m++] = std::max(std::abs(x[j] - x[i]), std::abs(y[j] - y[i]));
            }
        }
        std::nth_element(dist.begin(), dist.begin() + (k - 1), dist.end());
        out[i] = dist[k - 1];
    }
    return out;
}

// Scans outward from each point along the x-sorted order and stops once the
// x gap alone exceeds the current k-th joint distance.
std::vector<double> kth_distances_sorted(std::span<const double> x, std::span<const double> y, int k)
{
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

    std::vector<double> out(n);
    std::priority_queue<double> heap;
    const auto kk = static_cast<std::size_t>(k);
    for (std::size_t p = 0; p < n; ++p) {
        const std::size_t i = order[p];
        heap = {};
        std::ptrdiff_t left = static_cast<std::ptrdiff_t>(p) - 1;
        std::size_t right = p + 1;
        while (left >= 0 || right < n) {
            double dl = left >= 0 ? std::abs(x[order[static_cast<std::size_t>(left)]] - x[i]) : INFINITY;
            double dr = right < n ? std::abs(x[order[right]] - x[i]) : INFINITY;
            const bool take_left = dl <= dr;
            const double dx = take_left ? dl : dr;
            if (heap.size() == kk && dx >= heap.top()) {
                break;
            }
            const std::size_t j = take_left ? order[static_cast<std::size_t>(left--)] : order[right++];
            const double d = std::max(std::abs(x[j] - x[i]), std::abs(y[j] - y[i]));
            if (heap.size() < kk) {
                heap.push(d);
            } else if (d < heap.top()) {
                heap.pop();
                heap.push(d);
            }
        }
        out[i] = heap.top();
    }
    return out;
}

// #{j != i : |v_j - v_i| < radius_i} via binary search; |v_j - v_i| is
// monotone on each side of v_i in sorted order, so the exact predicate can be
// bisected and the counts match the brute-force scan.
std::vector<int> marginal_counts(std::span<const double> v, const std::vector<double>& radius)
{
    std::vector<double> sorted(v.begin(), v.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double c = v[i];
        const double r = radius[i];
        const auto mid = std::lower_bound(sorted.begin(), sorted.end(), c);
        const auto lo = std::partition_point(sorted.begin(), mid, [&](double s) { return !(std::abs(s - c) < r); });
        const auto hi = std::partition_point(mid, sorted.end(), [&](double s) { return std::abs(s - c) < r; });
        int count = static_cast<int>(hi - lo);
        if (0.0 < r) {
            --count; // the point itself
        }
        out[i] = count;
    }
    return out;
}

std::vector<int> marginal_counts_brute(std::span<const double> v, const std::vector<double>& radius)
{
    std::vector<int> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        int count = 0;
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (j != i && std::abs(v[j] - v[i]) < radius[i]) {
                ++count;
            }
        }
        out[i] = count;
    }
    return out;
}

} // namespace

KsgCounts ksg_counts(std::span<const double> x, std::span<const double> y, int k, NeighborSearch search)
{
    check_inputs(x, y, k);
    KsgCounts c;
    if (search == NeighborSearch::BruteForce) {
        c.kth_distance = kth_distances_brute(x, y, k);
        c.nx = marginal_counts_brute(x, c.kth_distance);
        c.ny = marginal_counts_brute(y, c.kth_distance);
    } else {
        c.kth_distance = kth_distances_sorted(x, y, k);
        c.nx = marginal_counts(x, c.kth_distance);
        c.ny = marginal_counts(y, c.kth_distance);
    }
    return c;
}

double ksg_mi(std::span<const double> x, std::span<const double> y, int k, NeighborSearch search)
{
    const KsgCounts c = ksg_counts(x, y, k, search);
    const std::size_t n = x.size();

    // psi at integer arguments 1..n via psi(m + 1) = psi(m) + 1/m
    std::vector<double> psi(n + 1);
    psi[1] = digamma(1.0);
    for (std::size_t m = 1; m < n; ++m) {
        psi[m + 1] = psi[m] + 1.0 / static_cast<double>(m);
    }

    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += psi[static_cast<std::size_t>(c.nx[i]) + 1] + psi[static_cast<std::size_t>(c.ny[i]) + 1];
    }
    return psi[static_cast<std::size_t>(k)] + psi[n] - sum / static_cast<double>(n);
}

FeatureVector prepare_marginal(std::span<const double> v, const EstimatorConfig& cfg, int slot)
{
    const std::size_t n = v.size();
    double mean = 0.0;
    for (double d : v) {
        mean += d;
    }
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double d : v) {
        var += (d - mean) * (d - mean);
    }
    var /= static_cast<double>(n);
    const double sd = var > 0.0 ? std::sqrt(var) : 1.0;

    const std::uint64_t stream = mix64(cfg.noise_seed, static_cast<std::uint64_t>(slot));
    FeatureVector out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = 2.0 * unit_double(mix64(stream, i)) - 1.0;
        out[i] = (v[i] - mean) / sd + cfg.tie_noise_amplitude * u;
    }
    return out;
}

double estimate_mi(std::span<const double> x, std::span<const double> y, const EstimatorConfig& cfg)
{
    cfg.validate();
    check_inputs(x, y, cfg.k_neighbors);
    const FeatureVector px = prepare_marginal(x, cfg, 0);
    const FeatureVector py = prepare_marginal(y, cfg, 1);
    return ksg_mi(px, py, cfg.k_neighbors);
}

double baseline_psi(std::span<const double> x, const EstimatorConfig& cfg)
{
    if (!x.empty() && std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); })) {
        throw DataError("baseline MI undefined for a constant feature");
    }
    const double psi = estimate_mi(x, x, cfg);
    if (!(psi > 0.0)) {
        throw DataError("baseline MI is not positive (constant or degenerate feature)");
    }
    return psi;
}

MiEstimate normalized_mi(std::span<const double> x, std::span<const double> y, double psi, const EstimatorConfig& cfg)
{
    if (!(psi > 0.0)) {
        throw DomainError("normalized_mi: baseline psi must be > 0");
    }
    MiEstimate e;
    e.raw = estimate_mi(x, y, cfg);
    e.baseline_psi = psi;
    e.normalized = e.raw / psi;
    return e;
}

} // namespace rfgen
