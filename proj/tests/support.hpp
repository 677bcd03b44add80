#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rfgen/common.hpp"
#include "rfgen/dataset.hpp"

namespace testing_support {

inline std::string data_path(const std::string& name)
{
    return std::string(RFGEN_DATA_DIR) + "/" + name;
}

inline rfgen::Dataset iris()
{
    return rfgen::load_csv(data_path("iris.csv"));
}

inline std::vector<double> uniform_sample(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) {
        x = u(rng);
    }
    return v;
}

// Correlated standard normal pair with correlation rho.
inline std::pair<std::vector<double>, std::vector<double>> gaussian_pair(std::size_t n, double rho, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> x(n);
    std::vector<double> y(n);
    const double s = std::sqrt(1.0 - rho * rho);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = g(rng);
        const double b = g(rng);
        x[i] = a;
        y[i] = rho * a + s * b;
    }
    return {x, y};
}

inline double gaussian_mi(double rho)
{
    return -0.5 * std::log(1.0 - rho * rho);
}

template <class T>
std::vector<T> shuffled(std::vector<T> v, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::shuffle(v.begin(), v.end(), rng);
    return v;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

} // namespace testing_support
