#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "rfgen/digamma.hpp"

using rfgen::digamma;

namespace {

// Euler-Mascheroni constant from 10,000 harmonic terms plus the
// Euler-Maclaurin tail of H_n - ln n.
double gamma_oracle()
{
    const int n = 10000;
    long double h = 0.0L;
    for (int i = n; i >= 1; --i) {
        h += 1.0L / i;
    }
    const long double nn = n;
    return static_cast<double>(h - std::log(nn) - 1.0L / (2 * nn) + 1.0L / (12 * nn * nn) - 1.0L / (120 * nn * nn * nn * nn));
}

// psi(m) = -gamma + H_{m-1} for integer m >= 1.
double psi_integer_oracle(int m)
{
    double h = 0.0;
    for (int i = 1; i < m; ++i) {
        h += 1.0 / i;
    }
    return -gamma_oracle() + h;
}

} // namespace

TEST(Digamma, OneIsMinusEulerGamma)
{
    EXPECT_NEAR(digamma(1.0), -gamma_oracle(), 1e-12);
    EXPECT_NEAR(digamma(1.0), -0.5772156649015329, 1e-12);
}

TEST(Digamma, TenMatchesHarmonicOracle)
{
    EXPECT_NEAR(digamma(10.0), psi_integer_oracle(10), 1e-11);
    EXPECT_NEAR(digamma(10.0), 2.2517525891, 1e-10);
}

TEST(Digamma, IntegersUpToLargeArguments)
{
    for (int m : {2, 3, 5, 17, 100, 1024, 5000}) {
        EXPECT_NEAR(digamma(m), psi_integer_oracle(m), 1e-10) << "m = " << m;
    }
}

TEST(Digamma, HalfIntegerClosedForm)
{
    const double half = -gamma_oracle() - 2.0 * std::log(2.0);
    EXPECT_NEAR(digamma(0.5), half, 1e-10);
    EXPECT_NEAR(digamma(1.5), half + 2.0, 1e-10);
}

TEST(Digamma, Recurrence)
{
    for (double x : {0.1, 0.7, 1.0, 1.3, 2.5, 9.99, 42.0, 1234.5}) {
        EXPECT_NEAR(digamma(x + 1.0), digamma(x) + 1.0 / x, 1e-10 * std::max(1.0, 1.0 / x)) << "x = " << x;
    }
    EXPECT_NEAR(digamma(2.0), digamma(1.0) + 1.0, 1e-14);
}

TEST(Digamma, DomainErrors)
{
    EXPECT_THROW(digamma(0.0), rfgen::DomainError);
    EXPECT_THROW(digamma(-1.5), rfgen::DomainError);
    EXPECT_THROW(digamma(std::numeric_limits<double>::quiet_NaN()), rfgen::DomainError);
    EXPECT_THROW(digamma(std::numeric_limits<double>::infinity()), rfgen::DomainError);
}
