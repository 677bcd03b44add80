#pragma once

#include "rfgen/common.hpp"

namespace rfgen {

// Digamma function psi(x) = d/dx ln Gamma(x) for x > 0.
// Throws DomainError for x <= 0 or non-finite x.
double digamma(double x);

} // namespace rfgen
