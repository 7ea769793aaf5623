#pragma once

#include "nogp/types.hpp"

namespace nogp::testing {

// exp(A) via Taylor series with scaling and squaring; independent of the
// eigendecomposition route used in production.
Matrix series_exp(const Matrix& a, int terms = 24);

// exp(-i H tau) through the series route.
Matrix series_skew_exp(const Matrix& h, double tau, int terms = 24);

} // namespace nogp::testing
