#pragma once

#include "aim/numcore/polynomial.hpp"

namespace aim::numcore {

/// Physicists' Hermite polynomial H_m with exact integer coefficients.
NumPoly hermite_numeric(int m);
Poly hermite(int m);

}  // namespace aim::numcore
