#pragma once

#include "aim/numcore/ratfun.hpp"

#include <stdexcept>
#include <vector>

namespace aim::numcore {

class RootFindingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Root {
  BigScalar value;
  int multiplicity = 1;
};

/// All complex roots of p with multiplicities.
///
/// Exact input goes through an exact square-free split first, so
/// multiplicities are exact and linear/quadratic factors give exact roots
/// where possible. Remaining factors are solved by Aberth iteration seeded
/// from a double-precision pass. Float input is clustered with tolerance
/// 2^(-bits/4) * max|root|.
std::vector<Root> poly_roots(const NumPoly& p, unsigned bits);
std::vector<Root> poly_roots(const Poly& p, unsigned bits);

/// Square-free factors f_1, f_2, ... with p = c * prod f_i^i; exact input only.
std::vector<NumPoly> square_free_factors(const NumPoly& p);

struct Pole {
  BigScalar location;
  int multiplicity = 1;
  /// residues[t] is the coefficient of 1/(x - location)^(t+1).
  std::vector<BigScalar> residues;
};

struct PoleDecomposition {
  NumPoly polynomial_part;
  std::vector<Pole> poles;

  BigScalar evaluate(const BigScalar& x) const;
};

/// Partial fraction decomposition of an E-free rational function.
PoleDecomposition partial_fractions(const ParamRatFun& r, unsigned bits);

}  // namespace aim::numcore
