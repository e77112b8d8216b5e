#include "aim/numcore/hermite.hpp"

#include <stdexcept>

namespace aim::numcore {

NumPoly hermite_numeric(int m) {
  if (m < 0) throw std::invalid_argument("hermite index must be nonnegative");
  NumPoly prev(BigScalar(1));
  if (m == 0) return prev;
  const NumPoly two_x = NumPoly::monomial(BigScalar(2), 1);
  NumPoly cur = two_x;
  for (int k = 1; k < m; ++k) {
    NumPoly next = two_x * cur - prev * BigScalar(2L * k);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

Poly hermite(int m) { return lift(hermite_numeric(m)); }

}  // namespace aim::numcore
