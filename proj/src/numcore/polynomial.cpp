#include "aim/numcore/polynomial.hpp"

#include <algorithm>

namespace aim::numcore {

NumPoly num_monomial(std::size_t k) { return NumPoly::monomial(BigScalar(1), k); }

Poly lift(const NumPoly& p) {
  return p.map([](const BigScalar& c) { return EPoly(c); });
}

bool is_E_free(const Poly& p) {
  return std::all_of(p.coefficients().begin(), p.coefficients().end(),
                     [](const EPoly& c) { return c.degree() == 0; });
}

NumPoly to_numeric(const Poly& p) {
  if (!is_E_free(p)) throw std::invalid_argument("polynomial depends on E");
  return p.map([](const EPoly& c) { return c.coeff(0); });
}

Poly substitute_E(const Poly& p, const BigScalar& E) {
  return p.map([&](const EPoly& c) { return EPoly(c.evaluate(E)); });
}

bool is_exact(const NumPoly& p) {
  return std::all_of(p.coefficients().begin(), p.coefficients().end(),
                     [](const BigScalar& c) { return c.is_exact(); });
}

bool is_exact(const Poly& p) {
  return std::all_of(p.coefficients().begin(), p.coefficients().end(),
                     [](const EPoly& c) { return is_exact(c); });
}

NumPoly to_float(const NumPoly& p, unsigned bits) {
  return p.map([&](const BigScalar& c) { return c.to_float(bits); });
}

Poly to_float(const Poly& p, unsigned bits) {
  return p.map([&](const EPoly& c) { return to_float(c, bits); });
}

unsigned precision_of(const NumPoly& p) {
  unsigned bits = 0;
  for (const auto& c : p.coefficients()) {
    const unsigned b = c.precision();
    if (b != 0) bits = bits == 0 ? b : std::min(bits, b);
  }
  return bits;
}

unsigned precision_of(const Poly& p) {
  unsigned bits = 0;
  for (const auto& c : p.coefficients()) {
    const unsigned b = precision_of(c);
    if (b != 0) bits = bits == 0 ? b : std::min(bits, b);
  }
  return bits;
}

std::pair<NumPoly, NumPoly> divmod(const NumPoly& a, const NumPoly& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  if (a.is_zero() || a.degree() < b.degree()) return {NumPoly(), a};
  std::vector<BigScalar> r = a.coefficients();
  const auto& bc = b.coefficients();
  const std::size_t db = bc.size() - 1;
  std::vector<BigScalar> q(r.size() - db);
  const BigScalar& lead = bc.back();
  for (std::size_t k = r.size(); k-- > db;) {
    const BigScalar f = r[k] / lead;
    q[k - db] = f;
    if (f.is_zero()) continue;
    for (std::size_t j = 0; j < db; ++j) r[k - db + j] -= f * bc[j];
    r[k] = BigScalar(0);
  }
  r.resize(db);
  return {NumPoly(std::move(q)), NumPoly(std::move(r))};
}

NumPoly make_monic(const NumPoly& p) {
  if (p.is_zero()) return p;
  const BigScalar lead = p.leading();
  if (lead == BigScalar(1)) return p;
  return p.map([&](const BigScalar& c) { return c / lead; });
}

NumPoly gcd_exact(const NumPoly& a, const NumPoly& b) {
  NumPoly r0 = a.degree() >= b.degree() ? a : b;
  NumPoly r1 = a.degree() >= b.degree() ? b : a;
  while (!r1.is_zero()) {
    NumPoly r = divmod(r0, r1).second;
    r0 = std::move(r1);
    r1 = make_monic(r);
  }
  return make_monic(r0);
}

Real coeff_norm(const NumPoly& p, unsigned bits) {
  Real m = make_real(bits);
  for (const auto& c : p.coefficients()) {
    Real a = abs_real(c, bits);
    if (a > m) m = a;
  }
  return m;
}

NumPoly gcd_approx(const NumPoly& a, const NumPoly& b, const Real& tol) {
  const unsigned bits = std::max(precision_of(a), precision_of(b)) == 0
                            ? kDefaultPrecision
                            : std::max(precision_of(a), precision_of(b));
  NumPoly r0 = make_monic(a.degree() >= b.degree() ? a : b);
  NumPoly r1 = make_monic(a.degree() >= b.degree() ? b : a);
  while (!r1.is_zero()) {
    if (r1.degree() == 0) return NumPoly(BigScalar(1));
    NumPoly r = divmod(r0, r1).second;
    if (r.is_zero() || coeff_norm(r, bits) <= tol * coeff_norm(r0, bits)) return r1;
    r0 = std::move(r1);
    r1 = make_monic(r);
  }
  return r0;
}

NumPoly taylor_shift(const NumPoly& p, const BigScalar& shift) {
  std::vector<BigScalar> c = p.coefficients();
  const std::size_t n = c.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t k = n - 1; k > i; --k) c[k - 1] += shift * c[k];
  }
  return NumPoly(std::move(c));
}

// ---- Q(i)[E][x] -------------------------------------------------------

EPoly content(const Poly& p) {
  EPoly g;
  for (const auto& c : p.coefficients()) {
    g = g.is_zero() ? make_monic(c) : gcd_exact(g, c);
    if (g.degree() == 0 && !g.is_zero()) return EPoly(BigScalar(1));
  }
  return g;
}

Poly divide_coefficients(const Poly& p, const EPoly& d) {
  return p.map([&](const EPoly& c) {
    auto [q, r] = divmod(c, d);
    if (!r.is_zero()) throw std::logic_error("inexact coefficient division");
    return q;
  });
}

Poly pseudo_remainder(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::domain_error("pseudo-remainder by zero");
  if (a.degree() < b.degree()) return a;
  const EPoly& lcb = b.leading();
  const int db = b.degree();
  std::vector<EPoly> r = a.coefficients();
  int e = a.degree() - db + 1;
  while (!r.empty() && static_cast<int>(r.size()) - 1 >= db) {
    const std::size_t k = r.size() - 1;
    const EPoly lr = r.back();
    for (auto& c : r) c *= lcb;
    for (int j = 0; j <= db; ++j) r[k - db + j] -= lr * b.coefficients()[j];
    r.pop_back();
    while (!r.empty() && r.back().is_zero()) r.pop_back();
    --e;
  }
  Poly out(std::move(r));
  if (e > 0) out *= lcb.pow(static_cast<unsigned>(e));
  return out;
}

namespace {

Poly primitive_part(const Poly& p) {
  if (p.is_zero()) return p;
  const EPoly c = content(p);
  return c == EPoly(BigScalar(1)) ? p : divide_coefficients(p, c);
}

}  // namespace

Poly gcd_exact(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const EPoly cg = gcd_exact(content(a), content(b));
  Poly pa = primitive_part(a);
  Poly pb = primitive_part(b);
  if (pa.degree() < pb.degree()) std::swap(pa, pb);
  while (!pb.is_zero()) {
    if (pb.degree() == 0) return Poly(cg);
    Poly r = pseudo_remainder(pa, pb);
    pa = std::move(pb);
    pb = primitive_part(r);
  }
  return primitive_part(pa) * cg;
}

Poly divide_exact(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::domain_error("division by zero polynomial");
  if (a.is_zero()) return a;
  if (a.degree() < b.degree()) throw std::logic_error("inexact polynomial division");
  std::vector<EPoly> r = a.coefficients();
  const int db = b.degree();
  std::vector<EPoly> q(r.size() - static_cast<std::size_t>(db));
  const EPoly& lcb = b.leading();
  for (std::size_t k = r.size(); k-- > static_cast<std::size_t>(db);) {
    if (r[k].is_zero()) continue;
    auto [f, rem] = divmod(r[k], lcb);
    if (!rem.is_zero()) throw std::logic_error("inexact polynomial division");
    q[k - static_cast<std::size_t>(db)] = f;
    for (int j = 0; j <= db; ++j) r[k - static_cast<std::size_t>(db) + static_cast<std::size_t>(j)] -= f * b.coefficients()[static_cast<std::size_t>(j)];
  }
  for (const auto& c : r) {
    if (!c.is_zero()) throw std::logic_error("inexact polynomial division");
  }
  return Poly(std::move(q));
}

}  // namespace aim::numcore
