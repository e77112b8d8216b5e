#pragma once

#include "aim/numcore/scalar.hpp"

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace aim::numcore {

namespace detail {
template <class T>
bool coeff_zero(const T& c) {
  return is_zero(c);
}
}  // namespace detail

/// Dense univariate polynomial, coefficients stored low to high with no
/// trailing zeros. The zero polynomial has an empty coefficient list.
template <class C>
class Polynomial {
 public:
  using coeff_type = C;

  Polynomial() = default;
  explicit Polynomial(C c) {
    if (!detail::coeff_zero(c)) c_.push_back(std::move(c));
  }
  explicit Polynomial(std::vector<C> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Polynomial monomial(C c, std::size_t k) {
    if (detail::coeff_zero(c)) return {};
    std::vector<C> v(k + 1, C{});
    v[k] = std::move(c);
    return Polynomial(std::move(v));
  }

  bool is_zero() const { return c_.empty(); }
  /// Degree; 0 for the zero polynomial (check is_zero() to tell apart).
  int degree() const { return c_.empty() ? 0 : static_cast<int>(c_.size()) - 1; }
  std::size_t size() const { return c_.size(); }
  bool is_constant() const { return c_.size() <= 1; }

  const std::vector<C>& coefficients() const { return c_; }
  /// Coefficient of x^k; zero beyond the degree.
  C coeff(std::size_t k) const { return k < c_.size() ? c_[k] : C{}; }
  const C& leading() const {
    if (c_.empty()) throw std::logic_error("leading coefficient of zero polynomial");
    return c_.back();
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<C> d;
    d.reserve(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(c_[k] * C(static_cast<long>(k)));
    return Polynomial(std::move(d));
  }

  /// Horner evaluation at a point of any type closed under C-multiplication.
  template <class X>
  X evaluate(const X& x) const {
    if (c_.empty()) return X{};
    X acc = X(c_.back());
    for (std::size_t k = c_.size() - 1; k-- > 0;) {
      acc *= x;
      acc += X(c_[k]);
    }
    return acc;
  }

  template <class F>
  auto map(F&& f) const -> Polynomial<decltype(f(std::declval<const C&>()))> {
    using D = decltype(f(std::declval<const C&>()));
    std::vector<D> out;
    out.reserve(c_.size());
    for (const auto& c : c_) out.push_back(f(c));
    return Polynomial<D>(std::move(out));
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), C{});
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), C{});
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
  }
  Polynomial& operator*=(const C& s) {
    if (detail::coeff_zero(s)) {
      c_.clear();
      return *this;
    }
    for (auto& c : c_) c *= s;
    trim();
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) {
    for (auto& c : a.c_) c = -c;
    return a;
  }
  friend Polynomial operator*(Polynomial a, const C& s) { return a *= s; }
  friend Polynomial operator*(const C& s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.c_.empty() || b.c_.empty()) return {};
    std::vector<C> out(a.c_.size() + b.c_.size() - 1, C{});
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (detail::coeff_zero(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) {
        if (detail::coeff_zero(b.c_[j])) continue;
        out[i + j] += a.c_[i] * b.c_[j];
      }
    }
    return Polynomial(std::move(out));
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.c_.size() != b.c_.size()) return false;
    for (std::size_t k = 0; k < a.c_.size(); ++k) {
      if (!(a.c_[k] == b.c_[k])) return false;
    }
    return true;
  }

  Polynomial pow(unsigned k) const {
    Polynomial result(C(1L));
    Polynomial base = *this;
    while (k > 0) {
      if (k & 1u) result *= base;
      k >>= 1u;
      if (k > 0) base *= base;
    }
    return result;
  }

 private:
  void trim() {
    while (!c_.empty() && detail::coeff_zero(c_.back())) c_.pop_back();
  }
  std::vector<C> c_;
};

template <class C>
bool is_zero(const Polynomial<C>& p) {
  return p.is_zero();
}

/// Polynomial in the spectral parameter E.
using EPoly = Polynomial<BigScalar>;
/// Polynomial in x with numeric coefficients.
using NumPoly = Polynomial<BigScalar>;
/// Polynomial in x whose coefficients are polynomials in E.
using Poly = Polynomial<EPoly>;

/// x^k with unit coefficient.
NumPoly num_monomial(std::size_t k);
Poly lift(const NumPoly& p);
/// True when no coefficient depends on E.
bool is_E_free(const Poly& p);
/// Drops E; throws if p depends on E.
NumPoly to_numeric(const Poly& p);
Poly substitute_E(const Poly& p, const BigScalar& E);
bool is_exact(const NumPoly& p);
bool is_exact(const Poly& p);
NumPoly to_float(const NumPoly& p, unsigned bits);
Poly to_float(const Poly& p, unsigned bits);
/// Lowest float precision among coefficients; 0 if all exact.
unsigned precision_of(const NumPoly& p);
unsigned precision_of(const Poly& p);

/// Division with remainder over the coefficient field.
std::pair<NumPoly, NumPoly> divmod(const NumPoly& a, const NumPoly& b);
NumPoly make_monic(const NumPoly& p);
/// Exact gcd for exact inputs, monic.
NumPoly gcd_exact(const NumPoly& a, const NumPoly& b);
/// Approximate gcd: remainders below tol relative to the dividend norm are zero.
NumPoly gcd_approx(const NumPoly& a, const NumPoly& b, const Real& tol);
/// Max modulus of the coefficients.
Real coeff_norm(const NumPoly& p, unsigned bits);
/// Coefficients of p(x + shift).
NumPoly taylor_shift(const NumPoly& p, const BigScalar& shift);

/// Pseudo-remainder of a by b over Q[E]: lc(b)^(deg a - deg b + 1) a = q b + r.
Poly pseudo_remainder(const Poly& a, const Poly& b);
/// gcd of the E-coefficients; monic in E.
EPoly content(const Poly& p);
/// Exact division of every coefficient by an EPoly factor.
Poly divide_coefficients(const Poly& p, const EPoly& d);
/// Exact gcd in Q(i)[E][x] via primitive remainder sequences.
Poly gcd_exact(const Poly& a, const Poly& b);
/// Exact division a / b in Q(i)[E][x]; throws if inexact.
Poly divide_exact(const Poly& a, const Poly& b);

}  // namespace aim::numcore
