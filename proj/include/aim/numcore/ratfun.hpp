#pragma once

#include "aim/numcore/polynomial.hpp"

#include <string>

namespace aim::numcore {

/// Rational function num(x, E) / den(x, E), kept reduced and normalized.
///
/// Normalization: the leading x-coefficient of den has leading E-coefficient
/// one (so den is monic in x whenever it does not depend on E). Exact values
/// are reduced by exact gcd; float values by approximate gcd with tolerance
/// 2^(-prec/2) when the denominator is E-free.
class ParamRatFun {
 public:
  ParamRatFun() : den_(EPoly(BigScalar(1))) {}
  ParamRatFun(const BigScalar& c);
  explicit ParamRatFun(Poly num);
  ParamRatFun(Poly num, Poly den);

  static ParamRatFun x();
  static ParamRatFun E();
  static ParamRatFun from_numeric(const NumPoly& num, const NumPoly& den = NumPoly(BigScalar(1)));

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.degree() == 0; }
  /// No dependence on x or E.
  bool is_constant() const;
  bool depends_on_x() const { return num_.degree() > 0 || den_.degree() > 0; }
  bool has_E() const { return !is_E_free(num_) || !is_E_free(den_); }
  bool is_exact() const { return numcore::is_exact(num_) && numcore::is_exact(den_); }
  /// Lowest float precision among coefficients; 0 if exact.
  unsigned precision() const;
  /// Value of a constant function.
  BigScalar constant_value() const;

  ParamRatFun derivative() const;
  ParamRatFun substitute_E(const BigScalar& E) const;
  ParamRatFun to_float(unsigned bits) const;
  /// Numerator and denominator as numeric polynomials; requires !has_E().
  NumPoly numeric_num() const { return to_numeric(num_); }
  NumPoly numeric_den() const { return to_numeric(den_); }

  /// Value at (x, E). Throws std::domain_error at a zero of the denominator.
  BigScalar evaluate(const BigScalar& x, const BigScalar& E = BigScalar(0)) const;

  ParamRatFun& operator+=(const ParamRatFun& o);
  ParamRatFun& operator-=(const ParamRatFun& o);
  ParamRatFun& operator*=(const ParamRatFun& o);
  ParamRatFun& operator/=(const ParamRatFun& o);
  friend ParamRatFun operator+(ParamRatFun a, const ParamRatFun& b) { return a += b; }
  friend ParamRatFun operator-(ParamRatFun a, const ParamRatFun& b) { return a -= b; }
  friend ParamRatFun operator*(ParamRatFun a, const ParamRatFun& b) { return a *= b; }
  friend ParamRatFun operator/(ParamRatFun a, const ParamRatFun& b) { return a /= b; }
  ParamRatFun operator-() const;
  ParamRatFun pow(long k) const;

  /// Structural equality of the canonical forms.
  friend bool operator==(const ParamRatFun& a, const ParamRatFun& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

 private:
  struct Unreduced {};
  ParamRatFun(Poly num, Poly den, Unreduced) : num_(std::move(num)), den_(std::move(den)) {}
  void reduce();
  void normalize();

  Poly num_;
  Poly den_;
};

enum class CombineOp { add, sub, mul, div };

ParamRatFun differentiate(const ParamRatFun& r);
ParamRatFun ratfun_combine(const ParamRatFun& a, const ParamRatFun& b, CombineOp op);

/// Cross-multiplied equality a.num*b.den == b.num*a.den, exact for exact inputs.
bool equivalent(const ParamRatFun& a, const ParamRatFun& b);

/// Grammar-compatible text for the expression parser.
std::string to_string(const Poly& p);
std::string to_string(const ParamRatFun& r);

}  // namespace aim::numcore
