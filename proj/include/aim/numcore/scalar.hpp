#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <complex>
#include <string>
#include <variant>

namespace aim::numcore {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;
using Real = boost::multiprecision::mpfr_float;

inline constexpr unsigned kDefaultPrecision = 256;
inline constexpr unsigned kMinPrecision = 64;

/// Decimal digits boost needs to hold at least `bits` binary digits.
unsigned digits10_for_bits(unsigned bits);

/// A Real zero carrying `bits` of precision.
Real make_real(unsigned bits);
Real make_real(const Rational& q, unsigned bits);
Real real_pi(unsigned bits);
/// 2^e carrying `bits` of precision.
Real pow2(long e, unsigned bits);

/// Sets the boost default precision for the lifetime of the guard.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned bits);
  ~PrecisionGuard();
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned saved_;
};

/// Formats `x` with `sig` significant digits, rounding toward zero.
/// Fixed notation for moderate exponents, otherwise d.ddde+X.
std::string decimal_string(const Real& x, int sig);

/// Complex number that is either an exact Gaussian rational or a
/// multiprecision float pair carrying an explicit precision in bits.
///
/// Mixing exact and float operands promotes to float at the float
/// operand's precision; two floats combine at the smaller precision.
class BigScalar {
 public:
  BigScalar() = default;
  BigScalar(int v) : value_(Exact{Rational(v), Rational(0)}) {}
  BigScalar(long v) : value_(Exact{Rational(v), Rational(0)}) {}
  BigScalar(Rational re, Rational im = Rational(0))
      : value_(Exact{std::move(re), std::move(im)}) {}

  static BigScalar from_float(Real re, Real im, unsigned bits);
  static BigScalar from_float(Real re, unsigned bits);
  static BigScalar from_double(double v, unsigned bits);
  static BigScalar imaginary_unit() { return BigScalar(Rational(0), Rational(1)); }
  static BigScalar pi(unsigned bits);
  /// Positive infinity in float form; used to mark singular samples.
  static BigScalar infinity(unsigned bits);

  bool is_exact() const { return std::holds_alternative<Exact>(value_); }
  /// Working precision in bits; 0 for exact values.
  unsigned precision() const;
  bool is_zero() const;
  bool is_real() const;
  bool is_finite() const;

  /// Exact parts; only valid when is_exact().
  const Rational& exact_re() const;
  const Rational& exact_im() const;

  Real re(unsigned bits) const;
  Real im(unsigned bits) const;
  double re_double() const;
  double im_double() const;
  std::complex<double> to_complex_double() const;

  BigScalar to_float(unsigned bits) const;

  BigScalar& operator+=(const BigScalar& o);
  BigScalar& operator-=(const BigScalar& o);
  BigScalar& operator*=(const BigScalar& o);
  BigScalar& operator/=(const BigScalar& o);

  friend BigScalar operator+(BigScalar a, const BigScalar& b) { return a += b; }
  friend BigScalar operator-(BigScalar a, const BigScalar& b) { return a -= b; }
  friend BigScalar operator*(BigScalar a, const BigScalar& b) { return a *= b; }
  friend BigScalar operator/(BigScalar a, const BigScalar& b) { return a /= b; }
  BigScalar operator-() const;

  /// Exact comparison for exact pairs, value comparison otherwise.
  friend bool operator==(const BigScalar& a, const BigScalar& b);

  /// Grammar-compatible text. Floats print `digits` significant digits
  /// (0 selects the precision-derived count).
  std::string to_string(int digits = 0) const;

 private:
  struct Exact {
    Rational re;
    Rational im;
  };
  struct Float {
    Real re;
    Real im;
    unsigned bits;
  };
  explicit BigScalar(Float f) : value_(std::move(f)) {}
  static Float promote(const Exact& e, unsigned bits);
  const Float& as_float() const { return std::get<Float>(value_); }

  std::variant<Exact, Float> value_{Exact{}};
};

bool is_zero(const BigScalar& z);
BigScalar conj(const BigScalar& z);
/// Squared modulus; exact when z is exact.
BigScalar norm(const BigScalar& z);
/// |z| as a real float (exact for exact reals).
BigScalar abs(const BigScalar& z, unsigned bits);
Real abs_real(const BigScalar& z, unsigned bits);
Real arg_real(const BigScalar& z, unsigned bits);
/// Exact when z is an exact Gaussian rational with a Gaussian rational root.
BigScalar sqrt(const BigScalar& z, unsigned bits);
BigScalar exp(const BigScalar& z, unsigned bits);
/// Principal branch.
BigScalar log(const BigScalar& z, unsigned bits);
BigScalar cos(const BigScalar& z, unsigned bits);
BigScalar sin(const BigScalar& z, unsigned bits);
BigScalar pow(const BigScalar& z, long k);
/// Principal branch z^w = exp(w log z).
BigScalar pow(const BigScalar& z, const BigScalar& w, unsigned bits);

/// Exact square root of a nonnegative rational, if it exists.
bool exact_rational_sqrt(const Rational& q, Rational& root);

/// Working precision for a pair: min of float precisions, fallback if both exact.
unsigned combined_precision(const BigScalar& a, const BigScalar& b, unsigned fallback);

bool is_zero(const Real& x);

}  // namespace aim::numcore
