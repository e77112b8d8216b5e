#include "aim/numcore/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aim::numcore {

namespace {

using boost::multiprecision::mpfr_float;

void set_from_rational(Real& r, const Rational& q, unsigned bits) {
  r = make_real(bits);
  mpfr_set_q(r.backend().data(), q.backend().data(), MPFR_RNDN);
}

Real with_bits(const Real& x, unsigned bits) {
  Real r = make_real(bits);
  mpfr_set(r.backend().data(), x.backend().data(), MPFR_RNDN);
  return r;
}

bool exact_integer_sqrt(const Integer& n, Integer& root) {
  if (n < 0) return false;
  root = boost::multiprecision::sqrt(n);
  return root * root == n;
}

}  // namespace

unsigned digits10_for_bits(unsigned bits) {
  // boost maps d digits to 1 + d*1000/301 bits.
  return std::max(1u, (bits * 301u + 999u) / 1000u);
}

Real make_real(unsigned bits) {
  Real r;
  r.precision(digits10_for_bits(std::max(bits, kMinPrecision)));
  r = 0;
  return r;
}

Real make_real(const Rational& q, unsigned bits) {
  Real r;
  set_from_rational(r, q, bits);
  return r;
}

Real real_pi(unsigned bits) {
  Real r = make_real(bits);
  mpfr_const_pi(r.backend().data(), MPFR_RNDN);
  return r;
}

PrecisionGuard::PrecisionGuard(unsigned bits) : saved_(Real::default_precision()) {
  Real::default_precision(digits10_for_bits(bits));
}

PrecisionGuard::~PrecisionGuard() { Real::default_precision(saved_); }

std::string decimal_string(const Real& x, int sig) {
  if (boost::multiprecision::isnan(x)) return "nan";
  if (boost::multiprecision::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0) return "0";
  sig = std::max(sig, 1);
  mpfr_exp_t e10 = 0;
  char* raw = mpfr_get_str(nullptr, &e10, 10, static_cast<size_t>(sig), x.backend().data(), MPFR_RNDZ);
  std::string digits(raw);
  mpfr_free_str(raw);
  std::string sign;
  if (!digits.empty() && digits[0] == '-') {
    sign = "-";
    digits.erase(0, 1);
  }
  // value = 0.d1d2d3... * 10^e10
  while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
  const long exp10 = static_cast<long>(e10);
  std::string out;
  if (exp10 > 0 && exp10 <= 30) {
    if (static_cast<long>(digits.size()) <= exp10) {
      out = digits + std::string(static_cast<size_t>(exp10) - digits.size(), '0');
    } else {
      out = digits.substr(0, static_cast<size_t>(exp10)) + "." + digits.substr(static_cast<size_t>(exp10));
    }
  } else if (exp10 <= 0 && exp10 > -6) {
    out = "0." + std::string(static_cast<size_t>(-exp10), '0') + digits;
  } else {
    out = digits.substr(0, 1);
    if (digits.size() > 1) out += "." + digits.substr(1);
    out += "e" + std::to_string(exp10 - 1);
  }
  return sign + out;
}

bool is_zero(const Real& x) { return x == 0; }

Real pow2(long e, unsigned bits) {
  Real r = make_real(bits);
  mpfr_set_ui_2exp(r.backend().data(), 1, e, MPFR_RNDN);
  return r;
}

BigScalar BigScalar::from_float(Real re, Real im, unsigned bits) {
  bits = std::max(bits, kMinPrecision);
  return BigScalar(Float{with_bits(re, bits), with_bits(im, bits), bits});
}

BigScalar BigScalar::from_float(Real re, unsigned bits) {
  return from_float(std::move(re), make_real(bits), bits);
}

BigScalar BigScalar::from_double(double v, unsigned bits) {
  Real r = make_real(bits);
  mpfr_set_d(r.backend().data(), v, MPFR_RNDN);
  return from_float(r, bits);
}

BigScalar BigScalar::pi(unsigned bits) { return from_float(real_pi(bits), bits); }

BigScalar BigScalar::infinity(unsigned bits) {
  Real r = make_real(bits);
  mpfr_set_inf(r.backend().data(), 1);
  return from_float(r, bits);
}

BigScalar::Float BigScalar::promote(const Exact& e, unsigned bits) {
  Float f{make_real(bits), make_real(bits), bits};
  set_from_rational(f.re, e.re, bits);
  set_from_rational(f.im, e.im, bits);
  return f;
}

unsigned BigScalar::precision() const { return is_exact() ? 0 : as_float().bits; }

bool BigScalar::is_zero() const {
  if (auto* e = std::get_if<Exact>(&value_)) return e->re == 0 && e->im == 0;
  const auto& f = as_float();
  return f.re == 0 && f.im == 0;
}

bool BigScalar::is_real() const {
  if (auto* e = std::get_if<Exact>(&value_)) return e->im == 0;
  return as_float().im == 0;
}

bool BigScalar::is_finite() const {
  if (is_exact()) return true;
  const auto& f = as_float();
  return boost::multiprecision::isfinite(f.re) && boost::multiprecision::isfinite(f.im);
}

const Rational& BigScalar::exact_re() const { return std::get<Exact>(value_).re; }
const Rational& BigScalar::exact_im() const { return std::get<Exact>(value_).im; }

Real BigScalar::re(unsigned bits) const {
  if (auto* e = std::get_if<Exact>(&value_)) return make_real(e->re, bits);
  return as_float().re;
}

Real BigScalar::im(unsigned bits) const {
  if (auto* e = std::get_if<Exact>(&value_)) return make_real(e->im, bits);
  return as_float().im;
}

double BigScalar::re_double() const {
  if (auto* e = std::get_if<Exact>(&value_)) return e->re.convert_to<double>();
  return as_float().re.convert_to<double>();
}

double BigScalar::im_double() const {
  if (auto* e = std::get_if<Exact>(&value_)) return e->im.convert_to<double>();
  return as_float().im.convert_to<double>();
}

std::complex<double> BigScalar::to_complex_double() const { return {re_double(), im_double()}; }

BigScalar BigScalar::to_float(unsigned bits) const {
  bits = std::max(bits, kMinPrecision);
  if (auto* e = std::get_if<Exact>(&value_)) return BigScalar(promote(*e, bits));
  const auto& f = as_float();
  if (f.bits == bits) return *this;
  return BigScalar(Float{with_bits(f.re, bits), with_bits(f.im, bits), bits});
}

BigScalar& BigScalar::operator+=(const BigScalar& o) {
  if (is_exact() && o.is_exact()) {
    auto& a = std::get<Exact>(value_);
    const auto& b = std::get<Exact>(o.value_);
    a.re += b.re;
    a.im += b.im;
    return *this;
  }
  const unsigned bits = combined_precision(*this, o, kDefaultPrecision);
  BigScalar rhs = o.to_float(bits);
  *this = to_float(bits);
  auto& a = std::get<Float>(value_);
  const auto& b = rhs.as_float();
  a.re += b.re;
  if (!(b.im == 0)) a.im += b.im;
  return *this;
}

BigScalar& BigScalar::operator-=(const BigScalar& o) { return *this += -o; }

BigScalar& BigScalar::operator*=(const BigScalar& o) {
  if (is_exact() && o.is_exact()) {
    auto& a = std::get<Exact>(value_);
    const auto& b = std::get<Exact>(o.value_);
    if (a.im == 0 && b.im == 0) {
      a.re *= b.re;
      return *this;
    }
    Rational re = a.re * b.re - a.im * b.im;
    Rational im = a.re * b.im + a.im * b.re;
    a.re = std::move(re);
    a.im = std::move(im);
    return *this;
  }
  const unsigned bits = combined_precision(*this, o, kDefaultPrecision);
  BigScalar rhs = o.to_float(bits);
  *this = to_float(bits);
  auto& a = std::get<Float>(value_);
  const auto& b = rhs.as_float();
  if (a.im == 0 && b.im == 0) {
    a.re *= b.re;
    return *this;
  }
  Real re = a.re * b.re - a.im * b.im;
  Real im = a.re * b.im + a.im * b.re;
  a.re = std::move(re);
  a.im = std::move(im);
  return *this;
}

BigScalar& BigScalar::operator/=(const BigScalar& o) {
  if (o.is_exact() && o.is_zero()) throw std::domain_error("division by exact zero");
  if (is_exact() && o.is_exact()) {
    auto& a = std::get<Exact>(value_);
    const auto& b = std::get<Exact>(o.value_);
    if (b.im == 0) {
      a.re /= b.re;
      a.im /= b.re;
      return *this;
    }
    const Rational d = b.re * b.re + b.im * b.im;
    Rational re = (a.re * b.re + a.im * b.im) / d;
    Rational im = (a.im * b.re - a.re * b.im) / d;
    a.re = std::move(re);
    a.im = std::move(im);
    return *this;
  }
  const unsigned bits = combined_precision(*this, o, kDefaultPrecision);
  BigScalar rhs = o.to_float(bits);
  *this = to_float(bits);
  auto& a = std::get<Float>(value_);
  const auto& b = rhs.as_float();
  if (b.im == 0) {
    a.re /= b.re;
    if (!(a.im == 0)) a.im /= b.re;
    return *this;
  }
  const Real d = b.re * b.re + b.im * b.im;
  Real re = (a.re * b.re + a.im * b.im) / d;
  Real im = (a.im * b.re - a.re * b.im) / d;
  a.re = std::move(re);
  a.im = std::move(im);
  return *this;
}

BigScalar BigScalar::operator-() const {
  BigScalar r = *this;
  if (auto* e = std::get_if<Exact>(&r.value_)) {
    e->re = -e->re;
    e->im = -e->im;
  } else {
    auto& f = std::get<Float>(r.value_);
    f.re = -f.re;
    f.im = -f.im;
  }
  return r;
}

bool operator==(const BigScalar& a, const BigScalar& b) {
  if (a.is_exact() && b.is_exact()) {
    return a.exact_re() == b.exact_re() && a.exact_im() == b.exact_im();
  }
  const unsigned bits = combined_precision(a, b, kDefaultPrecision);
  return a.re(bits) == b.re(bits) && a.im(bits) == b.im(bits);
}

namespace {

std::string rational_text(const Rational& q) {
  if (boost::multiprecision::denominator(q) == 1) return boost::multiprecision::numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

}  // namespace

std::string BigScalar::to_string(int digits) const {
  if (auto* e = std::get_if<Exact>(&value_)) {
    if (e->im == 0) {
      const std::string t = rational_text(e->re);
      return (denominator(e->re) == 1 && e->re >= 0) ? t : "(" + t + ")";
    }
    std::string out = "(";
    if (e->re != 0) out += rational_text(e->re) + (e->im > 0 ? "+" : "");
    out += rational_text(e->im) + "*i)";
    return out;
  }
  const auto& f = as_float();
  const int d = digits > 0 ? digits : static_cast<int>(digits10_for_bits(f.bits)) + 2;
  if (f.im == 0) {
    const std::string t = decimal_string(f.re, d);
    return t[0] == '-' ? "(" + t + ")" : t;
  }
  std::string out = "(";
  if (!(f.re == 0)) out += decimal_string(f.re, d) + (f.im > 0 ? "+" : "");
  out += decimal_string(f.im, d) + "*i)";
  return out;
}

bool is_zero(const BigScalar& z) { return z.is_zero(); }

BigScalar conj(const BigScalar& z) {
  if (z.is_exact()) return BigScalar(z.exact_re(), -z.exact_im());
  const unsigned b = z.precision();
  return BigScalar::from_float(z.re(b), -z.im(b), b);
}

BigScalar norm(const BigScalar& z) {
  if (z.is_exact()) return BigScalar(z.exact_re() * z.exact_re() + z.exact_im() * z.exact_im());
  const unsigned b = z.precision();
  const Real re = z.re(b), im = z.im(b);
  return BigScalar::from_float(re * re + im * im, b);
}

Real abs_real(const BigScalar& z, unsigned bits) {
  const unsigned b = z.is_exact() ? bits : z.precision();
  Real re = z.re(b), im = z.im(b);
  if (im == 0) return boost::multiprecision::abs(re);
  Real r = make_real(b);
  mpfr_hypot(r.backend().data(), re.backend().data(), im.backend().data(), MPFR_RNDN);
  return r;
}

BigScalar abs(const BigScalar& z, unsigned bits) {
  if (z.is_exact() && z.exact_im() == 0) return BigScalar(boost::multiprecision::abs(z.exact_re()));
  if (z.is_exact()) {
    Rational root;
    if (exact_rational_sqrt(z.exact_re() * z.exact_re() + z.exact_im() * z.exact_im(), root)) {
      return BigScalar(root);
    }
  }
  const unsigned b = z.is_exact() ? bits : z.precision();
  return BigScalar::from_float(abs_real(z, b), b);
}

Real arg_real(const BigScalar& z, unsigned bits) {
  const unsigned b = z.is_exact() ? bits : z.precision();
  const Real re = z.re(b), im = z.im(b);
  Real r = make_real(b);
  mpfr_atan2(r.backend().data(), im.backend().data(), re.backend().data(), MPFR_RNDN);
  return r;
}

bool exact_rational_sqrt(const Rational& q, Rational& root) {
  if (q < 0) return false;
  Integer n, d;
  if (!exact_integer_sqrt(Integer(numerator(q)), n)) return false;
  if (!exact_integer_sqrt(Integer(denominator(q)), d)) return false;
  root = Rational(n, d);
  return true;
}

BigScalar sqrt(const BigScalar& z, unsigned bits) {
  if (z.is_exact()) {
    const Rational& a = z.exact_re();
    const Rational& b = z.exact_im();
    Rational root;
    if (b == 0) {
      if (exact_rational_sqrt(a, root)) return BigScalar(root);
      if (exact_rational_sqrt(-a, root)) return BigScalar(Rational(0), root);
    } else {
      // (p + qi)^2 = a + bi with p = sqrt((a + |z|)/2), q = b/(2p)
      Rational m;
      if (exact_rational_sqrt(a * a + b * b, m)) {
        Rational p;
        if (exact_rational_sqrt((a + m) / 2, p) && p != 0) return BigScalar(p, b / (2 * p));
      }
    }
  }
  const unsigned b = z.is_exact() ? bits : z.precision();
  const Real re = z.re(b), im = z.im(b);
  if (im == 0 && re >= 0) return BigScalar::from_float(boost::multiprecision::sqrt(re), b);
  if (im == 0) return BigScalar::from_float(make_real(b), boost::multiprecision::sqrt(-re), b);
  // principal root: sqrt((|z|+re)/2) + i sign(im) sqrt((|z|-re)/2)
  const Real m = abs_real(z, b);
  Real p = boost::multiprecision::sqrt((m + re) / 2);
  Real q = boost::multiprecision::sqrt((m - re) / 2);
  if (im < 0) q = -q;
  return BigScalar::from_float(p, q, b);
}

BigScalar exp(const BigScalar& z, unsigned bits) {
  if (z.is_exact() && z.is_zero()) return BigScalar(1);
  const unsigned b = z.is_exact() ? bits : z.precision();
  const Real re = z.re(b), im = z.im(b);
  const Real m = boost::multiprecision::exp(re);
  if (im == 0) return BigScalar::from_float(m, b);
  return BigScalar::from_float(m * boost::multiprecision::cos(im), m * boost::multiprecision::sin(im), b);
}

BigScalar log(const BigScalar& z, unsigned bits) {
  if (z.is_exact() && z.is_zero()) throw std::domain_error("log of zero");
  const unsigned b = z.is_exact() ? bits : z.precision();
  const Real re = z.re(b), im = z.im(b);
  if (im == 0 && re > 0) return BigScalar::from_float(boost::multiprecision::log(re), b);
  return BigScalar::from_float(boost::multiprecision::log(abs_real(z, b)), arg_real(z, b), b);
}

BigScalar cos(const BigScalar& z, unsigned bits) {
  const unsigned b = z.is_exact() ? bits : z.precision();
  const Real re = z.re(b), im = z.im(b);
  if (im == 0) return BigScalar::from_float(boost::multiprecision::cos(re), b);
  // cos(a+bi) = cos a cosh b - i sin a sinh b
  return BigScalar::from_float(boost::multiprecision::cos(re) * boost::multiprecision::cosh(im),
                               -boost::multiprecision::sin(re) * boost::multiprecision::sinh(im), b);
}

BigScalar sin(const BigScalar& z, unsigned bits) {
  const unsigned b = z.is_exact() ? bits : z.precision();
  const Real re = z.re(b), im = z.im(b);
  if (im == 0) return BigScalar::from_float(boost::multiprecision::sin(re), b);
  return BigScalar::from_float(boost::multiprecision::sin(re) * boost::multiprecision::cosh(im),
                               boost::multiprecision::cos(re) * boost::multiprecision::sinh(im), b);
}

BigScalar pow(const BigScalar& z, long k) {
  if (k < 0) return BigScalar(1) / pow(z, -k);
  BigScalar result(1);
  BigScalar base = z;
  while (k > 0) {
    if (k & 1) result *= base;
    k >>= 1;
    if (k > 0) base *= base;
  }
  return result;
}

BigScalar pow(const BigScalar& z, const BigScalar& w, unsigned bits) {
  if (w.is_exact() && w.exact_im() == 0 && denominator(w.exact_re()) == 1) {
    const Integer& n = numerator(w.exact_re());
    if (boost::multiprecision::abs(n) < Integer(1) << 30) return pow(z, n.convert_to<long>());
  }
  if (z.is_zero()) return z.is_exact() ? BigScalar(0) : BigScalar::from_float(make_real(z.precision()), z.precision());
  const unsigned b = combined_precision(z, w, bits);
  return exp(w * log(z, b), b);
}

unsigned combined_precision(const BigScalar& a, const BigScalar& b, unsigned fallback) {
  const unsigned pa = a.precision(), pb = b.precision();
  if (pa == 0 && pb == 0) return fallback;
  if (pa == 0) return pb;
  if (pb == 0) return pa;
  return std::min(pa, pb);
}

}  // namespace aim::numcore
