#include "aim/numcore/ratfun.hpp"

#include <algorithm>

namespace aim::numcore {

namespace {

bool is_unit_poly(const Poly& p) {
  return p.size() == 1 && p.coefficients()[0].size() == 1 && p.coefficients()[0].coefficients()[0] == BigScalar(1);
}

/// Coefficient of E^j, as a polynomial in x.
std::vector<NumPoly> E_slices(const Poly& p) {
  std::size_t width = 0;
  for (const auto& c : p.coefficients()) width = std::max(width, c.size());
  std::vector<std::vector<BigScalar>> cols(width, std::vector<BigScalar>(p.size()));
  for (std::size_t k = 0; k < p.size(); ++k) {
    const auto& c = p.coefficients()[k];
    for (std::size_t j = 0; j < c.size(); ++j) cols[j][k] = c.coefficients()[j];
  }
  std::vector<NumPoly> out;
  out.reserve(width);
  for (auto& col : cols) out.emplace_back(std::move(col));
  return out;
}

Poly from_slices(const std::vector<NumPoly>& slices) {
  std::size_t len = 0;
  for (const auto& s : slices) len = std::max(len, s.size());
  std::vector<std::vector<BigScalar>> rows(len, std::vector<BigScalar>(slices.size()));
  for (std::size_t j = 0; j < slices.size(); ++j) {
    for (std::size_t k = 0; k < slices[j].size(); ++k) rows[k][j] = slices[j].coefficients()[k];
  }
  std::vector<EPoly> coeffs;
  coeffs.reserve(len);
  for (auto& row : rows) coeffs.emplace_back(std::move(row));
  return Poly(std::move(coeffs));
}

NumPoly quotient(const NumPoly& a, const NumPoly& b) { return divmod(a, b).first; }

}  // namespace

ParamRatFun::ParamRatFun(const BigScalar& c) : num_(EPoly(c)), den_(EPoly(BigScalar(1))) {}

ParamRatFun::ParamRatFun(Poly num) : num_(std::move(num)), den_(EPoly(BigScalar(1))) {}

ParamRatFun::ParamRatFun(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
  reduce();
}

ParamRatFun ParamRatFun::x() { return ParamRatFun(Poly::monomial(EPoly(BigScalar(1)), 1)); }

ParamRatFun ParamRatFun::E() { return ParamRatFun(Poly(EPoly::monomial(BigScalar(1), 1))); }

ParamRatFun ParamRatFun::from_numeric(const NumPoly& num, const NumPoly& den) {
  return ParamRatFun(lift(num), lift(den));
}

bool ParamRatFun::is_constant() const {
  return num_.degree() == 0 && den_.degree() == 0 && !has_E();
}

unsigned ParamRatFun::precision() const {
  const unsigned a = precision_of(num_), b = precision_of(den_);
  if (a == 0) return b;
  if (b == 0) return a;
  return std::min(a, b);
}

BigScalar ParamRatFun::constant_value() const {
  if (!is_constant()) throw std::logic_error("not a constant function");
  return num_.coeff(0).coeff(0) / den_.coeff(0).coeff(0);
}

void ParamRatFun::normalize() {
  if (num_.is_zero()) {
    den_ = Poly(EPoly(BigScalar(1)));
    return;
  }
  const BigScalar lead = den_.leading().leading();
  if (lead == BigScalar(1)) return;
  const EPoly inv(BigScalar(1) / lead);
  num_ *= inv;
  den_ *= inv;
}

void ParamRatFun::reduce() {
  if (num_.is_zero()) {
    normalize();
    return;
  }
  if (is_unit_poly(den_)) return;
  if (den_.degree() == 0 && is_E_free(den_)) {
    normalize();
    return;
  }
  const bool exact = is_exact();
  const bool den_E_free = is_E_free(den_);
  if (den_E_free) {
    // gcd with an E-free denominator divides every E-slice of the numerator.
    const NumPoly d = to_numeric(den_);
    std::vector<NumPoly> slices = E_slices(num_);
    NumPoly g = d;
    const unsigned bits = precision() == 0 ? kDefaultPrecision : precision();
    const Real tol = boost::multiprecision::pow(Real(make_real(2, bits)), -static_cast<int>(bits / 2));
    for (const auto& s : slices) {
      if (s.is_zero()) continue;
      g = exact ? gcd_exact(g, s) : gcd_approx(g, s, tol);
      if (g.degree() == 0) break;
    }
    if (g.degree() > 0) {
      for (auto& s : slices) s = quotient(s, g);
      num_ = from_slices(slices);
      den_ = lift(quotient(d, g));
    }
  } else if (exact) {
    const Poly g = gcd_exact(num_, den_);
    if (g.degree() > 0 || !is_E_free(g)) {
      num_ = divide_exact(num_, g);
      den_ = divide_exact(den_, g);
    }
  }
  normalize();
}

ParamRatFun ParamRatFun::derivative() const {
  if (den_.degree() == 0 && is_E_free(den_)) {
    return ParamRatFun(num_.derivative(), den_, Unreduced{});
  }
  Poly n = num_.derivative() * den_ - num_ * den_.derivative();
  Poly d = den_ * den_;
  return ParamRatFun(std::move(n), std::move(d));
}

ParamRatFun ParamRatFun::substitute_E(const BigScalar& E) const {
  return ParamRatFun(numcore::substitute_E(num_, E), numcore::substitute_E(den_, E));
}

ParamRatFun ParamRatFun::to_float(unsigned bits) const {
  return ParamRatFun(numcore::to_float(num_, bits), numcore::to_float(den_, bits), Unreduced{});
}

BigScalar ParamRatFun::evaluate(const BigScalar& x, const BigScalar& E) const {
  const BigScalar d = numcore::substitute_E(den_, E).evaluate(EPoly(x)).coeff(0);
  if (d.is_zero()) throw std::domain_error("evaluation at a pole");
  const BigScalar n = numcore::substitute_E(num_, E).evaluate(EPoly(x)).coeff(0);
  return n / d;
}

ParamRatFun& ParamRatFun::operator+=(const ParamRatFun& o) {
  if (is_unit_poly(den_) && is_unit_poly(o.den_)) {
    num_ += o.num_;
    return *this;
  }
  if (den_ == o.den_) {
    num_ += o.num_;
  } else {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ = den_ * o.den_;
  }
  reduce();
  return *this;
}

ParamRatFun& ParamRatFun::operator-=(const ParamRatFun& o) { return *this += -o; }

ParamRatFun& ParamRatFun::operator*=(const ParamRatFun& o) {
  if (is_unit_poly(den_) && is_unit_poly(o.den_)) {
    num_ *= o.num_;
    return *this;
  }
  num_ *= o.num_;
  den_ *= o.den_;
  reduce();
  return *this;
}

ParamRatFun& ParamRatFun::operator/=(const ParamRatFun& o) {
  if (o.is_zero()) throw std::domain_error("division by identically-zero function");
  num_ *= o.den_;
  den_ *= o.num_;
  reduce();
  return *this;
}

ParamRatFun ParamRatFun::operator-() const { return ParamRatFun(-num_, den_, Unreduced{}); }

ParamRatFun ParamRatFun::pow(long k) const {
  if (k < 0) return ParamRatFun(BigScalar(1)) / pow(-k);
  return ParamRatFun(num_.pow(static_cast<unsigned>(k)), den_.pow(static_cast<unsigned>(k)), Unreduced{});
}

ParamRatFun differentiate(const ParamRatFun& r) { return r.derivative(); }

ParamRatFun ratfun_combine(const ParamRatFun& a, const ParamRatFun& b, CombineOp op) {
  switch (op) {
    case CombineOp::add: return a + b;
    case CombineOp::sub: return a - b;
    case CombineOp::mul: return a * b;
    case CombineOp::div: return a / b;
  }
  throw std::invalid_argument("unknown combine op");
}

bool equivalent(const ParamRatFun& a, const ParamRatFun& b) {
  return (a.num() * b.den() - b.num() * a.den()).is_zero();
}

namespace {

std::string epoly_text(const EPoly& c) {
  if (c.size() == 1) return c.coefficients()[0].to_string();
  std::string out;
  for (std::size_t j = c.size(); j-- > 0;) {
    const BigScalar& s = c.coefficients()[j];
    if (s.is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += s.to_string();
    if (j == 1) out += "*E";
    if (j > 1) out += "*E^" + std::to_string(j);
  }
  return "(" + out + ")";
}

}  // namespace

std::string to_string(const Poly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (std::size_t k = p.size(); k-- > 0;) {
    const EPoly& c = p.coefficients()[k];
    if (c.is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += epoly_text(c);
    if (k == 1) out += "*x";
    if (k > 1) out += "*x^" + std::to_string(k);
  }
  return out;
}

std::string to_string(const ParamRatFun& r) {
  if (r.den().degree() == 0 && is_E_free(r.den()) && r.den().coeff(0).coeff(0) == BigScalar(1)) {
    return to_string(r.num());
  }
  return "(" + to_string(r.num()) + ")/(" + to_string(r.den()) + ")";
}

}  // namespace aim::numcore
