#include "aim/engine/solutions.hpp"

#include <cmath>

namespace aim::engine {

using numcore::pow2;

namespace {

/// Integer exponents stay exact; anything else goes through the principal log.
BigScalar power(const BigScalar& z, const BigScalar& w, unsigned bits) {
  if (w.is_exact() && w.exact_im() == 0 && denominator(w.exact_re()) == 1) {
    const numcore::Integer k = numerator(w.exact_re());
    if (abs(k) < 1000000) return numcore::pow(z, k.convert_to<long>());
  }
  return numcore::pow(z, w, bits);
}

}  // namespace

ClosedForm exp_integral(const ParamRatFun& f, unsigned bits) {
  const numcore::PoleDecomposition pd = numcore::partial_fractions(f, bits);
  ClosedForm out;
  out.bits = bits;
  std::vector<BigScalar> p(pd.polynomial_part.size() + 1);
  for (std::size_t k = 0; k < pd.polynomial_part.size(); ++k) {
    p[k + 1] = pd.polynomial_part.coeff(k) / BigScalar(static_cast<long>(k + 1));
  }
  out.exp_poly = NumPoly(std::move(p));
  ParamRatFun rational;
  bool has_rational = false;
  for (const auto& pole : pd.poles) {
    out.singularities.push_back(pole.location);
    if (!pole.residues[0].is_zero()) out.factors.push_back({pole.location, pole.residues[0]});
    for (std::size_t t = 1; t < pole.residues.size(); ++t) {
      if (pole.residues[t].is_zero()) continue;
      // integral of c/(x-a)^(t+1) = -c / (t (x-a)^t)
      const NumPoly lin(std::vector<BigScalar>{-pole.location, BigScalar(1)});
      const BigScalar c = -pole.residues[t] / BigScalar(static_cast<long>(t));
      rational += ParamRatFun::from_numeric(NumPoly(c), lin.pow(static_cast<unsigned>(t)));
      has_rational = true;
    }
  }
  if (has_rational && !rational.is_zero()) out.exp_rational = std::move(rational);
  return out;
}

ClosedForm closed_form_from_alpha(const ParamRatFun& alpha, unsigned bits) { return exp_integral(-alpha, bits); }

BigScalar ClosedForm::value(const BigScalar& x) const {
  BigScalar acc = numcore::exp(exp_poly.evaluate(x), bits);
  for (const auto& f : factors) acc *= power(x - f.root, f.exponent, bits);
  if (exp_rational) acc *= numcore::exp(exp_rational->evaluate(x), bits);
  return acc;
}

BigScalar ClosedForm::log_derivative(const BigScalar& x) const {
  BigScalar acc = exp_poly.derivative().evaluate(x);
  for (const auto& f : factors) acc += f.exponent / (x - f.root);
  if (exp_rational) acc += exp_rational->derivative().evaluate(x);
  return acc;
}

BigScalar ClosedForm::log_derivative_prime(const BigScalar& x) const {
  BigScalar acc = exp_poly.derivative().derivative().evaluate(x);
  for (const auto& f : factors) {
    const BigScalar d = x - f.root;
    acc -= f.exponent / (d * d);
  }
  if (exp_rational) acc += exp_rational->derivative().derivative().evaluate(x);
  return acc;
}

Quadrature::Quadrature(unsigned bits, int points) : bits_(bits) {
  const unsigned wp = bits + 32;
  numcore::PrecisionGuard guard(wp);
  const int n = points;
  for (int i = 1; i <= n; ++i) {
    Real x = numcore::make_real(wp);
    mpfr_set_d(x.backend().data(), std::cos(M_PI * (i - 0.25) / (n + 0.5)), MPFR_RNDN);
    Real dp = numcore::make_real(wp);
    for (int it = 0; it < 100; ++it) {
      Real p0 = numcore::make_real(1, wp), p1 = x;
      for (int k = 2; k <= n; ++k) {
        Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      const Real dx = p1 / dp;
      x -= dx;
      if (abs(dx) < pow2(-static_cast<long>(wp) + 4, wp)) break;
    }
    Real p0 = numcore::make_real(1, wp), p1 = x;
    for (int k = 2; k <= n; ++k) {
      Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1);
    nodes_.push_back(x);
    weights_.push_back(2 / ((1 - x * x) * dp * dp));
  }
  tol_ = pow2(-static_cast<long>(bits / 2), bits);
}

BigScalar Quadrature::rule(const Integrand& f, const BigScalar& a, const BigScalar& b) const {
  const BigScalar half = (b - a) / BigScalar(2);
  const BigScalar mid = (a + b) / BigScalar(2);
  BigScalar acc = BigScalar(0).to_float(bits_);
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const BigScalar node = BigScalar::from_float(nodes_[k], bits_);
    acc += BigScalar::from_float(weights_[k], bits_) * f(mid + half * node);
  }
  return acc * half;
}

BigScalar Quadrature::adapt(const Integrand& f, const BigScalar& a, const BigScalar& b, const BigScalar& whole,
                            int depth) const {
  const BigScalar mid = (a + b) / BigScalar(2);
  const BigScalar left = rule(f, a, mid), right = rule(f, mid, b);
  const BigScalar both = left + right;
  Real scale = numcore::abs_real(both, bits_);
  if (scale < 1) scale = 1;
  if (numcore::abs_real(both - whole, bits_) <= tol_ * scale) return both;
  if (depth >= 40) throw QuadratureError("quadrature did not converge");
  return adapt(f, a, mid, left, depth + 1) + adapt(f, mid, b, right, depth + 1);
}

BigScalar Quadrature::integrate(const Integrand& f, const BigScalar& a, const BigScalar& b) const {
  if (a == b) return BigScalar(0).to_float(bits_);
  return adapt(f, a, b, rule(f, a, b), 0);
}

SecondSolution::SecondSolution(ClosedForm y, ClosedForm g, BigScalar x0, unsigned bits)
    : y_(std::move(y)), g_(std::move(g)), x0_(std::move(x0)), quad_(std::make_shared<Quadrature>(bits)) {}

void SecondSolution::check_path(const BigScalar& x) const {
  const std::complex<double> a = x0_.to_complex_double(), b = x.to_complex_double();
  auto hits = [&](const BigScalar& p) {
    const std::complex<double> c = p.to_complex_double();
    const std::complex<double> d = b - a;
    double t = std::norm(d) == 0 ? 0 : std::real((c - a) * std::conj(d)) / std::norm(d);
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(a + t * d - c) <= 1e-12 * std::max(1.0, std::abs(c));
  };
  for (const auto& p : y_.singularities) {
    if (hits(p)) throw PoleCollision("pole of alpha on the integration path");
  }
  for (const auto& p : g_.singularities) {
    if (hits(p)) throw PoleCollision("pole of lambda0 on the integration path");
  }
}

BigScalar SecondSolution::integral(const BigScalar& x) const {
  check_path(x);
  const auto f = [this](const BigScalar& t) {
    const BigScalar yt = y_.value(t);
    return g_.value(t) / (yt * yt);
  };
  return quad_->integrate(f, x0_, x);
}

BigScalar SecondSolution::operator()(const BigScalar& x) const { return y_.value(x) * integral(x); }

SolutionPair build_solutions(const AimProblem& problem, const AimState& state, const BigScalar& x0) {
  const unsigned bits = problem.bits;
  const ParamRatFun a = alpha(state);
  if (a.has_E() || problem.lambda0.has_E()) throw std::invalid_argument("solutions need E-free coefficients");
  ClosedForm y = closed_form_from_alpha(a, bits);
  ClosedForm g = exp_integral(problem.lambda0, bits);
  const BigScalar x0f = x0.to_float(bits);
  SecondSolution z(y, std::move(g), x0f, bits);
  const BigScalar h = BigScalar::from_float(pow2(-static_cast<long>(bits / 6), bits), bits);
  const BigScalar zp = (z(x0f + h) - z(x0f - h)) / (BigScalar(2) * h);
  const BigScalar w = y.value(x0f) * zp - y.derivative(x0f) * z(x0f);
  return SolutionPair{std::move(y), std::move(z), w};
}

}  // namespace aim::engine
