#pragma once

#include "aim/engine/aim_engine.hpp"
#include "aim/numcore/roots.hpp"

#include <functional>
#include <memory>

namespace aim::engine {

using numcore::NumPoly;
using numcore::Real;

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ClosedFormFactor {
  BigScalar root;
  BigScalar exponent;
};

/// y(x) = exp(p(x)) * prod (x - x_j)^(a_j) * exp(R(x)), principal branch.
struct ClosedForm {
  NumPoly exp_poly;
  /// Present only when the integrand had poles of order two or more.
  std::optional<ParamRatFun> exp_rational;
  std::vector<ClosedFormFactor> factors;
  /// Every pole of the integrand, including those with zero residue.
  std::vector<BigScalar> singularities;
  unsigned bits = numcore::kDefaultPrecision;

  BigScalar value(const BigScalar& x) const;
  /// y'/y
  BigScalar log_derivative(const BigScalar& x) const;
  /// (y'/y)'
  BigScalar log_derivative_prime(const BigScalar& x) const;
  BigScalar derivative(const BigScalar& x) const { return value(x) * log_derivative(x); }
};

/// exp(integral of f) with f rational in x, built from its partial fractions.
ClosedForm exp_integral(const ParamRatFun& f, unsigned bits);

/// y = exp(-integral of alpha).
ClosedForm closed_form_from_alpha(const ParamRatFun& alpha, unsigned bits);

/// Adaptive Gauss-Legendre on straight segments of the complex plane.
class Quadrature {
 public:
  using Integrand = std::function<BigScalar(const BigScalar&)>;

  explicit Quadrature(unsigned bits, int points = 20);
  /// Throws QuadratureError when bisection depth runs out.
  BigScalar integrate(const Integrand& f, const BigScalar& a, const BigScalar& b) const;
  unsigned bits() const { return bits_; }

 private:
  BigScalar rule(const Integrand& f, const BigScalar& a, const BigScalar& b) const;
  BigScalar adapt(const Integrand& f, const BigScalar& a, const BigScalar& b, const BigScalar& whole, int depth) const;

  unsigned bits_;
  std::vector<Real> nodes_;
  std::vector<Real> weights_;
  Real tol_;
};

/// z(x) = y(x) * integral_{x0}^{x} G(t) / y(t)^2 dt with G = exp(integral lambda0).
class SecondSolution {
 public:
  SecondSolution(ClosedForm y, ClosedForm g, BigScalar x0, unsigned bits);
  BigScalar operator()(const BigScalar& x) const;
  BigScalar integral(const BigScalar& x) const;
  const ClosedForm& weight() const { return g_; }
  const BigScalar& x0() const { return x0_; }

 private:
  void check_path(const BigScalar& x) const;
  ClosedForm y_;
  ClosedForm g_;
  BigScalar x0_;
  std::shared_ptr<const Quadrature> quad_;
};

struct SolutionPair {
  ClosedForm y;
  SecondSolution z;
  /// y z' - y' z at x0, with z' from a central difference of the quadrature.
  BigScalar wronskian_sample;
};

/// y_n and z_n for the rung `state` of a ladder with E-free coefficients.
SolutionPair build_solutions(const AimProblem& problem, const AimState& state, const BigScalar& x0);

}  // namespace aim::engine
