#pragma once

#include "aim/engine/solutions.hpp"

namespace aim::chain {

using engine::AimProblem;
using engine::BigScalar;
using engine::ClosedForm;
using engine::NumPoly;
using engine::ParamRatFun;

/// The level-n perturbed equation y'' - lambda0 y' - s0 y = Delta_n y with its solution y_n.
struct ChainLink {
  AimProblem base;
  int level = 0;
  ParamRatFun perturb;
  ParamRatFun alpha;
  ClosedForm solution;
};

/// Requires E-free coefficients and n >= 1. Throws engine::DegenerateLadder.
ChainLink chain_link(const AimProblem& problem, int n);

/// Links for levels 1..n, sharing one ladder.
std::vector<ChainLink> chain_links(const AimProblem& problem, int n);

/// max over points of |y'' - lambda y' - s y - rhs y| / max(1, |y|), with the
/// derivatives of y taken analytically. Throws engine::PoleCollision when a
/// point sits on a pole.
BigScalar residual(const ParamRatFun& coeffLambda, const ParamRatFun& coeffS, const ParamRatFun& rhs,
                   const ClosedForm& candidate, const std::vector<BigScalar>& points);

BigScalar residual(const ChainLink& link, const std::vector<BigScalar>& points);

/// `count` reproducible pseudo-random points in [lo, hi] carrying `bits` of precision.
std::vector<BigScalar> sample_points(int count, double lo, double hi, unsigned bits, unsigned seed = 1);

struct HermiteChainResult {
  /// delta_m (delta_1 for m = 0) vanished identically.
  bool terminated = false;
  /// Monic degree-m polynomial solution of y'' - mu x y' + m mu y = 0.
  NumPoly polynomial;
  /// Coefficients proportional to those of H_m(sqrt(mu/2) x).
  bool proportional = false;
  /// (H_m(sqrt(mu/2) x) / polynomial)^2 = 4^m (mu/2)^m.
  BigScalar scale_squared;
};

/// Exact ladder on lambda0 = mu x, s0 = -m mu. mu must be an exact positive rational.
HermiteChainResult hermite_chain(const BigScalar& mu, int m);

/// True when delta_level is identically zero on the exact ladder.
bool terminates_at(const AimProblem& problem, int level);

/// Monic polynomial y of degree m with den(alpha) y' + num(alpha) y = 0, by
/// exact elimination. Throws std::runtime_error if none exists.
NumPoly polynomial_solution(const ParamRatFun& alpha, int m);

}  // namespace aim::chain
