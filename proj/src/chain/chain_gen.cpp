#include "aim/chain/chain_gen.hpp"

#include "aim/numcore/hermite.hpp"

#include <random>

namespace aim::chain {

using numcore::Rational;
using numcore::Real;

ChainLink chain_link(const AimProblem& problem, int n) {
  auto links = chain_links(problem, n);
  return std::move(links.back());
}

std::vector<ChainLink> chain_links(const AimProblem& problem, int n) {
  if (n < 1) throw std::invalid_argument("chain levels start at 1");
  if (problem.lambda0.has_E() || problem.s0.has_E()) throw std::invalid_argument("chain needs E-free coefficients");
  std::vector<ChainLink> out;
  engine::AimState st = engine::initial_state(problem);
  for (int k = 1; k <= n; ++k) {
    st = engine::aim_step(problem, st);
    ChainLink link{problem, k, engine::perturbation(st), engine::alpha(st), {}};
    link.solution = engine::closed_form_from_alpha(link.alpha, problem.bits);
    out.push_back(std::move(link));
  }
  return out;
}

BigScalar residual(const ParamRatFun& coeffLambda, const ParamRatFun& coeffS, const ParamRatFun& rhs,
                   const ClosedForm& candidate, const std::vector<BigScalar>& points) {
  const unsigned bits = candidate.bits;
  Real worst = numcore::make_real(bits);
  bool exact = true;
  BigScalar exact_worst(0);
  for (const auto& x : points) {
    try {
      const BigScalar y = candidate.value(x);
      const BigScalar L = candidate.log_derivative(x);
      const BigScalar Lp = candidate.log_derivative_prime(x);
      const BigScalar r = y * (Lp + L * L - coeffLambda.evaluate(x) * L - coeffS.evaluate(x) - rhs.evaluate(x));
      const BigScalar ay = numcore::abs(y, bits);
      BigScalar scaled = numcore::abs(r, bits);
      if (!ay.is_exact() || !ay.is_zero()) {
        if (numcore::abs_real(ay, bits) > 1) scaled = scaled / ay;
      }
      if (scaled.is_exact() && exact) {
        if (scaled.exact_re() > exact_worst.exact_re()) exact_worst = scaled;
      } else {
        exact = false;
      }
      const Real v = scaled.re(bits);
      if (v > worst) worst = v;
    } catch (const std::domain_error&) {
      throw engine::PoleCollision("residual sample point sits on a pole");
    }
  }
  if (exact) return exact_worst;
  return BigScalar::from_float(worst, bits);
}

BigScalar residual(const ChainLink& link, const std::vector<BigScalar>& points) {
  return residual(link.base.lambda0, link.base.s0, link.perturb, link.solution, points);
}

std::vector<BigScalar> sample_points(int count, double lo, double hi, unsigned bits, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<BigScalar> out;
  for (int k = 0; k < count; ++k) out.push_back(BigScalar::from_double(dist(rng), bits));
  return out;
}

bool terminates_at(const AimProblem& problem, int level) {
  engine::AimState st = engine::initial_state(problem);
  for (int k = 0; k < level; ++k) st = engine::aim_step(problem, st);
  return engine::delta(st).is_zero();
}

NumPoly polynomial_solution(const ParamRatFun& alpha, int m) {
  const NumPoly N = alpha.numeric_num(), D = alpha.numeric_den();
  // Unknowns c_0..c_{m-1}; c_m = 1. Equation: D y' + N y = 0, coefficient by coefficient.
  const NumPoly xm = numcore::num_monomial(static_cast<std::size_t>(m));
  const NumPoly rhs_poly = -(D * xm.derivative() + N * xm);
  const int rows = std::max(D.degree() + m, N.degree() + m) + 1;
  const int cols = m;
  std::vector<std::vector<BigScalar>> a(static_cast<std::size_t>(rows), std::vector<BigScalar>(static_cast<std::size_t>(cols + 1)));
  for (int j = 0; j < cols; ++j) {
    const NumPoly xj = numcore::num_monomial(static_cast<std::size_t>(j));
    const NumPoly col = D * xj.derivative() + N * xj;
    for (int i = 0; i < rows; ++i) a[i][j] = col.coeff(static_cast<std::size_t>(i));
  }
  for (int i = 0; i < rows; ++i) a[i][cols] = rhs_poly.coeff(static_cast<std::size_t>(i));

  // Gauss-Jordan elimination over the exact field.
  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = r;
    while (p < rows && a[p][c].is_zero()) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    const BigScalar inv = BigScalar(1) / a[r][c];
    for (auto& v : a[r]) v *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || a[i][c].is_zero()) continue;
      const BigScalar f = a[i][c];
      for (int j = c; j <= cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (int i = r; i < rows; ++i) {
    if (!a[i][cols].is_zero()) throw std::runtime_error("no polynomial solution of degree " + std::to_string(m));
  }
  if (r != cols) throw std::runtime_error("polynomial solution is not unique");
  std::vector<BigScalar> c(static_cast<std::size_t>(m) + 1);
  c[static_cast<std::size_t>(m)] = BigScalar(1);
  for (int i = 0; i < r; ++i) c[static_cast<std::size_t>(pivot_col[i])] = a[i][cols];
  return NumPoly(std::move(c));
}

HermiteChainResult hermite_chain(const BigScalar& mu, int m) {
  if (m < 0) throw std::invalid_argument("hermite_chain needs m >= 0");
  if (!mu.is_exact() || mu.exact_im() != 0 || mu.exact_re() <= 0) {
    throw std::invalid_argument("hermite_chain needs an exact positive mu");
  }
  const ParamRatFun lambda0 = ParamRatFun::from_numeric(NumPoly::monomial(mu, 1));
  const ParamRatFun s0(-mu * BigScalar(m));
  const AimProblem problem = AimProblem::make(lambda0, s0);

  HermiteChainResult out;
  const int level = std::max(m, 1);
  engine::AimState st = engine::initial_state(problem);
  for (int k = 0; k < level; ++k) st = engine::aim_step(problem, st);
  out.terminated = engine::delta(st).is_zero();
  if (!out.terminated) throw std::logic_error("Hermite ladder failed to terminate at level " + std::to_string(m));

  out.polynomial = m == 0 ? NumPoly(BigScalar(1)) : polynomial_solution(engine::alpha(st), m);

  // y_k h_{k+2} (mu/2) == y_{k+2} h_k for every k, and matching zero patterns.
  const NumPoly h = numcore::hermite_numeric(m);
  const BigScalar c2 = mu / BigScalar(2);
  bool ok = out.polynomial.degree() == m;
  for (int k = 0; k <= m && ok; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    ok = out.polynomial.coeff(uk).is_zero() == h.coeff(uk).is_zero();
    if (ok && k + 2 <= m) ok = out.polynomial.coeff(uk) * h.coeff(uk + 2) * c2 == out.polynomial.coeff(uk + 2) * h.coeff(uk);
  }
  out.proportional = ok;
  out.scale_squared = numcore::pow(BigScalar(4) * c2, m);
  return out;
}

}  // namespace aim::chain
