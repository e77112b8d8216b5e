#include "aim/constcoeff/const_coeff.hpp"

#include "aim/numcore/hermite.hpp"

#include <array>

namespace aim::constcoeff {

using numcore::Rational;
using numcore::Real;
using numcore::pow2;

const char* to_string(CharKind k) {
  switch (k) {
    case CharKind::distinct_moduli: return "DistinctModuli";
    case CharKind::double_root: return "DoubleRoot";
    case CharKind::equal_moduli_distinct: return "EqualModuliDistinct";
  }
  return "?";
}

namespace {

bool exact_pair(const BigScalar& a, const BigScalar& b) { return a.is_exact() && b.is_exact(); }

unsigned work_bits(const BigScalar& a, const BigScalar& b, unsigned bits) {
  return numcore::combined_precision(a, b, bits);
}

/// |a| < |b|, exactly when both are exact.
bool smaller_modulus(const BigScalar& a, const BigScalar& b, unsigned bits) {
  const BigScalar na = numcore::norm(a), nb = numcore::norm(b);
  if (na.is_exact() && nb.is_exact()) return na.exact_re() < nb.exact_re();
  return na.re(bits) < nb.re(bits);
}

BigScalar half(const BigScalar& z) { return z / BigScalar(2); }

}  // namespace

std::pair<BigScalar, BigScalar> char_roots(const BigScalar& lambda0, const BigScalar& s0, unsigned bits) {
  const BigScalar disc = s0 + lambda0 * lambda0 / BigScalar(4);
  const BigScalar sq = numcore::sqrt(disc, bits);
  BigScalar r1 = half(lambda0) + sq, r2 = half(lambda0) - sq;
  if (smaller_modulus(r1, r2, bits)) std::swap(r1, r2);
  return {r1, r2};
}

CharClass classify(const BigScalar& lambda0, const BigScalar& s0, unsigned bits) {
  const unsigned wb = work_bits(lambda0, s0, bits);
  const BigScalar disc = s0 + lambda0 * lambda0 / BigScalar(4);
  auto [r1, r2] = char_roots(lambda0, s0, wb);
  CharClass c;

  bool double_root = false, equal = false;
  if (exact_pair(lambda0, s0)) {
    double_root = disc.is_zero();
    // |l/2 + w| = |l/2 - w| with w^2 = disc  <=>  Re(conj(l) w) = 0  <=>  conj(l)^2 disc is real and <= 0.
    const BigScalar q = numcore::conj(lambda0) * numcore::conj(lambda0) * disc;
    equal = !double_root && q.exact_im() == 0 && q.exact_re() <= 0;
  } else {
    const Real m1 = numcore::abs_real(r1, wb), m2 = numcore::abs_real(r2, wb);
    const Real scale = std::max(Real(1), std::max(m1, m2));
    const Real tol = pow2(-static_cast<long>(wb / 4), wb) * scale;
    double_root = numcore::abs_real(r1 - r2, wb) <= tol;
    equal = !double_root && abs(m1 - m2) <= tol;
  }

  if (double_root) {
    c.kind = CharKind::double_root;
    c.r = half(lambda0);
    c.r1 = c.r2 = c.r;
    return c;
  }
  if (equal) {
    c.kind = CharKind::equal_moduli_distinct;
    if (numcore::arg_real(r1, wb) < numcore::arg_real(r2, wb)) std::swap(r1, r2);
    c.r1 = r1;
    c.r2 = r2;
    c.r = numcore::abs(r1, wb);
    Real th = numcore::arg_real(r1, wb);
    if (th <= 0) th += 2 * numcore::real_pi(wb);
    c.theta = BigScalar::from_float(th, wb);
    return c;
  }
  c.kind = CharKind::distinct_moduli;
  c.r1 = r1;
  c.r2 = r2;
  return c;
}

ConstClosedForm closed_form_constants(const BigScalar& lambda0, const BigScalar& s0, unsigned bits) {
  ConstClosedForm f;
  f.cls = classify(lambda0, s0, bits);
  if (f.cls.kind != CharKind::double_root) {
    const BigScalar d = f.cls.r1 - f.cls.r2;
    f.A = f.cls.r1 * f.cls.r1 / d;
    f.B = s0 * f.cls.r1 / d;
  }
  return f;
}

std::pair<BigScalar, BigScalar> closed_form_sequences(const BigScalar& lambda0, const BigScalar& s0, int n,
                                                      unsigned bits) {
  if (n < 0) throw std::invalid_argument("closed forms need n >= 0");
  const ConstClosedForm f = closed_form_constants(lambda0, s0, bits);
  if (f.cls.kind == CharKind::double_root) {
    const BigScalar& r = f.cls.r;
    return {numcore::pow(r, n + 1) * BigScalar(n + 2), -numcore::pow(r, n + 2) * BigScalar(n + 1)};
  }
  const BigScalar p1 = numcore::pow(f.cls.r1, n), p2 = numcore::pow(f.cls.r2, n);
  return {f.A * p1 + (lambda0 - f.A) * p2, f.B * p1 + (s0 - f.B) * p2};
}

std::vector<BigScalar> perturbation_decay(const BigScalar& lambda0, const BigScalar& s0, int nFrom, int nTo,
                                          unsigned bits) {
  if (nFrom < 1 || nTo < nFrom) throw std::invalid_argument("perturbation_decay needs 1 <= nFrom <= nTo");
  std::vector<BigScalar> out;
  auto prev = closed_form_sequences(lambda0, s0, nFrom - 1, bits);
  for (int n = nFrom; n <= nTo; ++n) {
    auto cur = closed_form_sequences(lambda0, s0, n, bits);
    const BigScalar d = cur.first * prev.second - prev.first * cur.second;
    out.push_back(d / (prev.first * prev.first));
    prev = std::move(cur);
  }
  return out;
}

BigScalar equal_moduli_alpha(const CharClass& cls, const BigScalar& s0, const BigScalar& lambda0, int n,
                             unsigned bits) {
  if (cls.kind != CharKind::equal_moduli_distinct) throw std::invalid_argument("equal_moduli_alpha needs equal moduli");
  const unsigned wb = work_bits(cls.r1, cls.r2, bits);
  const Real tol = pow2(-static_cast<long>(wb / 4), wb);
  if (numcore::abs_real(cls.r2 - numcore::conj(cls.r1), wb) > tol * std::max(Real(1), cls.r.re(wb))) {
    throw std::invalid_argument("equal_moduli_alpha needs a conjugate root pair");
  }
  const BigScalar ntheta = BigScalar(n) * cls.theta;
  const BigScalar sn = numcore::sin(ntheta, wb);
  if (numcore::abs_real(sn, wb) <= tol) return s0 / lambda0;
  const BigScalar d = cls.r1 - cls.r2;
  const BigScalar A = cls.r1 * cls.r1 / d, B = s0 * cls.r1 / d;
  const BigScalar two_i = BigScalar(2) * BigScalar::imaginary_unit();
  const BigScalar phase = numcore::exp(-BigScalar::imaginary_unit() * ntheta, wb);
  const BigScalar num = two_i * B * sn + s0 * phase;
  const BigScalar den = two_i * A * sn + lambda0 * phase;
  const Real scale = std::max(Real(1), numcore::abs_real(lambda0, wb) + numcore::abs_real(two_i * A, wb));
  if (numcore::abs_real(den, wb) <= tol * scale) throw OscillationSingularity("lambda_n vanishes at n = " + std::to_string(n));
  return num / den;
}

std::vector<bool> alpha_equals_ratio_exact(const NumPoly& minpoly, const BigScalar& s0, int nMax) {
  if (!numcore::is_exact(minpoly) || !s0.is_exact()) throw std::invalid_argument("exact inputs required");
  auto reduce = [&](const NumPoly& p) { return numcore::divmod(p, minpoly).second; };
  const NumPoly t = numcore::num_monomial(1);
  const NumPoly lambda0 = reduce(t);
  const NumPoly s0p(s0);
  NumPoly lam = lambda0, s = s0p;
  std::vector<bool> out;
  for (int n = 1; n <= nMax; ++n) {
    const NumPoly next_lam = reduce(lambda0 * lam + s);
    const NumPoly next_s = reduce(s0p * lam);
    lam = next_lam;
    s = next_s;
    // alpha_{n+1} = s_n / lambda_n equals s0 / lambda0 iff s_n lambda0 - s0 lambda_n == 0 in Q(t).
    out.push_back(!lam.is_zero() && reduce(s * lambda0 - s0p * lam).is_zero());
  }
  return out;
}

namespace {

int sign_of(BurchnallSign rule, int m, int k) {
  auto parity = [](int e) { return (e % 2 == 0) ? 1 : -1; };
  switch (rule) {
    case BurchnallSign::minus_one_pow_m_minus_k: return parity(m - k);
    case BurchnallSign::minus_one_pow_k: return parity(k);
    case BurchnallSign::minus_one_pow_m: return parity(m);
    case BurchnallSign::plus_one: return 1;
  }
  return 1;
}

NumPoly nth_derivative(NumPoly f, int k) {
  for (int j = 0; j < k; ++j) f = f.derivative();
  return f;
}

}  // namespace

NumPoly burchnall_lhs(int m, const NumPoly& f) {
  const NumPoly two_x = NumPoly::monomial(BigScalar(2), 1);
  NumPoly g = f;
  for (int j = 0; j < m; ++j) g = g.derivative() - two_x * g;
  return g;
}

NumPoly burchnall_rhs(int m, const NumPoly& f, BurchnallSign sign) {
  NumPoly acc;
  numcore::Integer binom = 1;
  for (int k = 0; k <= m; ++k) {
    const BigScalar c(Rational(binom * sign_of(sign, m, k)));
    acc += numcore::hermite_numeric(m - k) * nth_derivative(f, k) * c;
    binom = binom * (m - k) / (k + 1);
  }
  return acc;
}

BurchnallSign burchnall_sign_convention() {
  constexpr std::array<BurchnallSign, 4> candidates = {
      BurchnallSign::minus_one_pow_m_minus_k, BurchnallSign::minus_one_pow_k, BurchnallSign::minus_one_pow_m,
      BurchnallSign::plus_one};
  const std::array<NumPoly, 3> probes = {NumPoly(BigScalar(1)), numcore::num_monomial(1), numcore::num_monomial(2)};
  for (BurchnallSign c : candidates) {
    bool ok = true;
    for (const auto& f : probes) ok = ok && burchnall_lhs(1, f) == burchnall_rhs(1, f, c);
    if (ok) return c;
  }
  throw std::logic_error("no sign rule reproduces the first-order operator");
}

bool burchnall_check(int m, const NumPoly& f) {
  if (m < 0 || m > 12) throw std::invalid_argument("burchnall_check needs 0 <= m <= 12");
  if (!numcore::is_exact(f)) throw std::invalid_argument("burchnall_check needs exact coefficients");
  static const BurchnallSign sign = burchnall_sign_convention();
  return burchnall_lhs(m, f) == burchnall_rhs(m, f, sign);
}

}  // namespace aim::constcoeff
