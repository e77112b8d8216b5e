#include "aim/numcore/roots.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace aim::numcore {

namespace {

using cd = std::complex<double>;


std::vector<cd> aberth_double(const NumPoly& p) {
  const std::size_t d = static_cast<std::size_t>(p.degree());
  std::vector<cd> a(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) a[k] = p.coefficients()[k].to_complex_double();
  double radius = 0;
  for (std::size_t k = 0; k < d; ++k) radius = std::max(radius, std::abs(a[k] / a[d]));
  radius = std::isfinite(radius) ? 1 + radius : 1;
  std::vector<cd> z(d);
  for (std::size_t k = 0; k < d; ++k) {
    z[k] = std::polar(radius * 0.5 + 0.1 * static_cast<double>(k) / static_cast<double>(d),
                      2 * M_PI * static_cast<double>(k) / static_cast<double>(d) + 0.4);
  }
  for (int it = 0; it < 500; ++it) {
    double worst = 0;
    for (std::size_t i = 0; i < d; ++i) {
      cd f = a[d], fp = 0;
      for (std::size_t k = d; k-- > 0;) {
        fp = fp * z[i] + f;
        f = f * z[i] + a[k];
      }
      if (f == cd(0)) continue;
      const cd ratio = f / fp;
      cd sum = 0;
      for (std::size_t j = 0; j < d; ++j) {
        if (j != i) sum += 1.0 / (z[i] - z[j]);
      }
      const cd w = ratio / (1.0 - ratio * sum);
      z[i] -= w;
      worst = std::max(worst, std::abs(w) / std::max(1.0, std::abs(z[i])));
    }
    if (worst < 1e-15) break;
  }
  return z;
}

/// Aberth refinement at `bits`; returns the final worst relative correction.
Real aberth_refine(const NumPoly& pf, std::vector<BigScalar>& z, unsigned bits, int max_iter) {
  const std::size_t d = z.size();
  const NumPoly dp = pf.derivative();
  const Real target = pow2(-static_cast<long>(bits) + 12, bits);
  Real worst = make_real(bits);
  for (int it = 0; it < max_iter; ++it) {
    worst = 0;
    for (std::size_t i = 0; i < d; ++i) {
      const BigScalar f = pf.evaluate(z[i]);
      if (f.is_zero()) continue;
      const BigScalar fp = dp.evaluate(z[i]);
      BigScalar sum = BigScalar(0).to_float(bits);
      for (std::size_t j = 0; j < d; ++j) {
        if (j == i) continue;
        BigScalar diff = z[i] - z[j];
        if (diff.is_zero()) diff = BigScalar::from_float(target, target, bits);
        sum += BigScalar(1) / diff;
      }
      BigScalar w;
      if (fp.is_zero()) {
        w = BigScalar::from_float(target, bits);
      } else {
        const BigScalar ratio = f / fp;
        const BigScalar den = BigScalar(1) - ratio * sum;
        w = den.is_zero() ? ratio : ratio / den;
      }
      z[i] -= w;
      Real scale = abs_real(z[i], bits);
      if (scale < 1) scale = 1;
      const Real rel = abs_real(w, bits) / scale;
      if (rel > worst) worst = rel;
    }
    if (worst <= target) break;
  }
  return worst;
}

/// Roots of a polynomial assumed (numerically) square-free, or of float input.
std::vector<BigScalar> simple_roots(const NumPoly& p, unsigned bits) {
  const int d = p.degree();
  if (d == 1) return {-p.coeff(0) / p.coeff(1)};
  if (d == 2 && is_exact(p)) {
    const BigScalar a = p.coeff(2), b = p.coeff(1), c = p.coeff(0);
    const BigScalar disc = sqrt(b * b - BigScalar(4) * a * c, bits);
    return {(-b + disc) / (BigScalar(2) * a), (-b - disc) / (BigScalar(2) * a)};
  }
  const NumPoly pf = to_float(p, bits);
  std::vector<BigScalar> z;
  const std::vector<cd> seed = aberth_double(p);
  bool seed_ok = std::all_of(seed.begin(), seed.end(), [](const cd& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
  for (std::size_t k = 0; k < seed.size(); ++k) {
    if (seed_ok) {
      Real re = make_real(bits), im = make_real(bits);
      mpfr_set_d(re.backend().data(), seed[k].real(), MPFR_RNDN);
      mpfr_set_d(im.backend().data(), seed[k].imag(), MPFR_RNDN);
      z.push_back(BigScalar::from_float(re, im, bits));
    } else {
      const double ang = 2 * M_PI * static_cast<double>(k) / static_cast<double>(seed.size()) + 0.4;
      Real re = make_real(bits), im = make_real(bits);
      mpfr_set_d(re.backend().data(), std::cos(ang), MPFR_RNDN);
      mpfr_set_d(im.backend().data(), std::sin(ang), MPFR_RNDN);
      z.push_back(BigScalar::from_float(re, im, bits));
    }
  }
  aberth_refine(pf, z, bits, seed_ok ? 60 : 400);
  for (const auto& r : z) {
    if (!r.is_finite()) throw RootFindingError("root iteration diverged");
  }
  return z;
}

/// Drops an imaginary part that is pure noise relative to the real part.
BigScalar clean(const BigScalar& z, unsigned bits) {
  if (z.is_exact()) return z;
  const Real re = z.re(bits), im = z.im(bits);
  const Real tiny = pow2(-static_cast<long>(bits) + 16, bits);
  Real scale = abs_real(z, bits);
  if (scale < 1) scale = 1;
  if (abs(im) <= tiny * scale) return BigScalar::from_float(re, bits);
  if (abs(re) <= tiny * scale) return BigScalar::from_float(make_real(bits), im, bits);
  return z;
}

void sort_roots(std::vector<Root>& roots) {
  std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) {
    const double ar = a.value.re_double(), br = b.value.re_double();
    if (ar != br) return ar < br;
    return a.value.im_double() < b.value.im_double();
  });
}

}  // namespace

std::vector<NumPoly> square_free_factors(const NumPoly& p) {
  if (p.degree() < 1) return {};
  std::vector<NumPoly> out;
  const NumPoly dp = p.derivative();
  NumPoly a = gcd_exact(p, dp);
  NumPoly b = divmod(p, a).first;
  NumPoly c = divmod(dp, a).first;
  NumPoly d = c - b.derivative();
  while (b.degree() >= 1) {
    a = d.is_zero() ? b : gcd_exact(b, d);
    out.push_back(make_monic(a));
    const NumPoly nb = divmod(b, a).first;
    c = divmod(d, a).first;
    b = nb;
    d = c - b.derivative();
  }
  while (!out.empty() && out.back().degree() == 0) out.pop_back();
  return out;
}

std::vector<Root> poly_roots(const NumPoly& p, unsigned bits) {
  if (p.is_zero()) throw std::invalid_argument("roots of the zero polynomial");
  if (p.degree() < 1) return {};
  std::vector<Root> roots;
  if (is_exact(p)) {
    const auto factors = square_free_factors(p);
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (factors[i].degree() < 1) continue;
      for (auto& z : simple_roots(factors[i], bits)) roots.push_back({clean(z, bits), static_cast<int>(i + 1)});
    }
  } else {
    const std::vector<BigScalar> z = simple_roots(p, bits);
    Real maxmod = make_real(bits);
    for (const auto& r : z) maxmod = std::max(maxmod, abs_real(r, bits));
    if (maxmod < 1) maxmod = 1;
    const Real tol = pow2(-static_cast<long>(bits / 4), bits) * maxmod;
    std::vector<bool> used(z.size(), false);
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (used[i]) continue;
      BigScalar sum = z[i];
      int count = 1;
      used[i] = true;
      for (std::size_t j = i + 1; j < z.size(); ++j) {
        if (!used[j] && abs_real(z[i] - z[j], bits) <= tol) {
          used[j] = true;
          sum += z[j];
          ++count;
        }
      }
      roots.push_back({clean(sum / BigScalar(count), bits), count});
    }
  }
  sort_roots(roots);
  return roots;
}

std::vector<Root> poly_roots(const Poly& p, unsigned bits) { return poly_roots(to_numeric(p), bits); }

BigScalar PoleDecomposition::evaluate(const BigScalar& x) const {
  BigScalar acc = polynomial_part.evaluate(x);
  for (const auto& pole : poles) {
    const BigScalar inv = BigScalar(1) / (x - pole.location);
    BigScalar pw = inv;
    for (const auto& c : pole.residues) {
      acc += c * pw;
      pw *= inv;
    }
  }
  return acc;
}

PoleDecomposition partial_fractions(const ParamRatFun& r, unsigned bits) {
  const NumPoly num = r.numeric_num();
  const NumPoly den = r.numeric_den();
  PoleDecomposition out;
  auto [q, rem] = divmod(num, den);
  out.polynomial_part = q;
  if (den.degree() == 0 || rem.is_zero()) return out;
  const std::vector<Root> roots = poly_roots(den, bits);
  const BigScalar lead = den.leading();
  for (std::size_t j = 0; j < roots.size(); ++j) {
    const BigScalar& xj = roots[j].value;
    const int m = roots[j].multiplicity;
    // g(x) = rem / (lead * prod_{k != j} (x - x_k)^m_k); Laurent tail = Taylor coefficients of g at xj.
    NumPoly rest(lead);
    for (std::size_t k = 0; k < roots.size(); ++k) {
      if (k == j) continue;
      const NumPoly lin(std::vector<BigScalar>{-roots[k].value, BigScalar(1)});
      rest *= lin.pow(static_cast<unsigned>(roots[k].multiplicity));
    }
    const NumPoly a = taylor_shift(rem, xj);
    const NumPoly b = taylor_shift(rest, xj);
    std::vector<BigScalar> g(static_cast<std::size_t>(m));
    const BigScalar b0 = b.coeff(0);
    if (b0.is_zero()) throw RootFindingError("pole clustering failed");
    for (std::size_t t = 0; t < g.size(); ++t) {
      BigScalar acc = a.coeff(t);
      for (std::size_t u = 1; u <= t; ++u) acc -= b.coeff(u) * g[t - u];
      g[t] = acc / b0;
    }
    Pole pole{xj, m, std::vector<BigScalar>(static_cast<std::size_t>(m))};
    for (int t = 0; t < m; ++t) pole.residues[static_cast<std::size_t>(m - 1 - t)] = g[static_cast<std::size_t>(t)];
    out.poles.push_back(std::move(pole));
  }
  return out;
}

}  // namespace aim::numcore
