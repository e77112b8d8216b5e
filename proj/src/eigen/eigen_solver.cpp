#include "aim/eigen/eigen_solver.hpp"

#include <mpfr.h>

#include <algorithm>
#include <chrono>
#include <cmath>

namespace aim::eigen {

using numcore::make_real;
using numcore::Rational;
using numcore::is_zero;

namespace {

constexpr double kLog10Of2 = 0.30102999566398119521;

/// Contiguous mpfr values at one precision.
class Buffer {
 public:
  Buffer(std::size_t n, mpfr_prec_t prec) : v_(n) {
    for (auto& x : v_) {
      mpfr_init2(&x, prec);
      mpfr_set_zero(&x, 1);
    }
  }
  ~Buffer() {
    for (auto& x : v_) mpfr_clear(&x);
  }
  Buffer(const Buffer&) = delete;
  Buffer& operator=(const Buffer&) = delete;

  mpfr_ptr operator[](std::size_t i) { return &v_[i]; }

 private:
  std::vector<__mpfr_struct> v_;
};

struct Term {
  std::size_t power;
  Real coeff;
};

std::vector<Term> sparse_terms(const numcore::NumPoly& p, unsigned bits) {
  std::vector<Term> out;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const BigScalar& c = p.coefficients()[k];
    if (c.is_zero()) continue;
    if (!is_zero(c.im(bits))) throw std::invalid_argument("eigen problems need real coefficients");
    out.push_back({k, c.re(bits)});
  }
  return out;
}

/// s0 with a numeric E substituted.
numcore::NumPoly s0_at(const ParamRatFun& s0, const Real& E, unsigned bits) {
  const BigScalar e = BigScalar::from_float(E, bits);
  return s0.num().map([&](const numcore::EPoly& c) { return c.evaluate(e); });
}

/// Value and sum of |c_k| x^k, for the cancellation estimate.
std::pair<Real, Real> horner(Buffer& b, std::size_t len, const Real& x, unsigned bits) {
  Real v = make_real(bits), a = make_real(bits);
  const Real ax = boost::multiprecision::abs(x);
  Real c = make_real(bits);
  for (std::size_t k = len; k-- > 0;) {
    mpfr_set(c.backend().data(), b[k], MPFR_RNDN);
    v = v * x + c;
    a = a * ax + boost::multiprecision::abs(c);
  }
  return {v, a};
}

double lost_bits(const Real& scale, const Real& value) {
  if (is_zero(scale)) return 0.0;
  if (is_zero(value)) return std::numeric_limits<double>::infinity();
  const long es = boost::multiprecision::ilogb(scale), ev = boost::multiprecision::ilogb(value);
  return std::max(0.0, static_cast<double>(es - ev));
}

DeltaSample sample(const EigenProblem& p, const Real& E, int n) {
  if (n < 1) throw std::invalid_argument("delta_at needs n >= 1");
  const unsigned bits = p.bits;
  numcore::PrecisionGuard guard(bits);
  const auto L0 = sparse_terms(p.lambda0.numeric_num(), bits);
  const auto S0 = sparse_terms(s0_at(p.s0, E, bits), bits);
  std::size_t dl0 = 0, ds0 = 0;
  for (const auto& t : L0) dl0 = std::max(dl0, t.power);
  for (const auto& t : S0) ds0 = std::max(ds0, t.power);

  // Coefficient counts along the ladder.
  std::vector<std::size_t> ll(static_cast<std::size_t>(n) + 1), ls(ll.size());
  ll[0] = L0.empty() ? 1 : dl0 + 1;
  ls[0] = S0.empty() ? 1 : ds0 + 1;
  for (std::size_t j = 1; j < ll.size(); ++j) {
    ll[j] = std::max({ll[j - 1] > 1 ? ll[j - 1] - 1 : 1, ls[j - 1], ll[j - 1] + dl0});
    ls[j] = std::max(ls[j - 1] > 1 ? ls[j - 1] - 1 : 1, ll[j - 1] + ds0);
  }
  const std::size_t cap = std::max(ll.back(), ls.back()) + 1;
  const auto prec = static_cast<mpfr_prec_t>(std::max(bits, numcore::kMinPrecision));
  Buffer b0(cap, prec), b1(cap, prec), b2(cap, prec), b3(cap, prec), b4(cap, prec), b5(cap, prec);
  Buffer* l = &b0;
  Buffer* s = &b1;
  Buffer* pl = &b2;
  Buffer* ps = &b3;
  Buffer* nl = &b4;
  Buffer* ns = &b5;
  for (const auto& t : L0) mpfr_set((*l)[t.power], t.coeff.backend().data(), MPFR_RNDN);
  for (const auto& t : S0) mpfr_set((*s)[t.power], t.coeff.backend().data(), MPFR_RNDN);

  for (std::size_t j = 1; j <= static_cast<std::size_t>(n); ++j) {
    const std::size_t lo = ll[j - 1], so = ls[j - 1];
    for (std::size_t i = 0; i < ll[j]; ++i) {
      mpfr_ptr r = (*nl)[i];
      if (i + 1 < lo) {
        mpfr_mul_ui(r, (*l)[i + 1], i + 1, MPFR_RNDN);
      } else {
        mpfr_set_zero(r, 1);
      }
      if (i < so) mpfr_add(r, r, (*s)[i], MPFR_RNDN);
      for (const auto& t : L0) {
        if (i >= t.power && i - t.power < lo) mpfr_fma(r, t.coeff.backend().data(), (*l)[i - t.power], r, MPFR_RNDN);
      }
    }
    for (std::size_t i = 0; i < ls[j]; ++i) {
      mpfr_ptr r = (*ns)[i];
      if (i + 1 < so) {
        mpfr_mul_ui(r, (*s)[i + 1], i + 1, MPFR_RNDN);
      } else {
        mpfr_set_zero(r, 1);
      }
      for (const auto& t : S0) {
        if (i >= t.power && i - t.power < lo) mpfr_fma(r, t.coeff.backend().data(), (*l)[i - t.power], r, MPFR_RNDN);
      }
    }
    std::swap(pl, l);
    std::swap(ps, s);
    std::swap(l, nl);
    std::swap(s, ns);
  }

  const Real x0 = p.x0.re(bits);
  const std::size_t N = static_cast<std::size_t>(n);
  const auto [ln, lna] = horner(*l, ll[N], x0, bits);
  const auto [sn, sna] = horner(*s, ls[N], x0, bits);
  const auto [lp, lpa] = horner(*pl, ll[N - 1], x0, bits);
  const auto [sp, spa] = horner(*ps, ls[N - 1], x0, bits);
  if (is_zero(lp)) throw std::domain_error("lambda_{n-1} vanishes at x0");

  const Real a = ln * sp, b = lp * sn;
  const Real d = a - b;
  const double eval_loss =
      std::max({lost_bits(lna, ln), lost_bits(sna, sn), lost_bits(lpa, lp), lost_bits(spa, sp)});
  const double cancel = is_zero(d) ? 0.0 : lost_bits(std::max(abs(a), abs(b)), d);
  const double margin = 4.0 + std::ceil(std::log2(static_cast<double>(n) + 1.0));
  const double sig = static_cast<double>(bits) - cancel - eval_loss - margin;

  DeltaSample out;
  out.value = d / (lp * lp);
  out.significantBits = std::isfinite(sig) ? static_cast<int>(std::max(sig, -1.0e6)) : -1000000;
  return out;
}

int sign_of(const Real& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

Real real_of(double v, unsigned bits) {
  Real r = make_real(bits);
  r = v;
  return r;
}

int max_digits(unsigned bits) { return static_cast<int>(std::floor((bits / 2.0) * kLog10Of2)); }

int agreement_digits(const Real& d, const Real& E, unsigned bits) {
  if (is_zero(d)) return max_digits(bits);
  Real scale = abs(E);
  if (scale < 1) scale = 1;
  const double rel = static_cast<double>(boost::multiprecision::log10(abs(d) / scale));
  return std::min(max_digits(bits), static_cast<int>(std::floor(-rel)));
}

/// Sign-changing bracket around a previous root, widening geometrically.
std::pair<Real, Real> local_bracket(const EigenProblem& p, int n, const Real& E, Real w) {
  numcore::PrecisionGuard guard(p.bits);
  const Real limit = real_of(p.scan_step * 4.0, p.bits);
  for (;;) {
    const Real lo = E - w, hi = E + w;
    const DeltaSample a = sample(p, lo, n), b = sample(p, hi, n);
    if (a.significantBits < 8 && b.significantBits < 8) throw PrecisionExhausted(p.bits);
    const int sl = a.significantBits < 8 ? 0 : sign_of(a.value);
    const int sh = b.significantBits < 8 ? 0 : sign_of(b.value);
    if (sl == 0) return {lo, lo};
    if (sh == 0) return {hi, hi};
    if (sl != sh) return {lo, hi};
    if (w >= limit) throw BracketNotFound("no sign change within " + std::to_string(p.scan_step * 4.0) +
                                          " of the previous root at n = " + std::to_string(n));
    w *= 8;
    if (w > limit) w = limit;
  }
}

EigenResult escalate(EigenProblem p, int k, std::pair<Real, Real> bracket, int n, int targetDigits) {
  numcore::PrecisionGuard guard(p.max_bits);
  const auto t0 = std::chrono::steady_clock::now();
  EigenResult res;
  res.k = k;
  Real E = bracket.first == bracket.second ? bracket.first : find_root(p, n, bracket);
  res.trace.push_back({n, E});
  std::vector<Real> diffs;
  std::vector<int> agree;
  while (true) {
    const int next = n + p.n_step;
    if (next > p.n_max) {
      throw NonStabilizing("level " + std::to_string(k) + " did not stabilize to " + std::to_string(targetDigits) +
                               " digits by n = " + std::to_string(p.n_max),
                           res.trace);
    }
    Real w = diffs.empty() ? real_of(p.scan_step, p.bits) : Real(abs(diffs.back()) * 4);
    const Real floor_w = abs(E) * numcore::pow2(-static_cast<long>(p.bits / 2), p.bits);
    if (w < floor_w) w = floor_w;
    Real En;
    try {
      const auto br = local_bracket(p, next, E, w);
      En = br.first == br.second ? br.first : find_root(p, next, br);
    } catch (const PrecisionExhausted&) {
      if (p.bits * 2 > p.max_bits) throw;
      p.bits *= 2;
      E = make_real(p.bits) + E;
      continue;
    }
    n = next;
    res.trace.push_back({n, En});
    const Real d = En - E;
    diffs.push_back(abs(d));
    agree.push_back(agreement_digits(d, En, p.bits));
    E = En;
    if (agree.size() >= 2 && agree[agree.size() - 2] >= targetDigits && agree.back() >= targetDigits) {
      // Geometric tail of the remaining corrections.
      const Real& d1 = diffs[diffs.size() - 2];
      const Real& d2 = diffs.back();
      Real tail = d2;
      if (!is_zero(d1) && d2 < d1) {
        const Real rho = d2 / d1;
        tail = d2 / (1 - rho);
      } else if (!is_zero(d2)) {
        tail = d1;
      }
      const int digits = agreement_digits(tail, E, p.bits);
      if (digits >= targetDigits) {
        res.stableDigits = digits;
        break;
      }
    }
  }
  res.E = E;
  res.iterations = n;
  res.bits = p.bits;
  res.residual = abs(sample(p, E, n).value);
  res.stabilized = true;
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

using Bracket = std::pair<Real, Real>;

/// Grid cells where delta_n changes sign; a grid point where it vanishes
/// gives a degenerate bracket.
std::vector<Bracket> scan_brackets(const EigenProblem& p, int n) {
  numcore::PrecisionGuard guard(p.bits);
  std::vector<Bracket> out;
  const long steps = std::lround((p.scan_hi - p.scan_lo) / p.scan_step);
  Real prevE;
  int prev = 0;
  for (long j = 0; j <= steps; ++j) {
    const Real E = real_of(p.scan_lo + static_cast<double>(j) * p.scan_step, p.bits);
    const DeltaSample d = sample(p, E, n);
    // A sample lost in rounding noise sits on a root to working precision.
    const int sg = d.significantBits < 8 ? 0 : sign_of(d.value);
    if (sg == 0) {
      out.emplace_back(E, E);
    } else if (prev != 0 && sg != prev) {
      out.emplace_back(prevE, E);
    }
    prev = sg;
    prevE = E;
  }
  return out;
}

/// Brackets consistent between two scan depths; returns the depth used.
int consistent_scan(const EigenProblem& p, int kNeeded, std::vector<Bracket>& roots) {
  // A few deeper scans settle spurious sign changes; more rarely help.
  for (int n = p.n_start, tries = 0; tries < 4 && n + p.n_step <= p.n_max; n += 2 * p.n_step, ++tries) {
    auto a = scan_brackets(p, n);
    const auto b = scan_brackets(p, n + p.n_step);
    if (static_cast<int>(a.size()) < kNeeded || static_cast<int>(b.size()) < kNeeded) {
      roots = std::move(a);
      continue;
    }
    bool same = true;
    for (int j = 0; j < kNeeded; ++j) {
      const auto& x = a[static_cast<std::size_t>(j)];
      const auto& y = b[static_cast<std::size_t>(j)];
      if (abs(x.first + x.second - y.first - y.second) > 4 * p.scan_step) same = false;
    }
    roots = std::move(a);
    if (same) return n;
  }
  throw BracketNotFound("scan of [" + std::to_string(p.scan_lo) + ", " + std::to_string(p.scan_hi) +
                        "] did not isolate " + std::to_string(kNeeded) + " stable sign changes");
}

unsigned bits_for(const EigenProblem& p, int targetDigits) {
  unsigned bits = p.bits;
  while (targetDigits > static_cast<int>(bits * 0.3)) {
    if (bits * 2 > p.max_bits) {
      throw std::invalid_argument(std::to_string(targetDigits) + " digits exceed the " + std::to_string(p.max_bits) +
                                  "-bit budget");
    }
    bits *= 2;
  }
  return bits;
}

}  // namespace

void EigenProblem::validate() const {
  if (!x0.is_real() || !(x0.re(bits) > 0)) throw std::invalid_argument("x0 must be positive");
  if (!lambda0.is_polynomial() || lambda0.has_E()) {
    throw std::invalid_argument("lambda0 must be a polynomial in x without E");
  }
  if (!s0.is_polynomial() || !numcore::is_E_free(s0.den())) throw std::invalid_argument("s0 must be a polynomial in x");
  if (lambda0.is_zero()) throw std::invalid_argument("lambda0 must not vanish");
  if (n_start < 1 || n_step < 1) throw std::invalid_argument("iteration depths must be positive");
  if (!(scan_step > 0) || !(scan_hi > scan_lo)) throw std::invalid_argument("empty scan window");
}

EigenProblem reduce_schrodinger(const BigScalar& A) {
  if (!A.is_real() || A.re(64) < 0) throw std::invalid_argument("A must be real and non-negative");
  EigenProblem p;
  p.A = A;
  const ParamRatFun x = ParamRatFun::x();
  p.lambda0 = ParamRatFun(BigScalar(2)) * x;
  p.s0 = ParamRatFun(BigScalar(1)) - ParamRatFun::E() + ParamRatFun(A) * x.pow(4);
  return p;
}

EigenProblem custom_problem(const ParamRatFun& lambda0, const ParamRatFun& s0) {
  EigenProblem p;
  p.A = BigScalar(0);
  p.lambda0 = lambda0;
  p.s0 = s0;
  p.validate();
  return p;
}

DeltaSample delta_at(const EigenProblem& problem, const Real& E, int n) {
  DeltaSample s = sample(problem, E, n);
  if (s.significantBits < 8) throw PrecisionExhausted(problem.bits);
  return s;
}

Real find_root(const EigenProblem& p, int n, std::pair<Real, Real> bracket) {
  numcore::PrecisionGuard guard(p.bits);
  Real a = make_real(p.bits) + bracket.first, b = make_real(p.bits) + bracket.second;
  if (a > b) std::swap(a, b);
  const DeltaSample sa = sample(p, a, n), sb = sample(p, b, n);
  if (sign_of(sa.value) == 0) return a;
  if (sign_of(sb.value) == 0) return b;
  if (sa.significantBits < 8 && sb.significantBits < 8) throw PrecisionExhausted(p.bits);
  if (sa.significantBits < 8) return a;
  if (sb.significantBits < 8) return b;
  if (sign_of(sa.value) == sign_of(sb.value)) {
    throw BracketNotFound("delta_" + std::to_string(n) + " has the same sign at both bracket ends");
  }
  const int sig = std::min(sa.significantBits, sb.significantBits);

  Real fa = sa.value, fb = sb.value;
  const Real w0 = b - a;
  // Below this width the sign of delta is noise.
  Real stop = w0 * numcore::pow2(-(sig - 4), p.bits);
  Real scale = abs(a) > abs(b) ? Real(abs(a)) : Real(abs(b));
  if (scale < 1) scale = 1;
  const Real floor = scale * numcore::pow2(-static_cast<long>(p.bits) + 8, p.bits);
  if (stop < floor) stop = floor;

  auto update = [&](const Real& c, const Real& fc) {
    if (sign_of(fc) == sign_of(fa)) {
      a = c;
      fa = fc;
    } else {
      b = c;
      fb = fc;
    }
  };

  for (int i = 0; i < 10 && b - a > stop; ++i) {
    const Real c = (a + b) / 2;
    const Real fc = sample(p, c, n).value;
    if (sign_of(fc) == 0) return c;
    update(c, fc);
  }

  // Bracketed secant through the two latest iterates, bisecting when the
  // step leaves the bracket or the width stops halving.
  Real x1 = a, f1 = fa, x2 = b, f2 = fb;
  Real width = b - a;
  int slow = 0;
  for (int iter = 0; iter < 4 * static_cast<int>(p.bits) && b - a > stop; ++iter) {
    Real c;
    bool bisect = slow >= 2 || f2 == f1;
    if (!bisect) {
      c = x2 - f2 * (x2 - x1) / (f2 - f1);
      if (!(c > a && c < b)) bisect = true;
    }
    if (bisect) {
      c = (a + b) / 2;
      slow = 0;
    }
    const Real fc = sample(p, c, n).value;
    if (sign_of(fc) == 0) return c;
    update(c, fc);
    x1 = x2;
    f1 = f2;
    x2 = c;
    f2 = fc;
    const Real nw = b - a;
    slow = nw > width / 2 ? slow + 1 : 0;
    if (slow == 0) width = nw;
  }
  return abs(fa) < abs(fb) ? a : b;
}

std::vector<Real> scan_roots(const EigenProblem& p, int n) {
  numcore::PrecisionGuard guard(p.bits);
  std::vector<Real> out;
  for (const auto& [lo, hi] : scan_brackets(p, n)) out.push_back((lo + hi) / 2);
  return out;
}

EigenResult solve_level(const EigenProblem& problem, int k, int targetDigits) {
  problem.validate();
  if (k < 0) throw std::invalid_argument("level must be non-negative");
  EigenProblem p = problem;
  p.bits = bits_for(p, targetDigits);
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Bracket> roots;
  const int n = consistent_scan(p, k + 1, roots);
  EigenResult r = escalate(p, k, roots[static_cast<std::size_t>(k)], n, targetDigits);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<EigenResult> solve_spectrum(const EigenProblem& problem, int kMax, int targetDigits) {
  problem.validate();
  if (kMax < 0) throw std::invalid_argument("kMax must be non-negative");
  EigenProblem p = problem;
  p.bits = bits_for(p, targetDigits);
  std::vector<Bracket> roots;
  const int n = consistent_scan(p, kMax + 1, roots);
  std::vector<EigenResult> out;
  for (int k = 0; k <= kMax; ++k) {
    try {
      out.push_back(escalate(p, k, roots[static_cast<std::size_t>(k)], n, targetDigits));
    } catch (const NonStabilizing& e) {
      EigenResult r;
      r.k = k;
      r.trace = e.trace();
      r.E = r.trace.back().E;
      r.iterations = r.trace.back().n;
      r.bits = p.bits;
      r.residual = abs(sample(p, r.E, r.iterations).value);
      out.push_back(std::move(r));
    }
    if (k > 0 && !(out[static_cast<std::size_t>(k)].E > out[static_cast<std::size_t>(k) - 1].E)) {
      std::vector<Real> mids;
      for (const auto& [lo, hi] : roots) mids.push_back((lo + hi) / 2);
      throw MissedLevel("level " + std::to_string(k) + " is not above level " + std::to_string(k - 1), mids);
    }
  }
  return out;
}

}  // namespace aim::eigen
