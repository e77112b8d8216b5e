#pragma once

#include "aim/engine/aim_engine.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace aim::eigen {

using numcore::BigScalar;
using numcore::ParamRatFun;
using numcore::Real;

/// Cancellation in delta_n left fewer than 8 significant bits.
class PrecisionExhausted : public std::runtime_error {
 public:
  explicit PrecisionExhausted(unsigned bits)
      : std::runtime_error("precision exhausted at " + std::to_string(bits) + " bits"), bits_(bits) {}
  unsigned bits() const { return bits_; }

 private:
  unsigned bits_;
};

class BracketNotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One escalation step: the root of delta_n at depth n.
struct TracePoint {
  int n = 0;
  Real E;
};

/// The escalation ran out of iterations before two successive roots agreed.
class NonStabilizing : public std::runtime_error {
 public:
  NonStabilizing(const std::string& what, std::vector<TracePoint> trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const std::vector<TracePoint>& trace() const { return trace_; }

 private:
  std::vector<TracePoint> trace_;
};

/// Results for successive levels were not strictly increasing.
class MissedLevel : public std::runtime_error {
 public:
  MissedLevel(const std::string& what, std::vector<Real> scan)
      : std::runtime_error(what), scan_(std::move(scan)) {}
  /// Sign-change midpoints of the scan that produced the brackets.
  const std::vector<Real>& scan() const { return scan_; }

 private:
  std::vector<Real> scan_;
};

/// y'' = lambda0 y' + s0 y with lambda0, s0 polynomial in x and s0 carrying E.
struct EigenProblem {
  BigScalar A;
  BigScalar x0 = BigScalar(numcore::Rational(1, 10000));
  unsigned bits = 512;
  ParamRatFun lambda0;
  ParamRatFun s0;

  /// Scan window and grid for bracketing.
  double scan_lo = 0.0;
  double scan_hi = 30.0;
  double scan_step = 0.1;
  /// Depth of the first scan, escalation step and depth cap.
  int n_start = 60;
  int n_step = 10;
  int n_max = 1000;
  unsigned max_bits = 4096;

  /// Checks x0 > 0 and that lambda0, s0 are polynomials in x.
  void validate() const;
};

/// -psi'' + (x^2 + A x^4) psi = E psi with psi = exp(-x^2/2) f, giving
/// f'' = 2x f' + (1 - E + A x^4) f. Requires A >= 0.
EigenProblem reduce_schrodinger(const BigScalar& A);

/// Problem from arbitrary polynomial coefficients (E allowed in s0 only).
EigenProblem custom_problem(const ParamRatFun& lambda0, const ParamRatFun& s0);

struct DeltaSample {
  /// delta_n(x0) / lambda_{n-1}(x0)^2.
  Real value;
  /// Bits surviving the cancellation in delta_n.
  int significantBits = 0;
};

/// Runs n ladder steps on the numeric polynomials at problem.bits and samples
/// the normalized delta_n at x0. Throws PrecisionExhausted.
DeltaSample delta_at(const EigenProblem& problem, const Real& E, int n);

/// Root of delta_n(x0, .) inside a sign-changing bracket: 10 bisections, then
/// bracketed secant. Throws BracketNotFound when the signs agree.
Real find_root(const EigenProblem& problem, int n, std::pair<Real, Real> bracket);

struct EigenResult {
  int k = 0;
  Real E;
  int iterations = 0;
  int stableDigits = 0;
  Real residual;
  double seconds = 0.0;
  unsigned bits = 0;
  /// stableDigits reached the target.
  bool stabilized = false;
  std::vector<TracePoint> trace;
};

/// Sign-change midpoints of delta_n over the scan window.
std::vector<Real> scan_roots(const EigenProblem& problem, int n);

/// Throws BracketNotFound, NonStabilizing and std::invalid_argument.
EigenResult solve_level(const EigenProblem& problem, int k, int targetDigits);

/// Levels 0..kMax. Non-stabilizing levels are returned with stabilized = false.
/// Throws MissedLevel when the energies are not strictly increasing.
std::vector<EigenResult> solve_spectrum(const EigenProblem& problem, int kMax, int targetDigits);

}  // namespace aim::eigen
