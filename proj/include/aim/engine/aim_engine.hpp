#pragma once

#include "aim/numcore/ratfun.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace aim::engine {

using numcore::BigScalar;
using numcore::ParamRatFun;

/// lambda_{n-1} vanished identically, so alpha_n and Delta_n are undefined.
class DegenerateLadder : public std::runtime_error {
 public:
  explicit DegenerateLadder(int n)
      : std::runtime_error("degenerate ladder: lambda_" + std::to_string(n) + " is identically zero"), level_(n) {}
  int level() const { return level_; }

 private:
  int level_;
};

class PoleCollision : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegreeOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { exact, floating };

/// y'' = lambda0 y' + s0 y.
struct AimProblem {
  ParamRatFun lambda0;
  ParamRatFun s0;
  Mode mode = Mode::exact;
  unsigned bits = numcore::kDefaultPrecision;

  /// Validates lambda0 and converts the coefficients to floats in floating mode.
  static AimProblem make(ParamRatFun lambda0, ParamRatFun s0, Mode mode = Mode::exact,
                         unsigned bits = numcore::kDefaultPrecision);
};

/// One rung of the ladder. The previous rung is kept so that delta, alpha and
/// the perturbation of this rung can be formed without the caller.
struct AimState {
  int n = 0;
  ParamRatFun lambda;
  ParamRatFun s;
  std::optional<ParamRatFun> prev_lambda;
  std::optional<ParamRatFun> prev_s;
};

AimState initial_state(const AimProblem& problem);

/// lambda_n = lambda'_{n-1} + s_{n-1} + lambda0 lambda_{n-1},
/// s_n = s'_{n-1} + s0 lambda_{n-1}.
AimState aim_step(const AimProblem& problem, const AimState& state);

/// delta_n = lambda_n s_{n-1} - lambda_{n-1} s_n.
ParamRatFun delta(const AimState& stateN, const AimState& stateNminus1);
ParamRatFun delta(const AimState& state);

/// alpha_n = s_{n-1} / lambda_{n-1}. Throws DegenerateLadder if lambda_{n-1} == 0.
ParamRatFun alpha(const AimState& state);
/// alpha_{n+1} = s_n / lambda_n.
ParamRatFun next_alpha(const AimState& state);

/// Delta_n = delta_n / lambda_{n-1}^2.
ParamRatFun perturbation(const AimState& state);

struct LadderOptions {
  /// Abort when the x-degree of lambda_n or s_n exceeds this bound.
  int max_degree = 20000;
  /// Truncate lambda_n, s_n to Taylor polynomials about x0 of this order (0 = off).
  int taylor_order = 0;
  /// Shifts of x0 by 1e-3 allowed on a pole collision.
  int max_shifts = 5;
  bool keep_states = false;
};

struct DiagnosticEntry {
  int n = 0;
  BigScalar alpha;
  BigScalar perturbation;
  /// |Delta_{n+2} - Delta_{n+1}| at x0.
  BigScalar metric;
  /// lambda_{n-1}(x0) was below 2^(-prec/2) with no x-dependence to shift away from.
  bool singular = false;
};

struct DiagnosticSeries {
  BigScalar x0;
  int shifts = 0;
  /// Level n with delta_n identically zero, when the exact ladder detected one.
  std::optional<int> terminated_at;
  /// entries[k] holds level k+1.
  std::vector<DiagnosticEntry> entries;
  std::vector<AimState> states;

  const DiagnosticEntry& at(int n) const;
};

DiagnosticSeries run_ladder(const AimProblem& problem, int nMax, const BigScalar& x0,
                            const LadderOptions& options = {});

/// |Delta_{n+2}(x0) - Delta_{n+1}(x0)|. Throws std::out_of_range when level n
/// is not in the series.
BigScalar convergence_metric(const DiagnosticSeries& series, int n);

/// Taylor polynomial of r about x0 up to x^order (in powers of x, not x - x0).
ParamRatFun taylor_truncate(const ParamRatFun& r, const BigScalar& x0, int order);

}  // namespace aim::engine
