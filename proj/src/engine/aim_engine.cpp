#include "aim/engine/aim_engine.hpp"

#include <algorithm>

namespace aim::engine {

using numcore::NumPoly;
using numcore::Real;
using numcore::pow2;

namespace {

struct ShiftNeeded {};

int x_degree(const ParamRatFun& r) { return std::max(r.num().degree(), r.den().degree()); }

}  // namespace

AimProblem AimProblem::make(ParamRatFun lambda0, ParamRatFun s0, Mode mode, unsigned bits) {
  if (lambda0.is_zero()) throw std::invalid_argument("lambda0 must not be identically zero");
  bits = std::max(bits, numcore::kMinPrecision);
  if (mode == Mode::floating) {
    lambda0 = lambda0.to_float(bits);
    s0 = s0.to_float(bits);
  }
  return AimProblem{std::move(lambda0), std::move(s0), mode, bits};
}

AimState initial_state(const AimProblem& problem) { return AimState{0, problem.lambda0, problem.s0, {}, {}}; }

AimState aim_step(const AimProblem& problem, const AimState& state) {
  AimState next;
  next.n = state.n + 1;
  next.lambda = state.lambda.derivative() + state.s + problem.lambda0 * state.lambda;
  next.s = state.s.derivative() + problem.s0 * state.lambda;
  next.prev_lambda = state.lambda;
  next.prev_s = state.s;
  return next;
}

ParamRatFun delta(const AimState& stateN, const AimState& stateNminus1) {
  if (stateN.n != stateNminus1.n + 1) throw std::invalid_argument("delta needs consecutive ladder states");
  return stateN.lambda * stateNminus1.s - stateNminus1.lambda * stateN.s;
}

ParamRatFun delta(const AimState& state) {
  if (!state.prev_lambda) throw std::invalid_argument("delta needs n >= 1");
  return state.lambda * *state.prev_s - *state.prev_lambda * state.s;
}

ParamRatFun alpha(const AimState& state) {
  if (!state.prev_lambda) throw std::invalid_argument("alpha needs n >= 1");
  if (state.prev_lambda->is_zero()) throw DegenerateLadder(state.n - 1);
  return *state.prev_s / *state.prev_lambda;
}

ParamRatFun next_alpha(const AimState& state) {
  if (state.lambda.is_zero()) throw DegenerateLadder(state.n);
  return state.s / state.lambda;
}

ParamRatFun perturbation(const AimState& state) {
  if (!state.prev_lambda) throw std::invalid_argument("perturbation needs n >= 1");
  if (state.prev_lambda->is_zero()) throw DegenerateLadder(state.n - 1);
  return delta(state) / state.prev_lambda->pow(2);
}

ParamRatFun taylor_truncate(const ParamRatFun& r, const BigScalar& x0, int order) {
  if (r.has_E()) throw std::invalid_argument("Taylor truncation needs E-free coefficients");
  const NumPoly a = numcore::taylor_shift(r.numeric_num(), x0);
  const NumPoly b = numcore::taylor_shift(r.numeric_den(), x0);
  if (b.coeff(0).is_zero()) throw PoleCollision("Taylor expansion point is a pole");
  std::vector<BigScalar> c(static_cast<std::size_t>(order) + 1);
  for (std::size_t t = 0; t < c.size(); ++t) {
    BigScalar acc = a.coeff(t);
    for (std::size_t u = 1; u <= t; ++u) acc -= b.coeff(u) * c[t - u];
    c[t] = acc / b.coeff(0);
  }
  return ParamRatFun::from_numeric(numcore::taylor_shift(NumPoly(std::move(c)), -x0));
}

const DiagnosticEntry& DiagnosticSeries::at(int n) const {
  if (n < 1 || n > static_cast<int>(entries.size())) throw std::out_of_range("no diagnostic entry for level " + std::to_string(n));
  return entries[static_cast<std::size_t>(n - 1)];
}

namespace {

struct Sample {
  BigScalar lambda;
  BigScalar s;
};

Sample sample_at(const AimState& st, const BigScalar& x0) {
  try {
    return {st.lambda.evaluate(x0), st.s.evaluate(x0)};
  } catch (const std::domain_error&) {
    throw ShiftNeeded{};
  }
}

DiagnosticSeries sample_ladder(const AimProblem& problem, int nMax, const BigScalar& x0, const LadderOptions& opt) {
  const unsigned bits = problem.bits;
  const Real floor = pow2(-static_cast<long>(bits / 2), bits);
  const int last = nMax + 2;

  DiagnosticSeries series;
  series.x0 = x0;
  std::vector<BigScalar> alphas, perturbs;
  std::vector<bool> singular;
  alphas.reserve(static_cast<std::size_t>(last));

  AimState state = initial_state(problem);
  if (opt.keep_states) series.states.push_back(state);
  Sample prev = sample_at(state, x0);
  for (int n = 1; n <= last; ++n) {
    if (series.terminated_at) {
      alphas.push_back(alphas.back());
      perturbs.push_back(BigScalar(0));
      singular.push_back(false);
      continue;
    }
    if (state.lambda.is_zero()) throw DegenerateLadder(n - 1);
    AimState next = aim_step(problem, state);
    if (opt.taylor_order > 0) {
      next.lambda = taylor_truncate(next.lambda, x0, opt.taylor_order);
      next.s = taylor_truncate(next.s, x0, opt.taylor_order);
    }
    if (x_degree(next.lambda) > opt.max_degree || x_degree(next.s) > opt.max_degree) {
      throw DegreeOverflow("ladder degree exceeded " + std::to_string(opt.max_degree) + " at level " + std::to_string(n));
    }
    const Sample cur = sample_at(next, x0);

    bool tiny = prev.lambda.is_zero();
    if (!tiny && problem.mode == Mode::floating) tiny = numcore::abs_real(prev.lambda, bits) < floor;
    if (tiny && state.lambda.depends_on_x()) throw ShiftNeeded{};

    if (tiny && prev.lambda.is_zero()) {
      alphas.push_back(BigScalar::infinity(bits));
      perturbs.push_back(BigScalar::infinity(bits));
    } else {
      alphas.push_back(prev.s / prev.lambda);
      perturbs.push_back((cur.lambda * prev.s - prev.lambda * cur.s) / (prev.lambda * prev.lambda));
    }
    singular.push_back(tiny);

    if (problem.mode == Mode::exact && delta(next).is_zero()) series.terminated_at = n;
    state = std::move(next);
    if (opt.keep_states) series.states.push_back(state);
    prev = cur;
  }

  for (int n = 1; n <= nMax; ++n) {
    const auto k = static_cast<std::size_t>(n - 1);
    DiagnosticEntry e;
    e.n = n;
    e.alpha = alphas[k];
    e.perturbation = perturbs[k];
    const BigScalar a = perturbs[k + 2], b = perturbs[k + 1];
    e.metric = (a.is_finite() && b.is_finite()) ? numcore::abs(a - b, bits) : BigScalar::infinity(bits);
    e.singular = singular[k];
    series.entries.push_back(std::move(e));
  }
  return series;
}

}  // namespace

DiagnosticSeries run_ladder(const AimProblem& problem, int nMax, const BigScalar& x0, const LadderOptions& options) {
  if (nMax < 3) throw std::invalid_argument("run_ladder needs nMax >= 3");
  const BigScalar step(numcore::Rational(1, 1000));
  BigScalar x = x0;
  for (int shift = 0; shift <= options.max_shifts; ++shift) {
    try {
      DiagnosticSeries s = sample_ladder(problem, nMax, x, options);
      s.shifts = shift;
      return s;
    } catch (const ShiftNeeded&) {
      x += step;
    }
  }
  throw PoleCollision("x0 hits a pole after " + std::to_string(options.max_shifts) + " shifts");
}

BigScalar convergence_metric(const DiagnosticSeries& series, int n) {
  const DiagnosticEntry& e = series.at(n);
  if (n + 2 <= static_cast<int>(series.entries.size())) {
    const BigScalar& a = series.at(n + 2).perturbation;
    const BigScalar& b = series.at(n + 1).perturbation;
    if (a.is_finite() && b.is_finite()) {
      const unsigned bits = std::max({a.precision(), b.precision(), numcore::kDefaultPrecision});
      return numcore::abs(a - b, bits);
    }
  }
  return e.metric;
}

}  // namespace aim::engine
