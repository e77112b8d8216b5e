#include "doctest.h"

#include "aim/engine/solutions.hpp"
#include "aim/numcore/parse.hpp"

#include <random>

using namespace aim::engine;
using aim::numcore::ParseMode;
using aim::numcore::Rational;
using aim::numcore::parse_expr;
using aim::numcore::pow2;

namespace {

ParamRatFun P(const std::string& t, ParseMode m = ParseMode::plain) { return parse_expr(t, m); }

AimProblem problem(const std::string& l, const std::string& s, ParseMode m = ParseMode::plain) {
  return AimProblem::make(P(l, m), P(s, m));
}

AimState advance(const AimProblem& p, int n) {
  AimState st = initial_state(p);
  for (int k = 0; k < n; ++k) st = aim_step(p, st);
  return st;
}


// -alpha' + alpha^2 + lambda0 alpha - s0, the right side of the perturbed equation.
ParamRatFun riccati_rhs(const AimProblem& p, const ParamRatFun& a) {
  return -a.derivative() + a * a + p.lambda0 * a - p.s0;
}

}  // namespace

TEST_CASE("aim_step on constant coefficients") {
  const AimProblem p = problem("3", "-2");
  const AimState s1 = aim_step(p, initial_state(p));
  CHECK(s1.n == 1);
  CHECK(s1.lambda == P("7"));
  CHECK(s1.s == P("-6"));
}

TEST_CASE("aim_step on the reduced anharmonic problem") {
  for (const char* A : {"1/10", "3"}) {
    const std::string a(A);
    const AimProblem p = problem("2*x", "1 - E + " + a + "*x^4", ParseMode::eigen);
    const AimState s1 = aim_step(p, initial_state(p));
    CHECK(s1.lambda == P("3 - E + 4*x^2 + " + a + "*x^4", ParseMode::eigen));
    CHECK(s1.s == P("2*x*(1-E) + 4*" + a + "*x^3 + 2*" + a + "*x^5", ParseMode::eigen));
  }
}

TEST_CASE("aim_step on the linear-lambda family") {
  // mu = 2, eta = 5
  const AimProblem p = problem("2*x", "-5");
  const AimState s1 = aim_step(p, initial_state(p));
  CHECK(s1.lambda == P("2 - 5 + 4*x^2"));
  CHECK(s1.s == P("-10*x"));
}

TEST_CASE("delta examples") {
  CHECK(delta(advance(problem("2*x", "-4"), 2)).is_zero());
  CHECK(delta(advance(problem("(3/7)*x", "-6/7"), 2)).is_zero());
  const AimProblem dbl = problem("2", "-1");
  AimState st = initial_state(dbl);
  for (int n = 1; n <= 20; ++n) {
    AimState next = aim_step(dbl, st);
    CHECK(delta(next, st) == P("1"));
    st = next;
  }
  CHECK_THROWS(delta(st, st));
}

TEST_CASE("first perturbation of the anharmonic problem") {
  for (const char* A : {"1/10", "2", "7/3"}) {
    const std::string a(A);
    const AimProblem p = problem("2*x", "1 - E + " + a + "*x^4", ParseMode::eigen);
    const ParamRatFun want = P("((E-3)*(E-1) - 2*" + a + "*(E+2)*x^4 + (" + a + ")^2*x^8)/(4*x^2)", ParseMode::eigen);
    CHECK(perturbation(advance(p, 1)) == want);
  }
}

TEST_CASE("alpha examples") {
  CHECK(alpha(advance(problem("2*x", "-5"), 1)) == P("-5/(2*x)"));
  const AimProblem dbl = problem("2", "-1");
  for (int n = 1; n <= 12; ++n) {
    CHECK(alpha(advance(dbl, n)) == ParamRatFun(BigScalar(Rational(-n, n + 1))));
  }
  const BigScalar a40 = alpha(advance(problem("3", "-2"), 40)).constant_value();
  CHECK(aim::numcore::abs_real(a40 + BigScalar(1), 128) < pow2(-38, 128));
}

TEST_CASE("perturbation examples on the linear-lambda family") {
  // symbolic eta and mu are replaced by several exact values
  for (auto [mu, eta] : {std::pair{"2", "5"}, std::pair{"1/3", "7/2"}, std::pair{"3", "-1"}}) {
    const std::string m(mu), e(eta);
    const AimProblem p = problem(m + "*x", "-" + e);
    CHECK(perturbation(advance(p, 1)) == P(e + "*(" + e + "-" + m + ")/(" + m + "^2*x^2)"));
    CHECK(perturbation(advance(p, 2)) ==
          P(e + "*(" + e + "-" + m + ")*(" + e + "-2*" + m + ")/(" + m + "-" + e + "+" + m + "^2*x^2)^2"));
    CHECK(perturbation(advance(p, 3)) ==
          P(e + "*(" + e + "-" + m + ")*(" + e + "-2*" + m + ")*(" + e + "-3*" + m + ")/(" + m + "^2*x^2*(3*" + m +
            "-2*" + e + "+" + m + "^2*x^2)^2)"));
  }
}

TEST_CASE("perturbation identity holds exactly on every test ladder") {
  const std::vector<AimProblem> ladders = {
      problem("2*x", "-5"),        problem("3", "-2"),          problem("2", "-1"),
      problem("2*i", "4+4*i"),     problem("x + 1/x", "x^2"),   problem("1/(x+1)", "-3 + x"),
      problem("2*x", "1 - E + (1/10)*x^4", ParseMode::eigen),
  };
  for (const auto& p : ladders) {
    AimState st = initial_state(p);
    const int depth = p.lambda0.depends_on_x() ? 4 : 10;
    for (int n = 1; n <= depth; ++n) {
      st = aim_step(p, st);
      CHECK(equivalent(perturbation(st), riccati_rhs(p, alpha(st))));
    }
  }
}

TEST_CASE("termination persists on Hermite instances") {
  for (int m = 0; m <= 6; ++m) {
    const AimProblem p = problem("3*x", "-" + std::to_string(3 * m));
    AimState st = initial_state(p);
    for (int n = 1; n <= m + 10; ++n) {
      st = aim_step(p, st);
      if (n >= std::max(m, 1)) {
        CHECK(delta(st).is_zero());
      } else {
        CHECK_FALSE(delta(st).is_zero());
      }
    }
  }
}

TEST_CASE("constant ladders obey the three-term recurrence") {
  for (auto [l, s] : {std::pair{"3", "-2"}, std::pair{"2", "-1"}, std::pair{"2*i", "4+4*i"}, std::pair{"5/3", "7/2"}}) {
    const AimProblem p = problem(l, s);
    std::vector<AimState> st{initial_state(p)};
    for (int n = 1; n <= 51; ++n) st.push_back(aim_step(p, st.back()));
    for (int n = 1; n < 51; ++n) {
      CHECK(st[n + 1].lambda == p.lambda0 * st[n].lambda + p.s0 * st[n - 1].lambda);
      CHECK(st[n + 1].s == p.lambda0 * st[n].s + p.s0 * st[n - 1].s);
    }
  }
}

TEST_CASE("degenerate ladder is reported") {
  const AimProblem p = problem("2", "-4");
  const AimState s1 = aim_step(p, initial_state(p));
  CHECK(s1.lambda.is_zero());
  CHECK_THROWS_AS(alpha(aim_step(p, s1)), DegenerateLadder);
  CHECK_THROWS_AS(run_ladder(p, 5, BigScalar(0)), DegenerateLadder);
  CHECK_THROWS(AimProblem::make(P("0"), P("1")));
}

TEST_CASE("run_ladder on distinct moduli converges monotonically") {
  const DiagnosticSeries s = run_ladder(problem("3", "-2"), 40, BigScalar(0));
  REQUIRE(s.entries.size() == 40);
  Real prev = aim::numcore::make_real(1000, 128);
  for (const auto& e : s.entries) {
    const Real err = aim::numcore::abs_real(e.alpha + BigScalar(1), 128);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < pow2(-38, 128));
}

TEST_CASE("run_ladder stops early on termination") {
  const DiagnosticSeries s = run_ladder(problem("2*x", "-6"), 8, BigScalar(Rational(1, 10000)));
  REQUIRE(s.terminated_at);
  CHECK(*s.terminated_at == 3);
  CHECK(s.at(5).perturbation.is_zero());
  CHECK(s.at(5).alpha == s.at(3).alpha);
}

TEST_CASE("run_ladder double-root metric") {
  const DiagnosticSeries s = run_ladder(problem("2", "-1"), 30, BigScalar(0));
  for (int n = 1; n <= 30; ++n) {
    const Rational want = Rational(1, (n + 2) * (n + 2)) - Rational(1, (n + 3) * (n + 3));
    CHECK(convergence_metric(s, n) == BigScalar(want));
    CHECK(s.at(n).perturbation == BigScalar(Rational(1, (n + 1) * (n + 1))));
  }
  CHECK_THROWS_AS(convergence_metric(s, 31), std::out_of_range);
}

TEST_CASE("run_ladder on the equal-moduli problem oscillates") {
  const AimProblem p = AimProblem::make(P("2*cos(pi/8)"), P("-1"), Mode::floating, 256);
  const DiagnosticSeries s = run_ladder(p, 150, BigScalar(0));
  int big = 0, singular = 0;
  for (const auto& e : s.entries) {
    if (!e.metric.is_finite() || e.metric.re_double() > 1e-3) ++big;
    if (e.singular) ++singular;
  }
  CHECK(big > 50);
  CHECK(singular > 0);
}

TEST_CASE("run_ladder shifts x0 off a pole") {
  const DiagnosticSeries s = run_ladder(problem("x", "1"), 5, BigScalar(0));
  CHECK(s.shifts == 1);
  CHECK(s.x0 == BigScalar(Rational(1, 1000)));
  LadderOptions opt;
  opt.max_shifts = 0;
  CHECK_THROWS_AS(run_ladder(problem("x", "1"), 5, BigScalar(0), opt), PoleCollision);
}

TEST_CASE("degree guard aborts runaway ladders") {
  LadderOptions opt;
  opt.max_degree = 6;
  CHECK_THROWS_AS(run_ladder(problem("x", "x^2"), 20, BigScalar(1), opt), DegreeOverflow);
}

TEST_CASE("taylor truncation keeps low-order behaviour") {
  const BigScalar x0(Rational(1, 2));
  const ParamRatFun t = taylor_truncate(P("1/(1-x)"), BigScalar(0), 4);
  CHECK(t == P("1 + x + x^2 + x^3 + x^4"));
  LadderOptions opt;
  opt.taylor_order = 12;
  const DiagnosticSeries a = run_ladder(problem("2*x", "-5"), 4, x0, opt);
  const DiagnosticSeries b = run_ladder(problem("2*x", "-5"), 4, x0);
  CHECK(a.at(1).alpha == b.at(1).alpha);
}

TEST_CASE("build_solutions recovers x^(eta/mu)") {
  const unsigned bits = 256;
  const AimProblem p = AimProblem::make(P("2*x"), P("-5"), Mode::exact, bits);
  const SolutionPair sol = build_solutions(p, advance(p, 1), BigScalar(Rational(1, 2)));
  REQUIRE(sol.y.factors.size() == 1);
  CHECK(sol.y.factors[0].root == BigScalar(0));
  CHECK(sol.y.factors[0].exponent == BigScalar(Rational(5, 2)));
  CHECK(sol.y.exp_poly.is_zero());
  for (int k = 1; k <= 10; ++k) {
    const Rational x(k, 5);
    Real want = aim::numcore::make_real(x, bits);
    want = pow(want, aim::numcore::make_real(Rational(5, 2), bits));
    CHECK(abs(sol.y.value(BigScalar(x)).re(bits) - want) < pow2(-200, bits));
  }
  // Abel: W(x0) = exp(integral of lambda0) = exp(x0^2) with the integration constant dropped.
  Real g = aim::numcore::make_real(Rational(1, 4), bits);
  g = exp(g);
  CHECK(abs(sol.wronskian_sample.re(bits) - g) < pow2(-60, bits) * g);
}

TEST_CASE("build_solutions on a constant problem spans the exponential basis") {
  const unsigned bits = 192;
  const AimProblem p = AimProblem::make(P("3"), P("-2"), Mode::exact, bits);
  const SolutionPair sol = build_solutions(p, advance(p, 40), BigScalar(0));
  // y ~ e^x
  const BigScalar one(1);
  const Real ey = exp(aim::numcore::make_real(1, bits));
  CHECK(abs(sol.y.value(one).re(bits) - ey) < pow2(-30, bits));
  // z = c1 e^x + c2 e^{2x}: fit on two points, check the third
  auto basis = [&](const BigScalar& x, int k) { return aim::numcore::exp(BigScalar(k) * x, bits); };
  const BigScalar x1(Rational(1, 2)), x2(1), x3(Rational(3, 2));
  const BigScalar z1 = sol.z(x1), z2 = sol.z(x2), z3 = sol.z(x3);
  const BigScalar det = basis(x1, 1) * basis(x2, 2) - basis(x1, 2) * basis(x2, 1);
  const BigScalar c1 = (z1 * basis(x2, 2) - basis(x1, 2) * z2) / det;
  const BigScalar c2 = (basis(x1, 1) * z2 - z1 * basis(x2, 1)) / det;
  const BigScalar pred = c1 * basis(x3, 1) + c2 * basis(x3, 2);
  CHECK(aim::numcore::abs_real(pred - z3, bits) < pow2(-25, bits));
  CHECK(c2.re_double() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_FALSE(sol.wronskian_sample.is_zero());
}

TEST_CASE("y_n satisfies the perturbed equation") {
  const unsigned bits = 256;
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> pt(0.1, 2.0);
  const AimProblem p = AimProblem::make(P("2*x"), P("-5"), Mode::exact, bits);
  AimState st = initial_state(p);
  for (int n = 1; n <= 4; ++n) {
    st = aim_step(p, st);
    const SolutionPair sol = build_solutions(p, st, BigScalar(Rational(1, 2)));
    const ParamRatFun d = perturbation(st);
    for (int k = 0; k < 10; ++k) {
      const BigScalar x = BigScalar::from_double(pt(rng), bits);
      const BigScalar L = sol.y.log_derivative(x), Lp = sol.y.log_derivative_prime(x);
      const BigScalar r = Lp + L * L - p.lambda0.evaluate(x) * L - p.s0.evaluate(x) - d.evaluate(x);
      CHECK(aim::numcore::abs_real(r, bits) < pow2(-120, bits));
    }
    CHECK(aim::numcore::abs_real(sol.wronskian_sample, bits) > pow2(-20, bits));
  }
}

TEST_CASE("solutions refuse a pole on the path") {
  const AimProblem p = AimProblem::make(P("2*x"), P("-5"), Mode::exact, 128);
  const SolutionPair sol = build_solutions(p, advance(p, 1), BigScalar(Rational(1, 2)));
  CHECK_THROWS_AS(sol.z(BigScalar(-1)), PoleCollision);
}
