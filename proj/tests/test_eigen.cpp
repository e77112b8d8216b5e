#include "doctest.h"

#include "aim/eigen/eigen_solver.hpp"
#include "aim/numcore/parse.hpp"

using namespace aim::eigen;
using aim::numcore::make_real;
using aim::numcore::Rational;
using aim::numcore::pow2;

namespace {

Real R(const char* text, unsigned bits = 512) {
  Real r = make_real(bits);
  r = Real(text);
  return r;
}

// Reference energies from an independent harmonic-basis diagonalization.
const char* kLevelsA01[] = {"1.0652855095437176888570916287891", "3.3068720131529135071281216846929",
                            "5.7479592688335633047335031184771", "8.3526778257857547121552577346437"};

Real rel_err(const Real& a, const Real& b) { return abs(a - b) / abs(b); }

}  // namespace

TEST_CASE("reduced equation coefficients") {
  const auto p = reduce_schrodinger(BigScalar(Rational(1, 10)));
  CHECK(p.lambda0 == ParamRatFun::x() * ParamRatFun(BigScalar(2)));
  const auto& c = p.s0.num().coefficients();
  REQUIRE(c.size() == 5);
  CHECK(c[0] == aim::numcore::EPoly(std::vector<BigScalar>{BigScalar(1), BigScalar(-1)}));
  CHECK(c[1].is_zero());
  CHECK(c[4] == aim::numcore::EPoly(BigScalar(Rational(1, 10))));
  CHECK(reduce_schrodinger(BigScalar(0)).s0 == aim::numcore::parse_expr("1 - E", aim::numcore::ParseMode::eigen));
  CHECK(reduce_schrodinger(BigScalar(2)).s0 == aim::numcore::parse_expr("1 - E + 2*x^4", aim::numcore::ParseMode::eigen));
  CHECK_THROWS_AS(reduce_schrodinger(BigScalar(-1)), std::invalid_argument);
  auto bad = p;
  bad.x0 = BigScalar(0);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("fast ladder agrees with the generic engine") {
  using namespace aim::engine;
  const auto p = reduce_schrodinger(BigScalar(Rational(1, 10)));
  const BigScalar E(Rational(5, 2));
  const AimProblem g = AimProblem::make(p.lambda0, p.s0.substitute_E(E), Mode::exact);
  AimState st = initial_state(g);
  for (int n = 1; n <= 8; ++n) {
    st = aim_step(g, st);
    const BigScalar exact = perturbation(st).evaluate(p.x0);
    const DeltaSample fast = delta_at(p, E.re(512), n);
    CHECK(rel_err(fast.value, exact.re(512)) < pow2(-400, 512));
    CHECK(fast.significantBits > 400);
  }
}

TEST_CASE("first termination condition changes sign near 1 and 3") {
  const auto p = reduce_schrodinger(BigScalar(Rational(1, 10)));
  CHECK(delta_at(p, R("0.9"), 1).value * delta_at(p, R("1.1"), 1).value < 0);
  CHECK(delta_at(p, R("2.9"), 1).value * delta_at(p, R("3.1"), 1).value < 0);
  CHECK(delta_at(p, R("1.5"), 1).value * delta_at(p, R("2.5"), 1).value > 0);
}

TEST_CASE("harmonic roots approach the odd integers") {
  const auto p = reduce_schrodinger(BigScalar(0));
  const auto roots = scan_roots(p, 30);
  REQUIRE(roots.size() >= 5);
  for (int k = 0; k < 5; ++k) CHECK(abs(roots[static_cast<std::size_t>(k)] - (2 * k + 1)) <= Real(0.05));
  CHECK(abs(find_root(p, 60, {R("0.5"), R("1.5")}) - 1) < Real(1e-30));
}

TEST_CASE("root isolation at fixed depth") {
  const auto p = reduce_schrodinger(BigScalar(Rational(1, 10)));
  const Real e0 = find_root(p, 152, {R("1.0"), R("1.1")});
  CHECK(rel_err(e0, R(kLevelsA01[0])) < Real(1e-20));
  CHECK(abs(delta_at(p, e0, 152).value) < Real(1e-60));
  const Real e1 = find_root(p, 159, {R("3.2"), R("3.4")});
  CHECK(rel_err(e1, R(kLevelsA01[1])) < Real(1e-18));
  CHECK(find_root(p, 152, {R("1.0"), R("1.1")}) == e0);
  CHECK_THROWS_AS(find_root(p, 60, {R("1.5"), R("2.5")}), BracketNotFound);
}

TEST_CASE("precision scaling keeps delta") {
  auto p = reduce_schrodinger(BigScalar(Rational(1, 10)));
  p.bits = 256;
  const DeltaSample lo = delta_at(p, R("2.25", 256), 80);
  p.bits = 512;
  const DeltaSample hi = delta_at(p, R("2.25"), 80);
  CHECK(rel_err(lo.value, hi.value) < pow2(-(lo.significantBits - 8), 512));
  CHECK(hi.significantBits > lo.significantBits);
}

TEST_CASE("perturbation differences shrink along the ladder at an eigenvalue") {
  const auto p = reduce_schrodinger(BigScalar(Rational(1, 10)));
  const Real E = R(kLevelsA01[0]);
  Real last = make_real(512);
  for (int n : {20, 60, 100, 140}) {
    const Real m = abs(delta_at(p, E, n + 2).value - delta_at(p, E, n + 1).value);
    if (n > 20) CHECK(m < last);
    last = m;
  }
  CHECK(last < Real(1e-14));
}

TEST_CASE("harmonic level is exact") {
  const auto r = solve_level(reduce_schrodinger(BigScalar(0)), 4, 25);
  CHECK(r.stabilized);
  CHECK(r.stableDigits >= 25);
  CHECK(abs(r.E - 9) < Real(1e-25));
}

TEST_CASE("quartic ground state to 20 digits") {
  const auto r = solve_level(reduce_schrodinger(BigScalar(Rational(1, 10))), 0, 20);
  CHECK(r.stabilized);
  CHECK(r.iterations <= 300);
  CHECK(rel_err(r.E, R(kLevelsA01[0])) < Real(1e-20));
  CHECK(r.trace.size() >= 3);
  CHECK(r.trace.back().n == r.iterations);
}

TEST_CASE("spectrum prefixes and ordering") {
  const auto rs = solve_spectrum(reduce_schrodinger(BigScalar(Rational(1, 10))), 3, 15);
  REQUIRE(rs.size() == 4);
  for (std::size_t k = 0; k < rs.size(); ++k) {
    CHECK(rs[k].stabilized);
    CHECK(rs[k].k == static_cast<int>(k));
    CHECK(rel_err(rs[k].E, R(kLevelsA01[k])) < Real(1e-15));
    if (k > 0) CHECK(rs[k].E > rs[k - 1].E);
  }
}

TEST_CASE("sampling point does not move the eigenvalue") {
  std::vector<Real> es;
  for (const char* x0 : {"1/10000", "1/1000", "1/100"}) {
    auto p = reduce_schrodinger(BigScalar(Rational(1, 10)));
    p.x0 = BigScalar(Rational(x0));
    es.push_back(solve_level(p, 1, 12).E);
  }
  CHECK(rel_err(es[1], es[0]) < Real(1e-12));
  CHECK(rel_err(es[2], es[0]) < Real(1e-12));
}

TEST_CASE("halving the scan step changes nothing") {
  auto p = reduce_schrodinger(BigScalar(Rational(1, 10)));
  const Real a = solve_level(p, 2, 12).E;
  p.scan_step = 0.05;
  const Real b = solve_level(p, 2, 12).E;
  CHECK(rel_err(a, b) < Real(1e-12));
}

TEST_CASE("weak coupling approaches the harmonic ground state from above") {
  const Real e3 = solve_level(reduce_schrodinger(BigScalar(Rational(1, 1000))), 0, 15).E;
  const Real e4 = solve_level(reduce_schrodinger(BigScalar(Rational(1, 10000))), 0, 15).E;
  CHECK(e4 > 1);
  CHECK(e3 > e4);
  // first-order shift 3A/4
  CHECK(abs(e4 - 1 - Real(0.75e-4)) < Real(1e-7));
  CHECK(abs(e3 - 1 - Real(0.75e-3)) < Real(1e-5));
}

TEST_CASE("solver errors") {
  auto p = reduce_schrodinger(BigScalar(Rational(1, 10)));
  CHECK_THROWS_AS(solve_level(p, 0, 2000), std::invalid_argument);
  p.n_max = 80;
  try {
    solve_level(p, 0, 30);
    FAIL("expected NonStabilizing");
  } catch (const NonStabilizing& e) {
    CHECK_FALSE(e.trace().empty());
    CHECK(e.trace().back().n <= 80);
  }
  auto q = reduce_schrodinger(BigScalar(Rational(1, 10)));
  q.scan_hi = 2.0;
  CHECK_THROWS_AS(solve_level(q, 3, 10), BracketNotFound);
  CHECK_THROWS_AS(delta_at(q, R("1"), 0), std::invalid_argument);
}

TEST_CASE("custom polynomial problem") {
  using aim::numcore::parse_expr;
  using aim::numcore::ParseMode;
  // the harmonic problem entered by hand
  const auto p = custom_problem(parse_expr("2*x", ParseMode::eigen), parse_expr("1 - E", ParseMode::eigen));
  CHECK(abs(solve_level(p, 1, 20).E - 3) < Real(1e-20));
  CHECK_THROWS_AS(custom_problem(parse_expr("1/x", ParseMode::eigen), parse_expr("-E", ParseMode::eigen)),
                  std::invalid_argument);
}
