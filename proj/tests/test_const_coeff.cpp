#include "doctest.h"

#include "aim/constcoeff/const_coeff.hpp"
#include "aim/engine/aim_engine.hpp"
#include "aim/numcore/hermite.hpp"
#include "aim/numcore/parse.hpp"

#include <random>

using namespace aim::constcoeff;
using aim::numcore::ParseMode;
using aim::numcore::Rational;
using aim::numcore::Real;
using aim::numcore::pow2;

namespace {

BigScalar C(const char* text, unsigned bits = 256) {
  return aim::numcore::parse_expr(text, ParseMode::plain, bits).constant_value();
}

Real absr(const BigScalar& z, unsigned bits = 256) { return aim::numcore::abs_real(z, bits); }

aim::engine::AimProblem constant_problem(const BigScalar& l, const BigScalar& s) {
  const auto mode = (l.is_exact() && s.is_exact()) ? aim::engine::Mode::exact : aim::engine::Mode::floating;
  return aim::engine::AimProblem::make(aim::engine::ParamRatFun(l), aim::engine::ParamRatFun(s), mode, 256);
}

}  // namespace

TEST_CASE("char_roots examples") {
  auto [a1, a2] = char_roots(BigScalar(3), BigScalar(-2), 256);
  CHECK(a1 == BigScalar(2));
  CHECK(a2 == BigScalar(1));
  auto [d1, d2] = char_roots(BigScalar(2), BigScalar(-1), 256);
  CHECK(d1 == BigScalar(1));
  CHECK(d2 == BigScalar(1));

  const BigScalar l = C("2*cos(pi/8)");
  auto [e1, e2] = char_roots(l, BigScalar(-1), 256);
  // r1 + r2 = lambda0 and r1 r2 = -s0
  CHECK(absr(e1 + e2 - l) < pow2(-128, 256));
  CHECK(absr(e1 * e2 - BigScalar(1)) < pow2(-128, 256));
  CHECK(abs(absr(e1) - 1) < pow2(-128, 256));
}

TEST_CASE("classify examples") {
  const CharClass a = classify(BigScalar(3), BigScalar(-2), 256);
  CHECK(a.kind == CharKind::distinct_moduli);
  CHECK(a.r1 == BigScalar(2));
  CHECK(a.r2 == BigScalar(1));

  const CharClass e = classify(C("2*cos(pi/8)"), BigScalar(-1), 256);
  REQUIRE(e.kind == CharKind::equal_moduli_distinct);
  CHECK(absr(e.r - BigScalar(1)) < pow2(-120, 256));
  CHECK(abs(e.theta.re(256) - aim::numcore::real_pi(256) / 8) < pow2(-120, 256));

  const CharClass c = classify(C("2*i"), C("4+4*i"), 256);
  REQUIRE(c.kind == CharKind::distinct_moduli);
  CHECK(c.r1 == C("2+2*i"));
  CHECK(c.r2 == BigScalar(-2));

  const CharClass d = classify(BigScalar(2), BigScalar(-1), 256);
  CHECK(d.kind == CharKind::double_root);
  CHECK(d.r == BigScalar(1));

  // knife edge: exact inputs never need a tolerance
  CHECK(classify(BigScalar(Rational(2)), BigScalar(Rational(-1) + Rational(1, 1000000000)), 64).kind ==
        CharKind::distinct_moduli);
  CHECK(classify(BigScalar(0), BigScalar(1), 256).kind == CharKind::equal_moduli_distinct);
  const CharClass neg = classify(BigScalar(0), BigScalar(1), 256);
  CHECK(neg.r1 == BigScalar(-1));
  CHECK(abs(neg.theta.re(256) - aim::numcore::real_pi(256)) < pow2(-200, 256));
}

TEST_CASE("closed-form sequence examples") {
  auto [l5, s5] = closed_form_sequences(BigScalar(2), BigScalar(-1), 5, 256);
  CHECK(l5 == BigScalar(7));
  CHECK(s5 == BigScalar(-6));
  auto [l3, s3] = closed_form_sequences(BigScalar(3), BigScalar(-2), 3, 256);
  CHECK(l3 == BigScalar(31));
  CHECK(s3 == BigScalar(-30));
  CHECK(closed_form_constants(BigScalar(3), BigScalar(-2), 256).A == BigScalar(4));
  CHECK(closed_form_sequences(BigScalar(3), BigScalar(-2), 1, 256).first == BigScalar(7));
}

TEST_CASE("closed forms agree exactly with the ladder") {
  const std::vector<std::pair<BigScalar, BigScalar>> cases = {
      {BigScalar(3), BigScalar(-2)}, {BigScalar(2), BigScalar(-1)}, {BigScalar(1), BigScalar(6)},
      {BigScalar(4), BigScalar(-4)}, {C("2*i"), C("4+4*i")},        {BigScalar(Rational(5, 2)), BigScalar(-1)}};
  for (const auto& [l, s] : cases) {
    const auto p = constant_problem(l, s);
    aim::engine::AimState st = aim::engine::initial_state(p);
    for (int n = 1; n <= 50; ++n) {
      st = aim::engine::aim_step(p, st);
      const auto [cl, cs] = closed_form_sequences(l, s, n, 256);
      CHECK(st.lambda.constant_value() == cl);
      CHECK(st.s.constant_value() == cs);
    }
  }
  for (int n = 0; n <= 30; ++n) {
    const auto [l, s] = closed_form_sequences(BigScalar(2), BigScalar(-1), n, 256);
    CHECK(l == BigScalar(n + 2));
    CHECK(s == BigScalar(-(n + 1)));
  }
}

TEST_CASE("A and B satisfy their defining relations") {
  for (auto [l, s] : {std::pair{"3", "-2"}, std::pair{"2*i", "4+4*i"}, std::pair{"1/3", "5"}}) {
    const BigScalar L = C(l), S = C(s);
    const ConstClosedForm f = closed_form_constants(L, S, 256);
    const BigScalar d = f.cls.r1 - f.cls.r2;
    CHECK(absr(f.A * d - f.cls.r1 * f.cls.r1) < pow2(-200, 256));
    CHECK(absr(f.B * d - S * f.cls.r1) < pow2(-200, 256));
  }
}

TEST_CASE("perturbation decay") {
  const auto d = perturbation_decay(BigScalar(3), BigScalar(-2), 1, 41, 256);
  const BigScalar ratio = d[40] / d[39];
  CHECK(absr(ratio - BigScalar(Rational(1, 2))) < Real(1e-3));

  const auto dd = perturbation_decay(BigScalar(2), BigScalar(-1), 1, 200, 256);
  for (int n = 1; n <= 200; ++n) {
    CHECK(absr(dd[n - 1] * BigScalar(n * n)) <= Real(1));
  }

  const auto osc = perturbation_decay(C("2*cos(pi/8)"), BigScalar(-1), 1, 150, 256);
  int big = 0;
  for (int n = 100; n <= 150; ++n) {
    if (!osc[n - 1].is_finite() || absr(osc[n - 1]) > Real(1e-3)) ++big;
  }
  CHECK(big > 20);
}

TEST_CASE("alpha error decays like (r2/r1)^n") {
  const auto p = constant_problem(BigScalar(3), BigScalar(-2));
  const auto series = aim::engine::run_ladder(p, 62, BigScalar(0));
  auto err = [&](int n) { return absr(series.at(n).alpha + BigScalar(1)); };
  // err(n) / (1/2)^n should settle to a constant
  Real lo = err(20) * pow2(20, 256), hi = lo;
  for (int n = 20; n <= 60; ++n) {
    const Real c = err(n) * pow2(n, 256);
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  CHECK(hi / lo < Real(1.0001));
  CHECK(abs(err(41) / err(40) - Real(0.5)) < Real(1e-3));
  // lambda0 + alpha_n approaches r1 = 2
  CHECK(absr(series.at(60).alpha + BigScalar(3) - BigScalar(2)) < pow2(-55, 256));
}

TEST_CASE("complex-coefficient ladder approaches the substitution roots") {
  const auto p = constant_problem(C("2*i"), C("4+4*i"));
  const auto series = aim::engine::run_ladder(p, 80, BigScalar(0));
  const BigScalar r1 = C("2+2*i"), r2(-2);
  // alpha_n -> -r2, lambda0 + alpha_n -> r1, at rate |r2/r1| = 1/sqrt(2)
  CHECK(absr(series.at(80).alpha + r2) < Real(1e-11));
  CHECK(absr(C("2*i") + series.at(80).alpha - r1) < Real(1e-11));
  const Real e40 = absr(series.at(40).alpha + r2), e42 = absr(series.at(42).alpha + r2);
  CHECK(abs(e42 / e40 - Real(0.5)) < Real(1e-3));
  // both exponentials solve y'' = 2i y' + (4+4i) y
  for (const BigScalar& r : {r1, r2}) CHECK((r * r - C("2*i") * r - C("4+4*i")).is_zero());
  CHECK_FALSE((BigScalar(4) - C("2*i") * BigScalar(2) - C("4+4*i")).is_zero());
}

TEST_CASE("equal-moduli alpha") {
  const unsigned bits = 256;
  const BigScalar l4 = C("2*cos(pi/4)"), l8 = C("2*cos(pi/8)"), s0(-1);
  const CharClass c4 = classify(l4, s0, bits), c8 = classify(l8, s0, bits);
  REQUIRE(c4.kind == CharKind::equal_moduli_distinct);
  CHECK(equal_moduli_alpha(c4, s0, l4, 4, bits) == s0 / l4);
  CHECK(equal_moduli_alpha(c8, s0, l8, 8, bits) == s0 / l8);
  CHECK(equal_moduli_alpha(c8, s0, l8, 16, bits) == s0 / l8);

  const auto p = constant_problem(l8, s0);
  const auto series = aim::engine::run_ladder(p, 40, BigScalar(0));
  for (int n : {1, 2, 3, 5, 9, 11, 13, 17, 21, 27}) {
    // series.at(n + 1).alpha is alpha_{n+1}
    CHECK(absr(equal_moduli_alpha(c8, s0, l8, n, bits) - series.at(n + 1).alpha) < pow2(-150, bits));
  }
  // lambda_6 vanishes for theta = pi/8
  CHECK_THROWS_AS(equal_moduli_alpha(c8, s0, l8, 6, bits), OscillationSingularity);
  CHECK_THROWS(equal_moduli_alpha(classify(BigScalar(3), BigScalar(-2), bits), s0, l8, 3, bits));
}

TEST_CASE("equal-moduli subsequences are exactly constant") {
  // 2cos(pi/4) is a root of t^2 - 2; 2cos(pi/8) of t^4 - 4t^2 + 2
  const auto quarter = alpha_equals_ratio_exact(aim::numcore::parse_expr("x^2-2", ParseMode::plain).numeric_num(),
                                                BigScalar(-1), 40);
  const auto eighth = alpha_equals_ratio_exact(
      aim::numcore::parse_expr("x^4-4*x^2+2", ParseMode::plain).numeric_num(), BigScalar(-1), 64);
  for (int n = 1; n <= 40; ++n) CHECK(quarter[n - 1] == (n % 4 == 0));
  for (int n = 1; n <= 64; ++n) CHECK(eighth[n - 1] == (n % 8 == 0));
}

TEST_CASE("Burchnall sign is fixed by the first-order operator") {
  CHECK(burchnall_sign_convention() == BurchnallSign::minus_one_pow_m_minus_k);
  const NumPoly one(BigScalar(1));
  CHECK(burchnall_lhs(1, one) == aim::numcore::hermite_numeric(1) * BigScalar(-1));
  CHECK(burchnall_check(0, one));
  CHECK(burchnall_lhs(0, one) == one);
  const NumPoly x2 = aim::numcore::num_monomial(2);
  CHECK(burchnall_check(3, x2));
  CHECK_FALSE(burchnall_lhs(3, x2) == burchnall_rhs(3, x2, BurchnallSign::plus_one));
}

TEST_CASE("Burchnall identity on random integer polynomials") {
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> c(-20, 20), deg(0, 5);
  for (int t = 0; t < 20; ++t) {
    std::vector<BigScalar> co;
    const int d = deg(rng);
    for (int k = 0; k <= d; ++k) co.emplace_back(c(rng));
    const NumPoly f(co);
    for (int m = 0; m <= 6; ++m) CHECK(burchnall_check(m, f));
  }
  CHECK_THROWS(burchnall_check(13, NumPoly(BigScalar(1))));
}
