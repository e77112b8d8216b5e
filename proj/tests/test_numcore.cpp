#include "doctest.h"

#include "aim/numcore/hermite.hpp"
#include "aim/numcore/parse.hpp"
#include "aim/numcore/roots.hpp"

#include <random>

using namespace aim::numcore;

namespace {

ParamRatFun P(const char* text, ParseMode mode = ParseMode::plain) { return parse_expr(text, mode); }

Rational q(long a, long b = 1) { return Rational(a) / Rational(b); }


// Random exact rational function of modest degree.
ParamRatFun random_ratfun(std::mt19937& rng) {
  std::uniform_int_distribution<int> c(-5, 5), deg(0, 3);
  auto poly = [&](bool nonzero) {
    for (;;) {
      std::vector<EPoly> co;
      const int d = deg(rng);
      for (int k = 0; k <= d; ++k) co.emplace_back(std::vector<BigScalar>{BigScalar(c(rng)), BigScalar(c(rng) % 2)});
      Poly p(std::move(co));
      if (!nonzero || !p.is_zero()) return p;
    }
  };
  Poly den = poly(true);
  if (!is_E_free(den)) den = lift(to_numeric(substitute_E(den, BigScalar(0))).is_zero() ? NumPoly(BigScalar(1)) : to_numeric(substitute_E(den, BigScalar(0))));
  return ParamRatFun(poly(false), den);
}

}  // namespace

TEST_CASE("parse literal polynomial") {
  const ParamRatFun r = P("2*x");
  CHECK(r.num() == lift(NumPoly::monomial(BigScalar(2), 1)));
  CHECK(r.is_polynomial());
}

TEST_CASE("parse eigen-mode potential keeps E symbolic and decimals exact") {
  const ParamRatFun r = P("1 - E + 0.1*x^4", ParseMode::eigen);
  CHECK(r.num().coeff(0) == EPoly(std::vector<BigScalar>{BigScalar(1), BigScalar(-1)}));
  CHECK(r.num().coeff(4) == EPoly(BigScalar(q(1, 10))));
  CHECK(r.num().coeff(1).is_zero());
  CHECK(r.num().degree() == 4);
}

TEST_CASE("parse folds transcendental constants") {
  const ParamRatFun r = P("2*cos(pi/8)");
  REQUIRE(r.is_constant());
  const BigScalar v = r.constant_value();
  const unsigned bits = kDefaultPrecision;
  // Independent route: 2cos(t) = sqrt(2 + sqrt(2)) for t = pi/8.
  const Real expected = boost::multiprecision::sqrt(make_real(2, bits) + boost::multiprecision::sqrt(make_real(2, bits)));
  CHECK(abs(v.re(bits) - expected) < pow2(-240, bits));
  CHECK(v.im(bits) == 0);
  CHECK(decimal_string(v.re(bits), 17) == "1.8477590650225735");
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(P("1 - E"), ParseError);
  try {
    P("2*x + )");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position() == 6);
  }
  CHECK_THROWS_AS(P("cos(x)"), ParseError);
  CHECK_THROWS_AS(P("1/E", ParseMode::eigen), ParseError);
  CHECK_THROWS_AS(P("x^"), ParseError);
  CHECK_THROWS_AS(P("foo"), ParseError);
  CHECK_THROWS_AS(P(""), ParseError);
  CHECK_THROWS_AS(P("1/(x-x)"), ParseError);
}

TEST_CASE("parse complex, unary minus and negative powers") {
  CHECK(P("4+4*i").constant_value() == BigScalar(q(4), q(4)));
  CHECK(P("-x^2") == -P("x*x"));
  CHECK(P("x^-1") == P("1/x"));
  CHECK(P("2.5e-1") == P("1/4"));
  CHECK(P("sqrt(9/4)").constant_value() == BigScalar(q(3, 2)));
}

TEST_CASE("differentiate examples") {
  CHECK(P("x^2").derivative() == P("2*x"));
  CHECK(P("1/x").derivative() == P("-1/x^2"));
  CHECK(P("1 - E + (1/7)*x^4", ParseMode::eigen).derivative() == P("(4/7)*x^3"));
}

TEST_CASE("combine examples") {
  CHECK(ratfun_combine(P("1/x"), P("1/x"), CombineOp::add) == P("2/x"));
  CHECK(ratfun_combine(P("x-1"), P("x+1"), CombineOp::mul) == P("x^2-1"));
  CHECK(ratfun_combine(P("x^2-1"), P("x-1"), CombineOp::div) == P("x+1"));
  CHECK_THROWS(ratfun_combine(P("x"), P("0"), CombineOp::div));
}

TEST_CASE("reduction across E-dependent numerator and denominator") {
  const ParamRatFun a = P("(x*E + E^2)*(x - 2)", ParseMode::eigen);
  const ParamRatFun b = P("(x + E)*(x - 2)", ParseMode::eigen);
  CHECK(a / b == ParamRatFun::E());
}

TEST_CASE("product rule holds exactly on random pairs") {
  std::mt19937 rng(7);
  for (int t = 0; t < 40; ++t) {
    const ParamRatFun a = random_ratfun(rng), b = random_ratfun(rng);
    CHECK(equivalent((a * b).derivative(), a.derivative() * b + a * b.derivative()));
  }
}

TEST_CASE("print then parse is the identity on reduced forms") {
  std::mt19937 rng(11);
  for (int t = 0; t < 40; ++t) {
    const ParamRatFun a = random_ratfun(rng);
    CHECK(parse_expr(to_string(a), ParseMode::eigen) == a);
  }
  const ParamRatFun c = P("(3/4 + 2*i)*x^3 - 1/(x^2+1)");
  CHECK(parse_expr(to_string(c), ParseMode::plain) == c);
}

TEST_CASE("poly_roots examples") {
  const unsigned bits = 256;
  auto r = poly_roots(to_numeric(P("x^2 - 3*x + 2").num()), bits);
  REQUIRE(r.size() == 2);
  CHECK(r[0].value == BigScalar(1));
  CHECK(r[1].value == BigScalar(2));
  CHECK(r[0].multiplicity == 1);

  auto d = poly_roots(to_numeric(P("(x-1)^2").num()), bits);
  REQUIRE(d.size() == 1);
  CHECK(d[0].multiplicity == 2);
  CHECK(d[0].value == BigScalar(1));

  // Float input: the double root has to be found by clustering.
  auto f = poly_roots(to_float(to_numeric(P("(x-1)^2*(x+3)").num()), bits), bits);
  REQUIRE(f.size() == 2);
  CHECK(f[1].multiplicity == 2);
  CHECK(abs_real(f[1].value - BigScalar(1), bits) < pow2(-60, bits));
}

TEST_CASE("poly_roots of the equal-moduli characteristic polynomial") {
  const unsigned bits = 256;
  const ParamRatFun p = P("x^2 - 2*cos(pi/8)*x + 1");
  auto r = poly_roots(to_numeric(p.num()), bits);
  REQUIRE(r.size() == 2);
  Real cs = make_real(bits), sn = make_real(bits);
  const Real t = real_pi(bits) / 8;
  mpfr_sin_cos(sn.backend().data(), cs.backend().data(), t.backend().data(), MPFR_RNDN);
  const Real tol = pow2(-128, bits);
  CHECK(abs(r[0].value.re(bits) - cs) < tol);
  CHECK(abs(abs(r[0].value.im(bits)) - sn) < tol);
  CHECK(abs(r[0].value.im(bits) + r[1].value.im(bits)) < tol);
}

TEST_CASE("poly_roots reproduce the polynomial") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> c(-9, 9);
  const unsigned bits = 192;
  for (int t = 0; t < 12; ++t) {
    std::vector<BigScalar> co;
    const int deg = 2 + t % 6;
    for (int k = 0; k < deg; ++k) co.emplace_back(q(c(rng)), q(c(rng)));
    co.emplace_back(1 + t % 3);
    NumPoly p(co);
    if (t % 4 == 0) p = p * p;  // repeated factors
    const auto roots = poly_roots(p, bits);
    NumPoly prod(p.leading());
    for (const auto& r : roots) {
      prod *= NumPoly(std::vector<BigScalar>{-r.value, BigScalar(1)}).pow(static_cast<unsigned>(r.multiplicity));
    }
    REQUIRE(prod.degree() == p.degree());
    const Real scale = coeff_norm(p, bits);
    for (int k = 0; k <= p.degree(); ++k) {
      CHECK(abs_real(prod.coeff(k) - p.coeff(k), bits) <= pow2(-96, bits) * scale);
    }
  }
}

TEST_CASE("poly_roots rejects the zero polynomial") { CHECK_THROWS(poly_roots(NumPoly(), 64)); }

TEST_CASE("partial fraction examples") {
  const unsigned bits = 256;
  auto a = partial_fractions(P("1/(x^2-1)"), bits);
  REQUIRE(a.poles.size() == 2);
  CHECK(a.polynomial_part.is_zero());
  CHECK(a.poles[0].location == BigScalar(-1));
  CHECK(a.poles[0].residues[0] == BigScalar(q(-1, 2)));
  CHECK(a.poles[1].location == BigScalar(1));
  CHECK(a.poles[1].residues[0] == BigScalar(q(1, 2)));

  // -eta/(mu x) with eta = 5, mu = 2
  auto b = partial_fractions(P("-5/(2*x)"), bits);
  REQUIRE(b.poles.size() == 1);
  CHECK(b.poles[0].location == BigScalar(0));
  CHECK(b.poles[0].residues[0] == BigScalar(q(-5, 2)));

  auto c = partial_fractions(P("x^3/(x-1)"), bits);
  CHECK(c.polynomial_part == to_numeric(P("x^2+x+1").num()));
  REQUIRE(c.poles.size() == 1);
  CHECK(c.poles[0].residues[0] == BigScalar(1));

  auto d = partial_fractions(P("1/(x^2*(x-1))"), bits);
  REQUIRE(d.poles.size() == 2);
  REQUIRE(d.poles[0].multiplicity == 2);
  CHECK(d.poles[0].location == BigScalar(0));
  CHECK(d.poles[0].residues[0] == BigScalar(-1));
  CHECK(d.poles[0].residues[1] == BigScalar(-1));
  CHECK(d.poles[1].residues[0] == BigScalar(1));
}

TEST_CASE("partial fractions reassemble at random points") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> c(-6, 6);
  std::uniform_real_distribution<double> pt(-3, 3);
  const unsigned bits = 256;
  for (int t = 0; t < 10; ++t) {
    std::vector<BigScalar> n, d;
    for (int k = 0; k < 2 + t % 4; ++k) n.emplace_back(c(rng));
    for (int k = 0; k < 1 + t % 5; ++k) d.emplace_back(q(c(rng)), q(t % 2 ? c(rng) : 0));
    d.emplace_back(1);
    NumPoly den(d);
    if (t % 3 == 0) den = den * NumPoly(std::vector<BigScalar>{BigScalar(1), BigScalar(1)}).pow(2);
    ParamRatFun r = ParamRatFun::from_numeric(NumPoly(n), den);
    if (t % 2 == 1) r = r.to_float(bits);
    const auto pd = partial_fractions(r, bits);
    for (int s = 0; s < 16; ++s) {
      const BigScalar x = BigScalar::from_double(pt(rng), bits) + BigScalar::from_double(pt(rng), bits) * BigScalar::imaginary_unit();
      const BigScalar want = r.evaluate(x);
      const BigScalar got = pd.evaluate(x);
      CHECK(abs_real(want - got, bits) <= pow2(-128, bits) * std::max(Real(1), abs_real(want, bits)));
    }
  }
}

TEST_CASE("hermite examples") {
  CHECK(hermite_numeric(0) == NumPoly(BigScalar(1)));
  CHECK(hermite(2) == P("4*x^2-2").num());
  CHECK(hermite(3) == P("8*x^3-12*x").num());
  // proportional to x(mu x^2 - 3) at mu = 2
  CHECK(hermite(3) == P("x*(2*x^2-3)").num() * EPoly(BigScalar(4)));
}

TEST_CASE("hermite satisfies its differential equation") {
  for (int m = 0; m <= 20; ++m) {
    const NumPoly h = hermite_numeric(m);
    const NumPoly lhs = h.derivative().derivative() - NumPoly::monomial(BigScalar(2), 1) * h.derivative() + h * BigScalar(2 * m);
    CHECK(lhs.is_zero());
    CHECK(h.degree() == m);
  }
}
