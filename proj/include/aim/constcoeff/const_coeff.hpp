#pragma once

#include "aim/numcore/polynomial.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace aim::constcoeff {

using numcore::BigScalar;
using numcore::NumPoly;

enum class CharKind { distinct_moduli, double_root, equal_moduli_distinct };

const char* to_string(CharKind k);

/// Characteristic data of y'' = lambda0 y' + s0 y with constant coefficients.
struct CharClass {
  CharKind kind = CharKind::distinct_moduli;
  /// |r2| <= |r1|. For equal moduli r1 is the root with the larger principal argument.
  BigScalar r1;
  BigScalar r2;
  /// Double root value, or the common modulus in the equal-moduli case.
  BigScalar r;
  /// Principal argument of r1, in (0, pi]; equal-moduli case only.
  BigScalar theta;
};

/// r^2 - lambda0 r - s0 = 0, ordered |r2| <= |r1|.
std::pair<BigScalar, BigScalar> char_roots(const BigScalar& lambda0, const BigScalar& s0, unsigned bits);

/// Exact inputs are classified exactly; float inputs use 2^(-bits/4) * max|r|.
CharClass classify(const BigScalar& lambda0, const BigScalar& s0, unsigned bits);

struct ConstClosedForm {
  CharClass cls;
  /// A (r1 - r2) = r1^2, B (r1 - r2) = s0 r1. Unused for a double root.
  BigScalar A;
  BigScalar B;
};

ConstClosedForm closed_form_constants(const BigScalar& lambda0, const BigScalar& s0, unsigned bits);

/// (lambda_n, s_n) from the closed forms. Double root r:
/// lambda_n = r^(n+1) (n+2), s_n = -r^(n+2) (n+1).
std::pair<BigScalar, BigScalar> closed_form_sequences(const BigScalar& lambda0, const BigScalar& s0, int n,
                                                      unsigned bits);

/// Delta_n = delta_n / lambda_{n-1}^2 for n in [nFrom, nTo], from the closed forms.
std::vector<BigScalar> perturbation_decay(const BigScalar& lambda0, const BigScalar& s0, int nFrom, int nTo,
                                          unsigned bits);

class OscillationSingularity : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// alpha_{n+1} on an equal-moduli conjugate pair r e^{+-i theta}:
/// (2iB sin(n theta) + s0 e^{-in theta}) / (2iA sin(n theta) + lambda0 e^{-in theta}).
/// Returns s0/lambda0 where sin(n theta) vanishes; throws OscillationSingularity
/// when the denominator does.
BigScalar equal_moduli_alpha(const CharClass& cls, const BigScalar& s0, const BigScalar& lambda0, int n,
                             unsigned bits);

/// Exact test of alpha_{n+1} == s0/lambda0 for n = 1..nMax, with lambda0 the
/// algebraic number t, t a root of `minpoly`, and s0 rational.
/// Entry n-1 holds the verdict for n.
std::vector<bool> alpha_equals_ratio_exact(const NumPoly& minpoly, const BigScalar& s0, int nMax);

/// sigma(m, k) in (d/dx - 2x)^m f = sum_k sigma(m,k) C(m,k) H_{m-k} f^(k).
enum class BurchnallSign { minus_one_pow_m_minus_k, minus_one_pow_k, minus_one_pow_m, plus_one };

/// The candidate sign rule that reproduces the m = 1 operator exactly.
BurchnallSign burchnall_sign_convention();

/// (d/dx - 2x)^m applied to f by brute force.
NumPoly burchnall_lhs(int m, const NumPoly& f);
NumPoly burchnall_rhs(int m, const NumPoly& f, BurchnallSign sign);

/// Exact equality of both sides under the oracle-fixed sign. Requires m <= 12
/// and exact coefficients.
bool burchnall_check(int m, const NumPoly& f);

}  // namespace aim::constcoeff
