#pragma once

#include <vector>

#include "pzx/polynomial.hpp"

namespace pzx {

/// Rational transfer function H(s) = num(s)/den(s) with real coefficients.
/// Canonical form: den is monic and the overall gain lives in num's leading
/// coefficient. Use make_tf to canonicalize arbitrary coefficient pairs.
struct RationalTF {
  Polynomial num{0.0};
  Polynomial den{1.0};
};

/// Complex poles and zeros plus a real gain; the factored view of a
/// RationalTF. Non-real members occur in conjugate pairs.
struct PoleZeroSet {
  std::vector<Complex> poles;
  std::vector<Complex> zeros;
  double gain = 1.0;
};

/// Canonicalize num/den to a monic denominator. Throws ZeroPolynomial when
/// den is identically zero. Does not cancel common roots; see reduce().
RationalTF make_tf(Polynomial num, Polynomial den);

/// H(s) at a complex point. Throws EvaluationAtPole when |den(s)| underflows
/// the 1e-300 magnitude floor.
Complex eval_tf(const RationalTF& tf, Complex s);

/// Factor a canonical RationalTF: zeros = roots(num), poles = roots(den),
/// gain = leading numerator coefficient. Degree-zero polynomials contribute
/// no roots.
PoleZeroSet poles_zeros(const RationalTF& tf);

/// Expand a pole-zero set back into real numerator/denominator polynomials
/// (monic denominator, gain absorbed into the numerator). Throws
/// UnpairedComplexRoot when a non-real member lacks its conjugate within
/// 1e-9 relative tolerance.
RationalTF from_pole_zero(const PoleZeroSet& pz);

/// Cancel numerator/denominator roots that coincide within
/// rel_tol * max(|roots|). Returns the reduced canonical TF; the number of
/// cancelled pairs is reported through `cancelled` when non-null.
RationalTF reduce(const RationalTF& tf, double rel_tol = 1e-9, int* cancelled = nullptr);

}  // namespace pzx
