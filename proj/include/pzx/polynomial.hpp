#pragma once

#include <Eigen/Dense>
#include <complex>
#include <initializer_list>
#include <vector>

#include "pzx/errors.hpp"

namespace pzx {

using Complex = std::complex<double>;

/// Real-coefficient polynomial in one variable, coefficients stored in
/// ascending powers: coeffs[k] multiplies x^k. The identically-zero
/// polynomial is the single coefficient 0; otherwise the highest-index
/// coefficient is nonzero (exact trailing zeros are trimmed on
/// construction).
struct Polynomial {
  Eigen::VectorXd coeffs;

  Polynomial() : coeffs(Eigen::VectorXd::Zero(1)) {}
  explicit Polynomial(Eigen::VectorXd c);
  Polynomial(std::initializer_list<double> c);

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  bool is_zero() const { return coeffs.size() == 1 && coeffs(0) == 0.0; }
  double leading() const { return coeffs(coeffs.size() - 1); }
};

/// Horner evaluation; instantiable for double and Complex arguments.
template <typename Scalar>
Scalar eval(const Polynomial& p, const Scalar& x) {
  Scalar acc = Scalar(p.coeffs(p.coeffs.size() - 1));
  for (Eigen::Index k = p.coeffs.size() - 2; k >= 0; --k)
    acc = acc * x + Scalar(p.coeffs(k));
  return acc;
}

Polynomial derivative(const Polynomial& p);
Polynomial multiply(const Polynomial& a, const Polynomial& b);
Polynomial scale(const Polynomial& p, double k);

/// Monic real polynomial with the given roots. Non-real roots must occur in
/// conjugate pairs within `pair_rel_tol` relative tolerance; throws
/// UnpairedComplexRoot otherwise.
Polynomial from_roots(const std::vector<Complex>& roots, double pair_rel_tol = 1e-9);

/// All `degree` roots (with multiplicity) of a polynomial of degree >= 1,
/// via companion-matrix eigenvalues plus one Newton polish step per root.
/// Exact zero constant coefficients are stripped first, so roots at the
/// origin come out exactly 0. Real roots have imaginary part exactly 0 and
/// non-real roots occur in exact conjugate pairs.
/// Throws ZeroPolynomial for the zero polynomial, DegreeZero for constants.
std::vector<Complex> roots(const Polynomial& p);

}  // namespace pzx
