#include "pzx/polynomial.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace pzx {

namespace {

Eigen::VectorXd trim_leading_zeros(Eigen::VectorXd c) {
  Eigen::Index n = c.size();
  while (n > 1 && c(n - 1) == 0.0) --n;
  if (n == c.size()) return c;
  return c.head(n).eval();
}

}  // namespace

Polynomial::Polynomial(Eigen::VectorXd c) {
  if (c.size() == 0) {
    coeffs = Eigen::VectorXd::Zero(1);
    return;
  }
  coeffs = trim_leading_zeros(std::move(c));
}

Polynomial::Polynomial(std::initializer_list<double> c) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(c.size() == 0 ? 1 : c.size()));
  v.setZero();
  Eigen::Index i = 0;
  for (double x : c) v(i++) = x;
  coeffs = trim_leading_zeros(std::move(v));
}

Polynomial derivative(const Polynomial& p) {
  const Eigen::Index n = p.coeffs.size();
  if (n == 1) return Polynomial{};
  Eigen::VectorXd d(n - 1);
  for (Eigen::Index k = 1; k < n; ++k) d(k - 1) = p.coeffs(k) * static_cast<double>(k);
  return Polynomial(std::move(d));
}

Polynomial multiply(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial{};
  Eigen::VectorXd c = Eigen::VectorXd::Zero(a.coeffs.size() + b.coeffs.size() - 1);
  for (Eigen::Index i = 0; i < a.coeffs.size(); ++i)
    for (Eigen::Index j = 0; j < b.coeffs.size(); ++j) c(i + j) += a.coeffs(i) * b.coeffs(j);
  return Polynomial(std::move(c));
}

Polynomial scale(const Polynomial& p, double k) {
  if (k == 0.0) return Polynomial{};
  return Polynomial((p.coeffs * k).eval());
}

Polynomial from_roots(const std::vector<Complex>& rts, double pair_rel_tol) {
  Polynomial acc{1.0};

  std::vector<Complex> pending;  // non-real roots awaiting a conjugate partner
  for (const Complex& r : rts) {
    if (r.imag() == 0.0) {
      acc = multiply(acc, Polynomial{-r.real(), 1.0});
      continue;
    }
    auto partner = std::find_if(pending.begin(), pending.end(), [&](const Complex& q) {
      const double tol = pair_rel_tol * std::max(std::abs(r), std::abs(q));
      return std::abs(std::conj(q) - r) <= tol;
    });
    if (partner == pending.end()) {
      pending.push_back(r);
      continue;
    }
    // (x - r)(x - conj r) expanded with the matched pair
    const Complex q = *partner;
    pending.erase(partner);
    const double sum = r.real() + q.real();
    const double prod = (r * q).real();
    acc = multiply(acc, Polynomial{prod, -sum, 1.0});
  }
  if (!pending.empty())
    throw UnpairedComplexRoot("from_roots: non-real root without a conjugate partner");
  return acc;
}

std::vector<Complex> roots(const Polynomial& p) {
  if (p.is_zero()) throw ZeroPolynomial("roots: polynomial is identically zero");
  if (p.degree() == 0) throw DegreeZero("roots: constant polynomial has no roots");

  // Exact zeros in the low-order coefficients are roots at the origin.
  Eigen::Index low = 0;
  while (p.coeffs(low) == 0.0) ++low;
  std::vector<Complex> result(static_cast<size_t>(low), Complex(0.0, 0.0));

  const Eigen::Index n = p.coeffs.size() - 1 - low;  // degree of the deflated part
  if (n == 0) return result;

  // Scale the variable so the remaining roots sit near the unit circle;
  // the companion eigensolver is not balanced, so this matters for
  // polynomials with large dynamic range.
  const double c_low = std::abs(p.coeffs(low));
  const double c_high = std::abs(p.coeffs(p.coeffs.size() - 1));
  double alpha = std::pow(c_low / c_high, 1.0 / static_cast<double>(n));
  if (!std::isfinite(alpha) || alpha <= 0.0) alpha = 1.0;

  // Monic coefficients of q(t) = p(alpha t) / (lead * alpha^n).
  Eigen::VectorXd b(n + 1);
  for (Eigen::Index k = 0; k <= n; ++k)
    b(k) = p.coeffs(low + k) * std::pow(alpha, static_cast<double>(k));
  b /= b(n);

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) companion(i, n - 1) = -b(i);

  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw Error("roots: companion eigensolver failed to converge");

  const Polynomial dp = derivative(p);
  for (Eigen::Index i = 0; i < n; ++i) {
    Complex r = solver.eigenvalues()(i) * alpha;
    // One Newton step against the original polynomial; kept only if it
    // reduces the residual. Complex arithmetic commutes with conjugation,
    // so conjugate eigenpairs stay exact conjugates through the polish.
    const Complex fr = eval(p, r);
    const Complex dfr = eval(dp, r);
    if (std::abs(dfr) > 0.0) {
      const Complex r2 = r - fr / dfr;
      if (std::abs(eval(p, r2)) < std::abs(fr)) r = r2;
    }
    result.push_back(r);
  }
  return result;
}

}  // namespace pzx
