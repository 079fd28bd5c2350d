#include "pzx/transfer_function.hpp"

#include <algorithm>
#include <cmath>

namespace pzx {

RationalTF make_tf(Polynomial num, Polynomial den) {
  if (den.is_zero()) throw ZeroPolynomial("make_tf: denominator is identically zero");
  const double lead = den.leading();
  RationalTF tf;
  tf.num = Polynomial((num.coeffs / lead).eval());
  tf.den = Polynomial((den.coeffs / lead).eval());
  tf.den.coeffs(tf.den.coeffs.size() - 1) = 1.0;
  return tf;
}

Complex eval_tf(const RationalTF& tf, Complex s) {
  const Complex d = eval(tf.den, s);
  if (std::abs(d) < 1e-300)
    throw EvaluationAtPole("eval_tf: denominator underflow, evaluation at or near a pole");
  return eval(tf.num, s) / d;
}

PoleZeroSet poles_zeros(const RationalTF& tf) {
  PoleZeroSet pz;
  pz.gain = tf.num.leading();
  if (tf.num.degree() >= 1 && !tf.num.is_zero()) pz.zeros = roots(tf.num);
  if (tf.den.degree() >= 1) pz.poles = roots(tf.den);
  return pz;
}

RationalTF from_pole_zero(const PoleZeroSet& pz) {
  RationalTF tf;
  tf.num = scale(from_roots(pz.zeros), pz.gain);
  tf.den = from_roots(pz.poles);
  return tf;
}

RationalTF reduce(const RationalTF& tf, double rel_tol, int* cancelled) {
  if (cancelled) *cancelled = 0;
  if (tf.num.degree() < 1 || tf.den.degree() < 1 || tf.num.is_zero()) return tf;

  std::vector<Complex> zs = roots(tf.num);
  std::vector<Complex> ps = roots(tf.den);

  double scale_mag = 0.0;
  for (const Complex& r : zs) scale_mag = std::max(scale_mag, std::abs(r));
  for (const Complex& r : ps) scale_mag = std::max(scale_mag, std::abs(r));
  const double tol = rel_tol * scale_mag;

  int n_cancelled = 0;
  for (auto z = zs.begin(); z != zs.end();) {
    auto hit = std::min_element(ps.begin(), ps.end(), [&](const Complex& a, const Complex& b) {
      return std::abs(a - *z) < std::abs(b - *z);
    });
    if (hit != ps.end() && std::abs(*hit - *z) <= tol) {
      ps.erase(hit);
      z = zs.erase(z);
      ++n_cancelled;
    } else {
      ++z;
    }
  }
  if (cancelled) *cancelled = n_cancelled;
  if (n_cancelled == 0) return tf;

  PoleZeroSet pz;
  pz.zeros = std::move(zs);
  pz.poles = std::move(ps);
  pz.gain = tf.num.leading();
  return from_pole_zero(pz);
}

}  // namespace pzx
