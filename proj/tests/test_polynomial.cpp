#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "pzx/polynomial.hpp"
#include "test_helpers.hpp"

using pzx::Complex;
using pzx::Polynomial;

TEST_CASE("polynomial construction trims exact trailing zeros") {
  const Polynomial p{1.0, 2.0, 0.0, 0.0};
  CHECK(p.degree() == 1);
  CHECK(p.coeffs(1) == 2.0);

  const Polynomial zero{0.0, 0.0, 0.0};
  CHECK(zero.is_zero());
  CHECK(zero.degree() == 0);
}

TEST_CASE("eval uses Horner for double and complex arguments") {
  const Polynomial p{3.0, -2.0, 1.0};  // x^2 - 2x + 3
  CHECK(pzx::eval(p, 2.0) == doctest::Approx(3.0));
  const Complex v = pzx::eval(p, Complex(0.0, 1.0));  // -1 - 2i + 3
  CHECK(v.real() == doctest::Approx(2.0));
  CHECK(v.imag() == doctest::Approx(-2.0));
}

TEST_CASE("derivative, multiply, scale") {
  const Polynomial p{1.0, 2.0, 3.0};
  const Polynomial dp = pzx::derivative(p);
  CHECK(dp.degree() == 1);
  CHECK(dp.coeffs(0) == 2.0);
  CHECK(dp.coeffs(1) == 6.0);

  const Polynomial prod = pzx::multiply(Polynomial{1.0, 1.0}, Polynomial{2.0, 1.0});
  CHECK(prod.degree() == 2);
  CHECK(prod.coeffs(0) == 2.0);
  CHECK(prod.coeffs(1) == 3.0);
  CHECK(prod.coeffs(2) == 1.0);

  const Polynomial s = pzx::scale(p, 2.0);
  CHECK(s.coeffs(2) == 6.0);
}

TEST_CASE("roots of s + 10000 is -10000") {
  const auto r = pzx::roots(Polynomial{10000.0, 1.0});
  REQUIRE(r.size() == 1);
  CHECK(r[0].real() == doctest::Approx(-10000.0).epsilon(1e-12));
  CHECK(r[0].imag() == 0.0);
}

TEST_CASE("root of the monomial s is exactly zero") {
  const auto r = pzx::roots(Polynomial{0.0, 1.0});
  REQUIRE(r.size() == 1);
  CHECK(r[0] == Complex(0.0, 0.0));
}

TEST_CASE("quadratic s^2 + 1177.4 s + 1e8 has the hand-derived conjugate pair") {
  const auto r = pzx::roots(Polynomial{1e8, 1177.4, 1.0});
  REQUIRE(r.size() == 2);
  // Quadratic formula: -588.7 +/- j*9982.656575781819.
  const double err = pzxtest::match_error(
      r, {Complex(-588.7, 9982.656575781819), Complex(-588.7, -9982.656575781819)});
  CHECK(err < 1e-10);
}

TEST_CASE("roots rejects degenerate inputs") {
  CHECK_THROWS_AS((void)pzx::roots(Polynomial{0.0}), pzx::ZeroPolynomial);
  CHECK_THROWS_AS((void)pzx::roots(Polynomial{5.0}), pzx::DegreeZero);
}

TEST_CASE("from_roots expands conjugate pairs into real coefficients") {
  const Polynomial p = pzx::from_roots({Complex(-1.0, 1.0), Complex(-1.0, -1.0)});
  REQUIRE(p.degree() == 2);
  CHECK(p.coeffs(0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(p.coeffs(1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(p.coeffs(2) == 1.0);

  CHECK_THROWS_AS((void)pzx::from_roots({Complex(-1.0, 1.0)}), pzx::UnpairedComplexRoot);
  CHECK_THROWS_AS((void)pzx::from_roots({Complex(-1.0, 1.0), Complex(-1.0, -1.5)}),
                  pzx::UnpairedComplexRoot);
}

TEST_CASE("repeated roots come back with multiplicity") {
  // (s+1)^3 = s^3 + 3s^2 + 3s + 1
  const auto r = pzx::roots(Polynomial{1.0, 3.0, 3.0, 1.0});
  REQUIRE(r.size() == 3);
  for (const Complex& root : r) CHECK(std::abs(root - Complex(-1.0, 0.0)) < 1e-4);
}

namespace {

/// Random roots with pairwise separation >= 0.01 * max magnitude: a mix of
/// reals and conjugate pairs, regenerated wholesale until separated.
std::vector<Complex> random_separated_roots(std::mt19937_64& rng, int degree) {
  std::uniform_real_distribution<double> real_part(-2.0, 2.0);
  std::uniform_real_distribution<double> imag_part(0.1, 2.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  while (true) {
    std::vector<Complex> roots;
    while (static_cast<int>(roots.size()) < degree) {
      const bool room_for_pair = degree - static_cast<int>(roots.size()) >= 2;
      if (room_for_pair && coin(rng) < 0.5) {
        const Complex r(real_part(rng), imag_part(rng));
        roots.push_back(r);
        roots.push_back(std::conj(r));
      } else {
        roots.emplace_back(real_part(rng), 0.0);
      }
    }
    double max_mag = 0.0;
    for (const Complex& r : roots) max_mag = std::max(max_mag, std::abs(r));
    bool separated = max_mag > 0.1;
    for (size_t i = 0; i < roots.size() && separated; ++i)
      for (size_t j = i + 1; j < roots.size() && separated; ++j)
        if (std::abs(roots[i] - roots[j]) < 0.01 * max_mag) separated = false;
    if (separated) return roots;
  }
}

}  // namespace

TEST_CASE("property: expanding the computed roots reproduces the monic coefficients") {
  std::mt19937_64 rng(20240811);
  std::uniform_int_distribution<int> deg(1, 10);
  for (int trial = 0; trial < 500; ++trial) {
    const auto true_roots = random_separated_roots(rng, deg(rng));
    const Polynomial p = pzx::from_roots(true_roots);
    const Polynomial rebuilt = pzx::from_roots(pzx::roots(p));

    REQUIRE(rebuilt.degree() == p.degree());
    const double scale = p.coeffs.cwiseAbs().maxCoeff();
    const double err = (rebuilt.coeffs - p.coeffs).cwiseAbs().maxCoeff() / scale;
    CHECK(err < 1e-8);
  }
}

TEST_CASE("property: roots of real polynomials are exactly conjugate-closed") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> deg(1, 10);
  std::uniform_real_distribution<double> coeff(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = deg(rng);
    Eigen::VectorXd c(n + 1);
    for (int k = 0; k <= n; ++k) c(k) = coeff(rng);
    if (c(n) == 0.0) c(n) = 1.0;
    const auto r = pzx::roots(Polynomial(c));

    REQUIRE(static_cast<int>(r.size()) == n);
    std::vector<Complex> pool = r;
    for (const Complex& root : r) {
      if (root.imag() == 0.0) continue;
      auto it = std::find(pool.begin(), pool.end(), std::conj(root));
      REQUIRE(it != pool.end());  // the exact conjugate must be present
    }
  }
}

TEST_CASE("property: every computed root satisfies the residual bound") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> deg(1, 10);
  std::uniform_real_distribution<double> coeff(-5.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = deg(rng);
    Eigen::VectorXd c(n + 1);
    for (int k = 0; k <= n; ++k) c(k) = coeff(rng);
    if (c(n) == 0.0) c(n) = 1.0;
    const Polynomial p(c);

    for (const Complex& r : pzx::roots(p)) {
      double bound = 0.0;
      double rpow = 1.0;
      for (int k = 0; k <= n; ++k) {
        bound += std::abs(c(k)) * rpow;
        rpow *= std::abs(r);
      }
      CHECK(std::abs(pzx::eval(p, r)) <= 1e-8 * bound);
    }
  }
}

TEST_CASE("roots handles widely scaled coefficients") {
  // (s + 1e-3)(s + 1e6) = s^2 + 1000000.001 s + 1000
  const auto r = pzx::roots(Polynomial{1000.0, 1000000.001, 1.0});
  const double err =
      pzxtest::match_error(r, {Complex(-1e-3, 0.0), Complex(-1e6, 0.0)});
  CHECK(err < 1e-9);
}
