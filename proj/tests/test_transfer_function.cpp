#include <doctest.h>

#include <cmath>
#include <random>

#include "pzx/transfer_function.hpp"
#include "test_helpers.hpp"

using pzx::Complex;
using pzx::PoleZeroSet;
using pzx::Polynomial;
using pzx::RationalTF;

TEST_CASE("make_tf canonicalizes to a monic denominator") {
  const RationalTF tf = pzx::make_tf(Polynomial{0.0, 2.0}, Polynomial{20000.0, 2.0});
  CHECK(tf.den.leading() == 1.0);
  CHECK(tf.den.coeffs(0) == doctest::Approx(10000.0).epsilon(1e-15));
  CHECK(tf.num.coeffs(1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS((void)pzx::make_tf(Polynomial{1.0}, Polynomial{0.0}), pzx::ZeroPolynomial);
}

TEST_CASE("eval_tf matches hand evaluation") {
  const RationalTF hp = pzx::make_tf(Polynomial{0.0, 1.0}, Polynomial{10000.0, 1.0});
  CHECK(std::abs(pzx::eval_tf(hp, Complex(0.0, 10000.0))) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

  const RationalTF unity = pzx::make_tf(Polynomial{1.0}, Polynomial{1.0});
  CHECK(pzx::eval_tf(unity, Complex(123.0, -4.0)) == Complex(1.0, 0.0));

  // High-frequency limit of 9652.54 s / (s + 10000).
  const RationalTF appx = pzx::make_tf(Polynomial{0.0, 9652.54}, Polynomial{10000.0, 1.0});
  CHECK(std::abs(pzx::eval_tf(appx, Complex(0.0, 1e12))) ==
        doctest::Approx(9652.54).epsilon(1e-9));
}

TEST_CASE("eval_tf flags evaluation at a pole") {
  const RationalTF tf = pzx::make_tf(Polynomial{1.0}, Polynomial{10000.0, 1.0});
  CHECK_THROWS_AS((void)pzx::eval_tf(tf, Complex(-10000.0, 0.0)), pzx::EvaluationAtPole);
}

TEST_CASE("poles_zeros factors the canonical examples") {
  const RationalTF appx = pzx::make_tf(Polynomial{0.0, 9652.54}, Polynomial{10000.0, 1.0});
  const PoleZeroSet pz = pzx::poles_zeros(appx);
  REQUIRE(pz.zeros.size() == 1);
  REQUIRE(pz.poles.size() == 1);
  CHECK(pz.zeros[0] == Complex(0.0, 0.0));
  CHECK(pz.poles[0].real() == doctest::Approx(-10000.0).epsilon(1e-12));
  CHECK(pz.gain == doctest::Approx(9652.54));

  const PoleZeroSet constant = pzx::poles_zeros(pzx::make_tf(Polynomial{5.0}, Polynomial{1.0}));
  CHECK(constant.zeros.empty());
  CHECK(constant.poles.empty());
  CHECK(constant.gain == 5.0);

  const RationalTF notch =
      pzx::make_tf(Polynomial{1e8, 0.0, 1.0}, Polynomial{1e8, 1177.4, 1.0});
  const PoleZeroSet npz = pzx::poles_zeros(notch);
  CHECK(pzxtest::match_error(npz.zeros, {Complex(0.0, 1e4), Complex(0.0, -1e4)}) < 1e-10);
  CHECK(pzxtest::match_error(npz.poles, {Complex(-588.7, 9982.656575781819),
                                         Complex(-588.7, -9982.656575781819)}) < 1e-10);
}

TEST_CASE("from_pole_zero expands the documented cases") {
  PoleZeroSet pz;
  pz.zeros = {Complex(0.0, 0.0)};
  pz.poles = {Complex(-10000.0, 0.0)};
  pz.gain = 9652.54;
  const RationalTF tf = pzx::from_pole_zero(pz);
  CHECK(tf.num.coeffs(0) == 0.0);
  CHECK(tf.num.coeffs(1) == doctest::Approx(9652.54));
  CHECK(tf.den.coeffs(0) == doctest::Approx(10000.0));
  CHECK(tf.den.coeffs(1) == 1.0);

  PoleZeroSet unity;
  const RationalTF one = pzx::from_pole_zero(unity);
  CHECK(one.num.degree() == 0);
  CHECK(one.num.coeffs(0) == 1.0);
  CHECK(one.den.coeffs(0) == 1.0);

  PoleZeroSet pair;
  pair.poles = {Complex(-1.0, 1.0), Complex(-1.0, -1.0)};
  pair.gain = 2.0;
  const RationalTF biquad = pzx::from_pole_zero(pair);
  CHECK(biquad.num.coeffs(0) == 2.0);
  CHECK(biquad.den.coeffs(0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(biquad.den.coeffs(1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(biquad.den.coeffs(2) == 1.0);

  PoleZeroSet bad;
  bad.poles = {Complex(-1.0, 1.0)};
  CHECK_THROWS_AS((void)pzx::from_pole_zero(bad), pzx::UnpairedComplexRoot);
}

TEST_CASE("property: poles_zeros of from_pole_zero is the identity") {
  std::mt19937_64 rng(31415);
  std::uniform_real_distribution<double> re(-3.0, -0.1);
  std::uniform_real_distribution<double> im(0.1, 3.0);
  std::uniform_real_distribution<double> gain(0.1, 10.0);
  std::uniform_int_distribution<int> pairs(0, 2);
  std::uniform_int_distribution<int> reals(0, 2);

  for (int trial = 0; trial < 200; ++trial) {
    PoleZeroSet pz;
    pz.gain = gain(rng);
    auto fill = [&](std::vector<Complex>* out) {
      const int np = pairs(rng);
      for (int k = 0; k < np; ++k) {
        const Complex r(re(rng), im(rng));
        out->push_back(r);
        out->push_back(std::conj(r));
      }
      const int nr = reals(rng);
      for (int k = 0; k < nr; ++k) out->emplace_back(re(rng), 0.0);
    };
    fill(&pz.poles);
    fill(&pz.zeros);

    const PoleZeroSet back = pzx::poles_zeros(pzx::from_pole_zero(pz));
    CHECK(back.gain == doctest::Approx(pz.gain).epsilon(1e-12));
    CHECK(pzxtest::match_error(back.poles, pz.poles) < 1e-8);
    CHECK(pzxtest::match_error(back.zeros, pz.zeros) < 1e-8);
  }
}

TEST_CASE("property: eval_tf agrees with factored evaluation away from poles") {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> re(-2.0, -0.2);
  std::uniform_real_distribution<double> im(0.2, 2.0);
  std::uniform_real_distribution<double> omega(0.01, 10.0);

  for (int trial = 0; trial < 100; ++trial) {
    PoleZeroSet pz;
    pz.gain = 2.5;
    const Complex p(re(rng), im(rng));
    pz.poles = {p, std::conj(p)};
    pz.zeros = {Complex(re(rng), 0.0)};
    const RationalTF tf = pzx::from_pole_zero(pz);

    const Complex s(0.0, omega(rng));
    Complex factored = pz.gain;
    for (const Complex& z : pz.zeros) factored *= s - z;
    for (const Complex& pp : pz.poles) factored /= s - pp;

    const Complex direct = pzx::eval_tf(tf, s);
    CHECK(std::abs(direct - factored) <= 1e-10 * std::abs(factored));
  }
}

TEST_CASE("reduce cancels matching root pairs and reports the count") {
  // (s+1)(s+2) / ((s+1)(s+3)) -> (s+2)/(s+3)
  const RationalTF tf = pzx::make_tf(pzx::multiply(Polynomial{1.0, 1.0}, Polynomial{2.0, 1.0}),
                                     pzx::multiply(Polynomial{1.0, 1.0}, Polynomial{3.0, 1.0}));
  int cancelled = 0;
  const RationalTF red = pzx::reduce(tf, 1e-9, &cancelled);
  CHECK(cancelled == 1);
  REQUIRE(red.num.degree() == 1);
  REQUIRE(red.den.degree() == 1);
  CHECK(red.num.coeffs(0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(red.den.coeffs(0) == doctest::Approx(3.0).epsilon(1e-12));

  int untouched = -1;
  const RationalTF same = pzx::reduce(red, 1e-9, &untouched);
  CHECK(untouched == 0);
  CHECK((same.num.coeffs - red.num.coeffs).norm() == 0.0);
  CHECK((same.den.coeffs - red.den.coeffs).norm() == 0.0);
}
