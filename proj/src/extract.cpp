#include "pzx/extract.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace pzx {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double median(std::vector<double> v) {
  const size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<long>(mid), v.end());
  double hi = v[mid];
  if (v.size() % 2 == 0) {
    std::nth_element(v.begin(), v.begin() + static_cast<long>(mid) - 1, v.end());
    return 0.5 * (hi + v[mid - 1]);
  }
  return hi;
}

/// Shared Sanathanan-Koerner driver: solve the iteratively reweighted linear
/// least-squares problem min sum_k w_k |N(z_k) - g_k * D(z_k)|^2 over
/// numerator coefficients n_0..n_m and denominator coefficients d_1..d_n
/// (d_0 pinned to 1), with w_k = 1/|D_prev(z_k)|^2 and D_0 = 1. The z_k may
/// be complex (rows split into real and imaginary parts) or real. Returns
/// the stacked coefficient vector [n_0..n_m, d_1..d_n]; `converged` reports
/// whether the final sweep moved the coefficients by less than 1e-6.
Eigen::VectorXd sk_iterate(const std::vector<Complex>& z, const std::vector<Complex>& g, int m,
                           int n, bool complex_rows, bool* converged) {
  const int n_unknowns = m + 1 + n;
  const Eigen::Index n_pts = static_cast<Eigen::Index>(z.size());
  const Eigen::Index n_rows = complex_rows ? 2 * n_pts : n_pts;

  // Powers of z up to max(m, n), reused every sweep.
  const int max_pow = std::max(m, n);
  Eigen::MatrixXcd zp(n_pts, max_pow + 1);
  for (Eigen::Index k = 0; k < n_pts; ++k) {
    zp(k, 0) = 1.0;
    for (int j = 1; j <= max_pow; ++j) zp(k, j) = zp(k, j - 1) * z[static_cast<size_t>(k)];
  }

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n_unknowns);
  Eigen::VectorXd den_prev = Eigen::VectorXd::Zero(n);  // d_1..d_n of the previous sweep
  double change = std::numeric_limits<double>::infinity();

  constexpr int kMaxSweeps = 25;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_rows, n_unknowns);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n_rows);

    for (Eigen::Index k = 0; k < n_pts; ++k) {
      Complex d_prev = 1.0;
      for (int i = 1; i <= n; ++i) d_prev += den_prev(i - 1) * zp(k, i);
      const double wk = 1.0 / std::max(std::norm(d_prev), 1e-300);
      const double sw = std::sqrt(wk);

      const Complex gk = g[static_cast<size_t>(k)];
      for (int j = 0; j <= m; ++j) {
        const Complex col = sw * zp(k, j);
        if (complex_rows) {
          a(2 * k, j) = col.real();
          a(2 * k + 1, j) = col.imag();
        } else {
          a(k, j) = col.real();
        }
      }
      for (int i = 1; i <= n; ++i) {
        const Complex col = -sw * gk * zp(k, i);
        if (complex_rows) {
          a(2 * k, m + i) = col.real();
          a(2 * k + 1, m + i) = col.imag();
        } else {
          a(k, m + i) = col.real();
        }
      }
      const Complex rhs = sw * gk;
      if (complex_rows) {
        b(2 * k) = rhs.real();
        b(2 * k + 1) = rhs.imag();
      } else {
        b(k) = rhs.real();
      }
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < n_unknowns)
      throw IllConditioned("rational fit: least-squares system is rank-deficient (rank " +
                           std::to_string(qr.rank()) + " of " + std::to_string(n_unknowns) + ")");
    const Eigen::VectorXd x_new = qr.solve(b);
    if (!x_new.allFinite()) throw IllConditioned("rational fit: non-finite solution");

    const double prev_norm = x.lpNorm<Eigen::Infinity>();
    change = (x_new - x).lpNorm<Eigen::Infinity>() / std::max(prev_norm, 1e-300);
    x = x_new;
    den_prev = x.segment(m + 1, n);
    if (sweep > 0 && change < 1e-10) break;
  }

  *converged = change <= 1e-6;
  return x;
}

/// Zero out coefficients buried under the least-squares noise floor. In the
/// median-scaled variable the coefficients of an in-band fit are O(1)
/// balanced, so a relative threshold separates genuine structure (origin
/// roots, reduced degree) from rounding debris; a root this far below the
/// sampled band is unresolvable from the data anyway, and keeping the debris
/// splits exact origin roots into spurious tiny ones.
void snap_small_coeffs(Eigen::VectorXd& c) {
  const double floor = 1e-7 * c.cwiseAbs().maxCoeff();
  for (Eigen::Index j = 0; j < c.size(); ++j)
    if (std::abs(c(j)) < floor) c(j) = 0.0;
}

/// Unscale coefficients solved in z = s/s_scale back to the natural
/// variable: a coefficient on z^j becomes coeff/s_scale^j on s^j.
Eigen::VectorXd unscale_coeffs(const Eigen::VectorXd& c, double s_scale) {
  Eigen::VectorXd out = c;
  double p = 1.0;
  for (Eigen::Index j = 0; j < out.size(); ++j) {
    out(j) /= p;
    p *= s_scale;
  }
  return out;
}

/// Split the roots of an even polynomial E(s) = F(-s^2) into the spectral
/// factor's share: one representative per {r, -r} pair — the Re < 0 member
/// for off-axis pairs, exact 0 once per origin pair, and one conjugate pair
/// per quadruple of imaginary-axis roots.
std::vector<Complex> half_roots(const Polynomial& even_poly, const char* who) {
  std::vector<Complex> out;
  if (even_poly.degree() < 1) return out;

  const std::vector<Complex> all = roots(even_poly);

  std::vector<double> axis_im;
  std::vector<Complex> lhp, rhp;
  int origin = 0;
  for (const Complex& r : all) {
    if (r == 0.0) {
      ++origin;
    } else if (std::abs(r.real()) <= 1e-4 * std::abs(r)) {
      axis_im.push_back(std::abs(r.imag()));
    } else if (r.real() < 0.0) {
      lhp.push_back(r);
    } else {
      rhp.push_back(r);
    }
  }

  if (origin % 2 != 0 || lhp.size() != rhp.size() || axis_im.size() % 4 != 0)
    throw IllConditioned(std::string(who) +
                         ": roots do not pair up for spectral factorization (origin " +
                         std::to_string(origin) + ", left " + std::to_string(lhp.size()) +
                         ", right " + std::to_string(rhp.size()) + ", axis " +
                         std::to_string(axis_im.size()) + ")");

  for (int k = 0; k < origin / 2; ++k) out.push_back(0.0);
  out.insert(out.end(), lhp.begin(), lhp.end());

  // Imaginary-axis locations appear four times (twice in F(-s^2), as a
  // conjugate pair each); the geometric mean of the quadruple cancels the
  // double-root splitting error.
  std::sort(axis_im.begin(), axis_im.end());
  for (size_t k = 0; k + 3 < axis_im.size(); k += 4) {
    const double y = std::sqrt(std::sqrt(axis_im[k] * axis_im[k + 1]) *
                               std::sqrt(axis_im[k + 2] * axis_im[k + 3]));
    out.emplace_back(0.0, y);
    out.emplace_back(0.0, -y);
  }
  return out;
}

std::vector<Complex> imag_grid(const SweepDataset& ds, double scale) {
  std::vector<Complex> z;
  z.reserve(ds.samples.size());
  for (const FrequencySample& s : ds.samples) z.emplace_back(0.0, s.omega / scale);
  return z;
}

double median_omega(const SweepDataset& ds) {
  std::vector<double> w;
  w.reserve(ds.samples.size());
  for (const FrequencySample& s : ds.samples) w.push_back(s.omega);
  double med = std::abs(median(std::move(w)));
  return med > 0.0 ? med : 1.0;
}

}  // namespace

RationalTF exp_to_rational(double a, double b, double c, double d,
                           std::vector<std::string>* warnings) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(d))
    throw InvalidRange("exp_to_rational: parameters must be finite");
  if (d >= 0.0)
    throw NonDecayingTerm("exp_to_rational: second exponent d = " + fmt(d) +
                          " does not decay (d < 0 required)");

  const double slope = a * (b - d);  // numerator coefficient on x
  const double intercept = a + c;    // numerator constant term

  if (std::abs(slope) <= 1e-300) {
    if (intercept != 0.0)
      throw DegenerateSlope("exp_to_rational: a(b-d) vanished with nonzero a+c = " +
                            fmt(intercept) + "; the linearization has no x term");
    if (warnings)
      warnings->push_back(
          "exp_to_rational: numerator vanished entirely (a+c = 0 and a(b-d) = 0); "
          "returning the zero transfer function");
    return make_tf(Polynomial{0.0}, Polynomial{1.0, -d});
  }

  RationalTF tf = make_tf(Polynomial{intercept, slope}, Polynomial{1.0, -d});
  int cancelled = 0;
  tf = reduce(tf, 1e-9, &cancelled);
  if (cancelled > 0 && warnings)
    warnings->push_back(
        "exp_to_rational: linearized numerator and denominator shared a root; "
        "cancelled to a lower-order transfer function");
  return tf;
}

RationalTF gaussian_to_rational(double a, double b, double c) {
  if (!(a > 0.0) || !(c > 0.0) || !std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c))
    throw NonPositiveParams("gaussian_to_rational: need a > 0 and c > 0, got a = " + fmt(a) +
                            ", c = " + fmt(c));
  const double delta = c * std::sqrt(std::numbers::ln2 / 2.0);
  if (!(b > 2.0 * delta))
    throw PeakTooBroad("gaussian_to_rational: peak at b = " + fmt(b) +
                       " is not well inside the positive axis (need b > " + fmt(2.0 * delta) +
                       ")");
  const double w0 = b;
  const double bandwidth = 2.0 * delta;  // full -3 dB width; Q = w0/bandwidth
  return make_tf(Polynomial{0.0, a * bandwidth}, Polynomial{w0 * w0, bandwidth, 1.0});
}

RationalTF fit_rational_complex(const SweepDataset& ds, int m, int n) {
  if (m < 0 || m > n || n > 10)
    throw InvalidRange("fit_rational_complex: need 0 <= m <= n <= 10, got (" +
                       std::to_string(m) + ", " + std::to_string(n) + ")");
  if (!ds.has_phase())
    throw MissingPhase("fit_rational_complex: every sample must carry phase data");
  const size_t needed = static_cast<size_t>(m + n + 1);
  if (ds.samples.size() < needed)
    throw InsufficientSamples("fit_rational_complex: " + std::to_string(ds.samples.size()) +
                              " samples for " + std::to_string(needed) + " coefficients");

  const double w_med = median_omega(ds);
  const std::vector<Complex> z = imag_grid(ds, w_med);
  std::vector<Complex> h;
  h.reserve(ds.samples.size());
  for (const FrequencySample& s : ds.samples)
    h.push_back(std::polar(s.magnitude, *s.phase));

  bool converged = false;
  const Eigen::VectorXd x = sk_iterate(z, h, m, n, /*complex_rows=*/true, &converged);

  Eigen::VectorXd num_s = x.head(m + 1);
  Eigen::VectorXd den_s(n + 1);
  den_s(0) = 1.0;
  den_s.tail(n) = x.tail(n);
  snap_small_coeffs(num_s);
  snap_small_coeffs(den_s);
  const Eigen::VectorXd num_c = unscale_coeffs(num_s, w_med);
  const Eigen::VectorXd den_c = unscale_coeffs(den_s, w_med);

  RationalTF tf = reduce(make_tf(Polynomial(num_c), Polynomial(den_c)));
  if (!converged)
    throw NonConvergent("fit_rational_complex: coefficients still moving after 25 sweeps",
                        tf);
  return tf;
}

RationalTF fit_magnitude_squared(const SweepDataset& ds, int m, int n) {
  if (m < 0 || m > n || n > 5)
    throw InvalidRange("fit_magnitude_squared: need 0 <= m <= n <= 5, got (" +
                       std::to_string(m) + ", " + std::to_string(n) + ")");
  const size_t needed = static_cast<size_t>(m + n + 1);
  if (ds.samples.size() < needed)
    throw InsufficientSamples("fit_magnitude_squared: " + std::to_string(ds.samples.size()) +
                              " samples for " + std::to_string(needed) + " coefficients");

  const Eigen::Index n_pts = static_cast<Eigen::Index>(ds.samples.size());
  Eigen::VectorXd g(n_pts);
  for (Eigen::Index k = 0; k < n_pts; ++k) {
    const double mag = ds.samples[static_cast<size_t>(k)].magnitude;
    g(k) = mag * mag;
  }

  // Flat magnitude cannot be factored: constant |H| is satisfied equally by
  // a constant and by any all-pass. The caller must supply phase data.
  const double g_norm = g.norm();
  const double flat_residual = (g.array() - g.mean()).matrix().norm();
  if (g_norm <= 0.0 || flat_residual < 1e-3 * g_norm)
    throw AllPassAmbiguity(
        "fit_magnitude_squared: magnitude response is flat; an all-pass cannot be "
        "distinguished from a constant without phase data");

  // Work in u = omega^2, scaled by its median.
  std::vector<double> u(static_cast<size_t>(n_pts));
  for (Eigen::Index k = 0; k < n_pts; ++k) {
    const double w = ds.samples[static_cast<size_t>(k)].omega;
    u[static_cast<size_t>(k)] = w * w;
  }
  double u_med = std::abs(median(u));
  if (!(u_med > 0.0)) u_med = 1.0;

  std::vector<Complex> zu;
  zu.reserve(u.size());
  for (double uk : u) zu.emplace_back(uk / u_med, 0.0);
  std::vector<Complex> gc;
  gc.reserve(u.size());
  for (Eigen::Index k = 0; k < n_pts; ++k) gc.emplace_back(g(k), 0.0);

  bool converged = false;
  const Eigen::VectorXd x = sk_iterate(zu, gc, m, n, /*complex_rows=*/false, &converged);

  Eigen::VectorXd p_s = x.head(m + 1);
  Eigen::VectorXd q_s(n + 1);
  q_s(0) = 1.0;
  q_s.tail(n) = x.tail(n);
  snap_small_coeffs(p_s);
  snap_small_coeffs(q_s);
  const Eigen::VectorXd p_c = unscale_coeffs(p_s, u_med);
  const Eigen::VectorXd q_c = unscale_coeffs(q_s, u_med);

  const Polynomial p_u(p_c), q_u(q_c);
  if (p_u.is_zero())
    throw IllConditioned("fit_magnitude_squared: numerator fit collapsed to zero");

  // Spectral factorization: G(u) = P(u)/Q(u) with u = -s^2 gives
  // H(s)H(-s) = P(-s^2)/Q(-s^2); keep the stable half of each root pair.
  auto even_substitution = [](const Polynomial& f) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * f.degree() + 1);
    double sign = 1.0;
    for (int j = 0; j <= f.degree(); ++j) {
      c(2 * j) = sign * f.coeffs(j);
      sign = -sign;
    }
    return Polynomial(c);
  };

  const double gain_sq = p_u.leading() / q_u.leading();
  if (!(gain_sq > 0.0))
    throw IllConditioned("fit_magnitude_squared: leading coefficient ratio " + fmt(gain_sq) +
                         " is not positive; no real spectral factor exists");

  PoleZeroSet pz;
  pz.zeros = half_roots(even_substitution(p_u), "fit_magnitude_squared numerator");
  pz.poles = half_roots(even_substitution(q_u), "fit_magnitude_squared denominator");
  pz.gain = std::sqrt(gain_sq);

  if (!converged)
    throw NonConvergent("fit_magnitude_squared: coefficients still moving after 25 sweeps",
                        from_pole_zero(pz));
  return from_pole_zero(pz);
}

ExtractionReport extract_pipeline(const SweepDataset& ds, Strategy strategy, int m, int n,
                                  std::optional<ModelKind> model) {
  ExtractionReport report;

  const bool rational = strategy == Strategy::Rational ||
                        (strategy == Strategy::Auto && ds.has_phase());
  if (rational) {
    report.tf = fit_rational_complex(ds, m, n);
    report.path = ExtractionPath::RationalComplex;
  } else if (strategy == Strategy::MagSq) {
    report.tf = fit_magnitude_squared(ds, m, n);
    report.path = ExtractionPath::MagnitudeSquared;
  } else {
    const ModelKind kind = model.value_or(select_model(ds));
    const FitResult fit = lm_fit(kind, ds, init_params(kind, ds));
    if (!fit.converged)
      report.warnings.push_back("model fit hit the iteration limit without converging");

    if (kind == ModelKind::TwoTermExp) {
      const auto& p = fit.model.params;
      report.tf = exp_to_rational(p(0), p(1), p(2), p(3), &report.warnings);
      report.path = ExtractionPath::ModelExp;
      double span = 0.0;
      for (const FrequencySample& s : ds.samples)
        span = std::max(span, std::abs((p(1) - p(3)) * s.omega));
      report.linearization_span = span;
      if (span > 0.5)
        report.warnings.push_back("linearization span |(b-d)*omega| reaches " + fmt(span) +
                                  " (> 0.5); the e^u ~ 1+u substitution is stretched and "
                                  "pole/zero placement degrades away from the corner");
    } else {
      const auto& p = fit.model.params;
      report.tf = gaussian_to_rational(p(0), p(1), p(2));
      report.path = ExtractionPath::ModelGaussian;
    }
    report.fit = fit;
  }

  report.pz = poles_zeros(report.tf);
  for (const Complex& pole : report.pz.poles)
    if (pole.real() > 0.0) {
      report.warnings.push_back("extracted transfer function has right-half-plane pole(s); "
                                "reported as fitted, not stabilized");
      break;
    }
  return report;
}

namespace {

/// Greedy matching on globally smallest relative distance; each element used
/// at most once. The normalizer is symmetric in the two sets so that
/// swapping arguments swaps the match direction without changing distances.
void match_roots(const std::vector<Complex>& truth, const std::vector<Complex>& extracted,
                 std::vector<PzMatch>* matches, std::vector<double>* errors, int* unmatched_truth,
                 int* unmatched_extracted) {
  constexpr double kOmegaFloor = 1.0;  // rad/s; keeps origin roots comparable

  struct Cand {
    double dist;
    size_t ti, ei;
  };
  std::vector<Cand> cands;
  cands.reserve(truth.size() * extracted.size());
  for (size_t ti = 0; ti < truth.size(); ++ti)
    for (size_t ei = 0; ei < extracted.size(); ++ei) {
      const double denom =
          std::max({std::abs(truth[ti]), std::abs(extracted[ei]), kOmegaFloor});
      cands.push_back({std::abs(extracted[ei] - truth[ti]) / denom, ti, ei});
    }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    return a.ti != b.ti ? a.ti < b.ti : a.ei < b.ei;
  });

  std::vector<bool> t_used(truth.size(), false), e_used(extracted.size(), false);
  size_t n_matched = 0;
  const size_t n_max = std::min(truth.size(), extracted.size());
  for (const Cand& c : cands) {
    if (n_matched == n_max) break;
    if (t_used[c.ti] || e_used[c.ei]) continue;
    t_used[c.ti] = true;
    e_used[c.ei] = true;
    ++n_matched;
    matches->push_back({truth[c.ti], extracted[c.ei], c.dist});
    errors->push_back(c.dist);
  }
  *unmatched_truth += static_cast<int>(truth.size() - n_matched);
  *unmatched_extracted += static_cast<int>(extracted.size() - n_matched);
}

}  // namespace

ComparisonReport compare_pz(const PoleZeroSet& extracted, const PoleZeroSet& truth) {
  ComparisonReport report;
  match_roots(truth.poles, extracted.poles, &report.pole_matches, &report.pole_errors,
              &report.unmatched_truth, &report.unmatched_extracted);
  match_roots(truth.zeros, extracted.zeros, &report.zero_matches, &report.zero_errors,
              &report.unmatched_truth, &report.unmatched_extracted);
  for (double e : report.pole_errors) report.max_rel_error = std::max(report.max_rel_error, e);
  for (double e : report.zero_errors) report.max_rel_error = std::max(report.max_rel_error, e);
  return report;
}

}  // namespace pzx
