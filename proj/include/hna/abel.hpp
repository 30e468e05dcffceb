#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "spherical.hpp"

namespace hna {

/// A radial function f(x) = f0(d(x, e)), given by its profile f0 on [0, inf).
struct RadialFunction {
  std::function<double(double)> eval;
  double support_radius = std::numeric_limits<double>::infinity();

  [[nodiscard]] bool bounded() const { return std::isfinite(support_radius); }
  double operator()(double r) const { return (bounded() && r >= support_radius) ? 0.0 : eval(r); }

  /// (1 - (r/R)^2)^p on [0, R).
  static RadialFunction bump(double R, int p = 8) {
    if (!(R > 0.0) || p < 1) throw std::invalid_argument("RadialFunction::bump: need R > 0 and p >= 1");
    return {[R, p](double r) { return std::pow(1.0 - (r / R) * (r / R), p); }, R};
  }
  static RadialFunction zero() {
    return {[](double) { return 0.0; }, 1.0};
  }
};

/// An even function on the line, with support in [-support_radius, support_radius].
struct EvenLineFunction {
  std::function<double(double)> eval;
  double support_radius = std::numeric_limits<double>::infinity();

  double operator()(double t) const {
    const double a = std::abs(t);
    return (std::isfinite(support_radius) && a >= support_radius) ? 0.0 : eval(a);
  }
};

/// Abel transform e^{-Qt/2} int_N f(n e^t) dn. For compact support the
/// slice coordinates of B_R are used; otherwise the bi-radial rule over N,
/// with `tail_tolerance` bounding the part beyond the truncation radii.
inline double abel_transform(Dimensions d, const RadialFunction& f, double t, const QuadratureSpec& spec = {},
                             double tail_tolerance = 1e-6) {
  const double areas = sphere_area(d.m) * sphere_area(d.k);
  if (f.bounded()) {
    if (std::abs(t) >= f.support_radius) return 0.0;
    const double inner =
        integrate_slice(d, t, f.support_radius, [&](double r, double, double) { return f(r); }, SliceRule::from_spec(spec));
    return std::exp(-0.5 * d.Q() * t) * areas * inner;
  }
  const double a = std::exp(t);
  const auto res = integrate_N_biradial([&](double u, double v) { return f(distance_from_radii(u, v, t)); }, d, spec,
                                        2.0 * std::sqrt(a), a, tail_tolerance);
  return std::exp(-0.5 * d.Q() * t) * res.value;
}

/// phi_lambda(r) for many lambda at one r; the Koornwinder kernel is built at
/// most once and shared by every lambda whose series is poorly conditioned.
inline std::vector<cplx> spherical_phi_many(Dimensions d, const std::vector<cplx>& lambdas, double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("spherical_phi_many: r must be nonnegative");
  const auto p = JacobiParams::from(d);
  std::vector<cplx> out(lambdas.size(), cplx(1.0));
  if (r == 0.0) return out;
  double omega = 0.0;
  for (const auto& l : lambdas) omega = std::max(omega, 2.0 * std::abs(l));
  std::optional<KoornwinderKernel> K;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const auto s = jacobi_phi_series(p, 2.0 * lambdas[i], 0.5 * r);
    if (s.converged && s.conditioning <= kSeriesConditioningLimit) {
      out[i] = s.value;
      continue;
    }
    if (!K) K.emplace(d, 0.5 * r, omega);
    out[i] = K->transform(2.0 * lambdas[i]) / K->prefactor();
  }
  return out;
}

/// Spherical transform omega_{n-1} 2^{m+k} int_0^R f(r) phi_lambda(r) sinh^{m+k}(r/2) cosh^k(r/2) dr
/// of a compactly supported radial function, for a list of lambda.
inline std::vector<cplx> spherical_transform_radial(Dimensions d, const RadialFunction& f,
                                                    const std::vector<cplx>& lambdas, const QuadratureSpec& spec = {}) {
  if (!f.bounded()) throw std::invalid_argument("spherical_transform_radial: f must have compact support");
  double lmax = 0.0;
  for (const auto& l : lambdas) lmax = std::max(lmax, std::abs(l));
  const double R = f.support_radius;
  const auto rule = panel_rule(0.0, R, oscillation_panels(lmax, R, spec.panels), spec.nodes_1d);
  std::vector<cplx> out(lambdas.size(), cplx(0.0));
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double r = rule.x[i];
    const double w = rule.w[i] * f(r) * d.sphere_volume(r);
    if (!std::isfinite(w)) throw numerical_error("spherical_transform_radial: non-finite integrand");
    if (w == 0.0) continue;
    const auto phi = spherical_phi_many(d, lambdas, r);
    for (std::size_t j = 0; j < lambdas.size(); ++j) out[j] += w * phi[j];
  }
  return out;
}

inline cplx spherical_transform_radial(Dimensions d, const RadialFunction& f, cplx lambda,
                                       const QuadratureSpec& spec = {}) {
  return spherical_transform_radial(d, f, std::vector<cplx>{lambda}, spec).front();
}

/// One-dimensional Fourier transform int Af(t) e^{-i lambda t} dt = 2 int_0^R Af(t) cos(lambda t) dt,
/// with the Abel transform sampled once at the Gauss nodes of [0, R].
inline std::vector<cplx> abel_fourier(Dimensions d, const RadialFunction& f, const std::vector<cplx>& lambdas,
                                      const QuadratureSpec& spec = {}) {
  if (!f.bounded()) throw std::invalid_argument("abel_fourier: f must have compact support");
  double lmax = 0.0;
  for (const auto& l : lambdas) lmax = std::max(lmax, std::abs(l));
  const double R = f.support_radius;
  const auto rule = panel_rule(0.0, R, oscillation_panels(lmax, R, spec.panels), spec.nodes_1d);
  std::vector<cplx> out(lambdas.size(), cplx(0.0));
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double A = 2.0 * rule.w[i] * abel_transform(d, f, rule.x[i], spec);
    for (std::size_t j = 0; j < lambdas.size(); ++j) out[j] += A * std::cos(lambdas[j] * rule.x[i]);
  }
  return out;
}

/// Dual Abel transform: the average over the geodesic sphere S_r of e^{Q A(y)/2} F(A(y)).
inline double dual_abel(const HTypeAlgebra& alg, const EvenLineFunction& F, double r, const SphereRule& rule) {
  if (!(r > 0.0)) throw std::invalid_argument("dual_abel: r must be positive");
  if (rule.dim != alg.n()) throw std::invalid_argument("dual_abel: sphere rule must live on S^{n-1}");
  const double Q = alg.Q();
  const double v = sphere_average(
      [&](const Vec& w) {
        const double A = sphere_point(alg, r, w).t;
        return std::exp(0.5 * Q * A) * F(A);
      },
      rule);
  if (!std::isfinite(v)) throw numerical_error("dual_abel: non-finite sphere average");
  return v;
}

inline double dual_abel(const HTypeAlgebra& alg, const EvenLineFunction& F, double r, const QuadratureSpec& spec = {}) {
  return dual_abel(alg, F, r, SphereRule::for_spec(alg.n(), spec));
}

/// (f * g)(x) = int f(y) g(y^{-1} x) dy for radial f supported in B_R and radial g.
inline double radial_convolution(const HTypeAlgebra& alg, const RadialFunction& f, const RadialFunction& g,
                                 const NAPoint& x, const BallRule& rule) {
  if (!f.bounded()) throw std::invalid_argument("radial_convolution: f must have compact support");
  return detail::integrate_ball_points(
      alg, f.support_radius,
      [&](const NAPoint& y) {
        const double fy = f(distance_to_origin(alg, y));
        if (fy == 0.0) return 0.0;
        return fy * g(distance(alg, y, x));
      },
      rule.slices, rule.angles);
}

/// Constant of the radial inversion f(r) = kappa int_0^inf f~(lambda) phi_lambda(r) |c(lambda)|^{-2} dlambda
/// for |c(lambda)|^{-2} = plancherel_density: kappa = c_{m,k} / (2 pi).
inline double inversion_constant(Dimensions d) { return d.poisson_constant() / (2.0 * std::numbers::pi); }

/// Spectral cutoff used for a function supported in B_R.
inline double spectral_cutoff(double support_radius) { return 40.0 / support_radius; }

/// Quadrature in lambda on [0, Lambda] for inverting transforms of functions
/// supported in B_R at radii up to r_max.
inline LineRule inversion_rule(double support_radius, double r_max, const QuadratureSpec& spec = {}) {
  const double L = spectral_cutoff(support_radius);
  return panel_rule(0.0, L, oscillation_panels(r_max + support_radius, L, spec.panels), spec.nodes_1d);
}

/// kappa int_0^Lambda fhat(lambda) phi_lambda(r) |c(lambda)|^{-2} dlambda at each r, with fhat
/// given at the nodes of `rule`.
inline std::vector<double> radial_inversion(Dimensions d, const LineRule& rule, const std::vector<cplx>& fhat,
                                            const std::vector<double>& r_values, double kappa) {
  if (fhat.size() != rule.size()) throw std::invalid_argument("radial_inversion: fhat must be sampled on the rule");
  std::vector<cplx> lambdas(rule.x.begin(), rule.x.end());
  std::vector<cplx> weighted(rule.size());
  for (std::size_t j = 0; j < rule.size(); ++j) weighted[j] = rule.w[j] * fhat[j] * plancherel_density(d, rule.x[j]);
  std::vector<double> out;
  for (double r : r_values) {
    const auto phi = spherical_phi_many(d, lambdas, r);
    cplx acc = 0.0;
    for (std::size_t j = 0; j < rule.size(); ++j) acc += weighted[j] * phi[j];
    out.push_back(kappa * acc.real());
  }
  return out;
}

/// Radial inversion of a spectral function fhat(lambda) (lambda real) for a function supported in B_R.
inline std::vector<double> radial_inversion(Dimensions d, const std::function<cplx(double)>& fhat,
                                            const std::vector<double>& r_values, double support_radius,
                                            const QuadratureSpec& spec = {}) {
  double r_max = 0.0;
  for (double r : r_values) r_max = std::max(r_max, r);
  const auto rule = inversion_rule(support_radius, r_max, spec);
  std::vector<cplx> samples;
  for (double l : rule.x) samples.push_back(fhat(l));
  return radial_inversion(d, rule, samples, r_values, inversion_constant(d));
}

/// Round-trip calibration of the inversion constant: f(r0) divided by the
/// uncalibrated inversion (kappa = 1) of the Fourier-Abel transform of f.
inline double calibrate_inversion_constant(Dimensions d, const RadialFunction& f, double r0,
                                           const QuadratureSpec& spec = {}) {
  const auto rule = inversion_rule(f.support_radius, r0, spec);
  const auto fhat = abel_fourier(d, f, std::vector<cplx>(rule.x.begin(), rule.x.end()), spec);
  const double raw = radial_inversion(d, rule, fhat, {r0}, 1.0).front();
  if (raw == 0.0) throw numerical_error("calibrate_inversion_constant: vanishing inversion at r0");
  return f(r0) / raw;
}

}  // namespace hna
