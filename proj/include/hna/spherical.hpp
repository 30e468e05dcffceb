#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "poisson.hpp"

namespace hna {

/// Jacobi parameters of the radial Laplacian: alpha = (m+k-1)/2, beta = (k-1)/2, rho = Q.
struct JacobiParams {
  double alpha = 0.0;
  double beta = 0.0;
  double rho = 0.0;

  static JacobiParams from(Dimensions d) {
    d.validate();
    const double a = 0.5 * (d.m + d.k - 1), b = 0.5 * (d.k - 1);
    return {a, b, a + b + 1.0};
  }
};

/// Outcome of a hypergeometric series summation.
struct SeriesResult {
  cplx value{0.0, 0.0};
  double conditioning = 1.0;  ///< sum of |terms| over |sum|
  int terms = 0;
  bool converged = false;
};

/// Power series of 2F1(a, b; c; z) for real |z| < 1, summed with the term-ratio
/// recurrence to relative 1e-14 (or exactly when it terminates).
inline SeriesResult gauss_2f1_series(cplx a, cplx b, cplx c, double z, int max_terms = 10000) {
  if (std::abs(c.imag()) == 0.0 && c.real() <= 0.0 && std::floor(c.real()) == c.real())
    throw std::invalid_argument("gauss_2f1: c must not be a nonpositive integer");
  if (!(std::abs(z) < 1.0)) throw std::invalid_argument("gauss_2f1: need |z| < 1");
  SeriesResult r;
  cplx term = 1.0;
  cplx sum = 1.0;
  double abs_sum = 1.0;
  int quiet = 0;
  for (int j = 0; j < max_terms; ++j) {
    const double dj = j;
    term *= (a + dj) * (b + dj) / ((c + dj) * (dj + 1.0)) * z;
    sum += term;
    abs_sum += std::abs(term);
    r.terms = j + 1;
    if (term == 0.0) {
      r.converged = true;
      break;
    }
    // Require a few consecutive negligible terms once the ratio has turned below 1.
    const double ratio = std::abs((a + dj + 1.0) * (b + dj + 1.0) / ((c + dj + 1.0) * (dj + 2.0)) * z);
    if (std::abs(term) <= 1e-16 * std::abs(sum) && ratio < 1.0) {
      if (++quiet >= 3) {
        r.converged = true;
        break;
      }
    } else {
      quiet = 0;
    }
  }
  if (!std::isfinite(sum.real()) || !std::isfinite(sum.imag())) r.converged = false;
  r.value = sum;
  r.conditioning = abs_sum / std::max(std::abs(sum), 1e-300);
  return r;
}

/// 2F1(a, b; c; z) for 0 <= z < 1; non-convergence is an error carrying the partial sum.
inline cplx gauss_2f1(cplx a, cplx b, cplx c, double z) {
  if (z < 0.0) throw std::invalid_argument("gauss_2f1: need 0 <= z < 1");
  const auto r = gauss_2f1_series(a, b, c, z);
  if (!r.converged)
    throw numerical_error("gauss_2f1: series did not converge; partial sum " + std::to_string(r.value.real()) + " + " +
                          std::to_string(r.value.imag()) + "i");
  return r.value;
}

/// Jacobi function phi_mu^{(alpha,beta)}(s) = 2F1((rho - i mu)/2, (rho + i mu)/2; alpha+1; -sinh^2 s);
/// for sinh^2 s > 1/2 the Pfaff form (cosh s)^{-2a} 2F1(a, c-b; c; tanh^2 s) is summed.
inline SeriesResult jacobi_phi_series(const JacobiParams& p, cplx mu, double s) {
  if (!(s >= 0.0)) throw std::invalid_argument("jacobi_phi: s must be nonnegative");
  const cplx I(0.0, 1.0);
  const cplx a = 0.5 * (p.rho - I * mu), b = 0.5 * (p.rho + I * mu);
  const double c = p.alpha + 1.0;
  const double sh = std::sinh(s), sh2 = sh * sh;
  if (sh2 <= 0.5) return gauss_2f1_series(a, b, c, -sh2);
  const double th = std::tanh(s);
  auto r = gauss_2f1_series(a, c - b, c, th * th);
  r.value *= std::exp(-2.0 * a * std::log(std::cosh(s)));
  return r;
}

inline cplx jacobi_phi(const JacobiParams& p, cplx mu, double s) {
  const auto r = jacobi_phi_series(p, mu, s);
  if (!r.converged) throw numerical_error("jacobi_phi: series did not converge");
  return r.value;
}

namespace detail {

// log sin(pi z), stable for large |Im z| (branch is irrelevant to callers, which use the real part).
inline cplx log_sin_pi(cplx z) {
  const cplx I(0.0, 1.0);
  const double pi = std::numbers::pi;
  if (std::abs(z.imag()) < 20.0) return std::log(std::sin(pi * z));
  if (z.imag() > 0.0) return -I * pi * z - std::log(2.0 * I) + std::log(1.0 - std::exp(2.0 * I * pi * z));
  return I * pi * z - std::log(-2.0 * I) + std::log(1.0 - std::exp(-2.0 * I * pi * z));
}

}  // namespace detail

/// log Gamma(z) for complex z by the Lanczos approximation (g = 7) with reflection.
/// The imaginary part is determined only modulo 2 pi.
inline cplx lgamma_complex(cplx z) {
  static constexpr std::array<double, 9> p{0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                           771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                           -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  const double pi = std::numbers::pi;
  if (z.real() < 0.5) return std::log(pi) - detail::log_sin_pi(z) - lgamma_complex(1.0 - z);
  z -= 1.0;
  cplx x = p[0];
  for (int i = 1; i < 9; ++i) x += p[static_cast<std::size_t>(i)] / (z + static_cast<double>(i));
  const cplx t = z + 7.5;
  return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

/// log |c(mu)| for the Jacobi c-function
/// c(mu) = 2^{rho - i mu} Gamma(alpha+1) Gamma(i mu) / (Gamma((i mu + rho)/2) Gamma((i mu + alpha - beta + 1)/2)).
inline double log_abs_c_function(const JacobiParams& p, double mu) {
  const cplx I(0.0, 1.0);
  return p.rho * std::log(2.0) + std::lgamma(p.alpha + 1.0) + lgamma_complex(I * mu).real() -
         lgamma_complex(0.5 * (I * mu + p.rho)).real() - lgamma_complex(0.5 * (I * mu + p.alpha - p.beta + 1.0)).real();
}

/// Plancherel density |c(2 lambda)|^{-2} of the radial transform (0 at lambda = 0).
inline double plancherel_density(const JacobiParams& p, double lambda) {
  if (!std::isfinite(lambda)) throw std::invalid_argument("plancherel_density: lambda must be finite");
  if (lambda == 0.0) return 0.0;
  return std::exp(-2.0 * log_abs_c_function(p, 2.0 * std::abs(lambda)));
}

inline double plancherel_density(Dimensions d, double lambda) { return plancherel_density(JacobiParams::from(d), lambda); }

/// Gamma((n-1)/2) Gamma(1/2) / (2^{(n-1)/2} Gamma(n/2)) (sinh T)^{n-2} (cosh T)^{k/2}.
inline double koornwinder_prefactor(Dimensions d, double T) {
  const double n = d.n();
  return std::exp(std::lgamma(0.5 * (n - 1)) + std::lgamma(0.5) - 0.5 * (n - 1) * std::log(2.0) - std::lgamma(0.5 * n)) *
         std::pow(std::sinh(T), n - 2) * std::pow(std::cosh(T), 0.5 * d.k);
}

/// Quadrature for the cosine transform
///   Phi_k(mu; T) = int_0^T cos(mu s) (cosh T - cosh s)^{(n-3)/2} 2F1(k/2, 1-k/2; (n-1)/2; (cosh T - cosh s)/(2 cosh T)) ds,
/// in the variable s = T cos(theta). The kernel is built once per T and
/// resolves frequencies up to omega_max with at least 10 panels per period.
class KoornwinderKernel {
 public:
  KoornwinderKernel(Dimensions d, double T, double omega_max, int nodes = 20) : dims_(d), T_(T) {
    if (!(T > 0.0)) throw std::invalid_argument("KoornwinderKernel: T must be positive");
    const int panels = oscillation_panels(std::max(omega_max, 0.0) * T, 0.5 * std::numbers::pi);
    const auto rule = panel_rule(0.0, 0.5 * std::numbers::pi, panels, nodes);
    const double n = d.n();
    const double coshT = std::cosh(T);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double th = rule.x[i];
      const double s = T * std::cos(th);
      const double gap = 2.0 * std::sinh(0.5 * (T + s)) * std::sinh(T * std::sin(0.5 * th) * std::sin(0.5 * th));
      const double x = gap / (2.0 * coshT);
      const double F = d.k == 2 ? 1.0 : gauss_2f1(0.5 * d.k, 1.0 - 0.5 * d.k, 0.5 * (n - 1), x).real();
      s_.push_back(s);
      w_.push_back(rule.w[i] * T * std::sin(th) * std::pow(gap, 0.5 * (n - 3)) * F);
    }
  }

  [[nodiscard]] double T() const { return T_; }
  [[nodiscard]] std::size_t size() const { return s_.size(); }

  /// Phi_k(mu; T).
  [[nodiscard]] cplx transform(cplx mu) const {
    if (mu.imag() == 0.0) {
      double acc = 0.0;
      for (std::size_t i = 0; i < s_.size(); ++i) acc += w_[i] * std::cos(mu.real() * s_[i]);
      return acc;
    }
    // cos(a s + i b s) = cos(a s) cosh(b s) - i sin(a s) sinh(b s)
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < s_.size(); ++i) {
      const double e = std::exp(mu.imag() * s_[i]), ie = 1.0 / e;
      re += w_[i] * std::cos(mu.real() * s_[i]) * 0.5 * (e + ie);
      im -= w_[i] * std::sin(mu.real() * s_[i]) * 0.5 * (e - ie);
    }
    return {re, im};
  }

  [[nodiscard]] double prefactor() const { return koornwinder_prefactor(dims_, T_); }

 private:
  Dimensions dims_;
  double T_;
  std::vector<double> s_, w_;
};

/// Which route produced a spherical function value.
enum class SphericalRoute { series, koornwinder };

struct SphericalValue {
  cplx value{0.0, 0.0};
  SphericalRoute route = SphericalRoute::series;
  double conditioning = 1.0;
};

/// Series results whose conditioning exceeds this are replaced by the Koornwinder route.
inline constexpr double kSeriesConditioningLimit = 1e6;

/// Koornwinder route phi_lambda(r) = Phi_k(2 lambda; r/2) / prefactor(r/2); r = 0 is rejected.
inline cplx koornwinder_phi(Dimensions d, cplx lambda, double r, int nodes = 20) {
  if (!(r > 0.0)) throw std::invalid_argument("koornwinder_phi: r must be positive");
  const KoornwinderKernel K(d, 0.5 * r, 2.0 * std::abs(lambda), nodes);
  return K.transform(2.0 * lambda) / K.prefactor();
}

inline cplx koornwinder_phi(const HTypeAlgebra& alg, cplx lambda, double r, const QuadratureSpec& spec = {}) {
  return koornwinder_phi(alg.dims(), lambda, r, spec.nodes_1d);
}

/// Spherical function phi_lambda(r) = phi^{(alpha,beta)}_{2 lambda}(r/2), by the
/// hypergeometric series when well conditioned and the Koornwinder integral otherwise.
inline SphericalValue spherical_phi_detail(Dimensions d, cplx lambda, double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("spherical_phi: r must be nonnegative");
  const auto s = jacobi_phi_series(JacobiParams::from(d), 2.0 * lambda, 0.5 * r);
  if ((s.converged && s.conditioning <= kSeriesConditioningLimit) || r == 0.0)
    return {s.value, SphericalRoute::series, s.conditioning};
  return {koornwinder_phi(d, lambda, r), SphericalRoute::koornwinder, s.conditioning};
}

inline cplx spherical_phi(Dimensions d, cplx lambda, double r) { return spherical_phi_detail(d, lambda, r).value; }
inline cplx spherical_phi(const HTypeAlgebra& alg, cplx lambda, double r) { return spherical_phi(alg.dims(), lambda, r); }

/// phi_lambda(y) = int_N P_lambda(e, n) P_{-lambda}(y, n) dn.
///
/// For y = (0, 0, a) the integrand depends on (|X|, |Z|) only and the bi-radial
/// rule is used; otherwise the angular directions are integrated with product rules.
/// `tail_tolerance` bounds the mapped tail beyond the truncation radii.
inline cplx spherical_phi_integral(const HTypeAlgebra& alg, cplx lambda, const NAPoint& y,
                                   const QuadratureSpec& spec = {}, double tail_tolerance = 5e-2) {
  check_point(alg, y);
  const Dimensions d = alg.dims();
  const cplx I(0.0, 1.0);
  const cplx e1 = 0.5 - I * lambda / alg.Q();  // exponent for P_lambda(e, n)
  const cplx e2 = 0.5 + I * lambda / alg.Q();  // exponent for P_{-lambda}(y, n)
  const double a = y.a();
  const double scale_X = std::max(1.0, 2.0 * std::sqrt(a) + y.X.norm());
  const double scale_Z = std::max(1.0, a + y.Z.norm());
  if (y.X.norm() == 0.0 && y.Z.norm() == 0.0) {
    auto part = [&](bool imag) {
      return [&, imag](double u, double v) {
        const cplx val = std::exp(e1 * log_poisson_kernel(d, 0.0, u * u, v * v) + e2 * log_poisson_kernel(d, y.t, u * u, v * v));
        return imag ? val.imag() : val.real();
      };
    };
    const auto re = integrate_N_biradial(part(false), d, spec, scale_X, scale_Z, tail_tolerance);
    const auto im = integrate_N_biradial(part(true), d, spec, scale_X, scale_Z, tail_tolerance);
    return {re.value, im.value};
  }
  // General y: the integrand of (u, v) is averaged over directions.
  const int per = std::max(4, spec.nodes_1d);
  const auto ang = AngularRules::for_dims(d, per, 4096, spec.seed);
  const Vec zeroX = Vec::Zero(d.m), zeroZ = Vec::Zero(d.k);
  auto avg = [&](double u, double v) {
    cplx acc = 0.0;
    Vec X(d.m), Z(d.k);
    for (std::size_t i = 0; i < ang.v_dirs.size(); ++i)
      for (std::size_t j = 0; j < ang.z_dirs.size(); ++j) {
        X = u * ang.v_dirs.node(i);
        Z = v * ang.z_dirs.node(j);
        const auto [dX, dZ] = n_quotient(alg, X, Z, y.X, y.Z);
        const double l1 = log_poisson_kernel(d, 0.0, u * u, v * v);
        const double l2 = log_poisson_kernel(d, y.t, dX.squaredNorm(), dZ.squaredNorm());
        acc += ang.v_dirs.weights[i] * ang.z_dirs.weights[j] * std::exp(e1 * l1 + e2 * l2);
      }
    return acc;
  };
  const double TX = spec.truncation_radius_X > 0 ? spec.truncation_radius_X : default_truncation_X(0.0);
  const double TZ = spec.truncation_radius_Z > 0 ? spec.truncation_radius_Z : default_truncation_Z(0.0);
  const auto ru = half_line_rule(scale_X, TX, spec.nodes_1d);
  const auto rv = half_line_rule(scale_Z, TZ, spec.nodes_1d);
  cplx acc = 0.0, tail = 0.0;
  for (std::size_t i = 0; i < ru.rule.size(); ++i) {
    const double u = ru.rule.x[i];
    for (std::size_t j = 0; j < rv.rule.size(); ++j) {
      const double v = rv.rule.x[j];
      const cplx c = ru.rule.w[i] * rv.rule.w[j] * std::pow(u, d.m - 1) * std::pow(v, d.k - 1) * avg(u, v);
      acc += c;
      if (i >= ru.core_size() || j >= rv.core_size()) tail += c;
    }
  }
  const double areas = sphere_area(d.m) * sphere_area(d.k);
  if (tail_tolerance >= 0.0 && areas * std::abs(tail) > tail_tolerance)
    throw numerical_error("spherical_phi_integral: truncation tail exceeds tolerance");
  return areas * acc;
}

/// max over r_grid of |phi'' + b(r) phi' + (lambda^2 + Q^2/4) phi| with
/// b(r) = ((m+k)/2) coth(r/2) + (k/2) tanh(r/2), derivatives by five-point stencils.
inline double eigen_ode_residual(Dimensions d, cplx lambda, const std::vector<double>& r_grid, double h = 5e-3) {
  const double Q = d.Q();
  double worst = 0.0;
  for (double r : r_grid) {
    if (r < 0.05) throw std::invalid_argument("eigen_ode_residual: grid points must satisfy r >= 0.05");
    std::array<cplx, 5> f;
    for (int j = -2; j <= 2; ++j) f[static_cast<std::size_t>(j + 2)] = spherical_phi(d, lambda, r + j * h);
    const cplx d1 = (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * h);
    const cplx d2 = (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h);
    const double b = 0.5 * (d.m + d.k) / std::tanh(0.5 * r) + 0.5 * d.k * std::tanh(0.5 * r);
    worst = std::max(worst, std::abs(d2 + b * d1 + (lambda * lambda + 0.25 * Q * Q) * f[2]));
  }
  return worst;
}

}  // namespace hna
