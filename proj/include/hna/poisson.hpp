#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "nagroup.hpp"
#include "quad.hpp"

namespace hna {

/// A complex spectral parameter lambda.
struct SpectralPoint {
  cplx lambda{0.0, 0.0};
  SpectralPoint() = default;
  SpectralPoint(cplx l) : lambda(l) {  // NOLINT: implicit on purpose
    if (!std::isfinite(l.real()) || !std::isfinite(l.imag()))
      throw std::invalid_argument("SpectralPoint: lambda must be finite");
  }
  SpectralPoint(double l) : SpectralPoint(cplx(l, 0.0)) {}  // NOLINT
};

/// P_a(X, Z) = c_{m,k} a^Q ((a + |X|^2/4)^2 + |Z|^2)^{-Q}.
inline double poisson_kernel(Dimensions dims, double a, double u2, double v2) {
  if (!(a > 0.0)) throw std::invalid_argument("poisson_kernel: a must be positive");
  const double Q = dims.Q(), s = a + 0.25 * u2;
  return dims.poisson_constant() * std::pow(a, Q) * std::pow(s * s + v2, -Q);
}

inline double poisson_kernel(const HTypeAlgebra& alg, double a, const Vec& X, const Vec& Z) {
  if (X.size() != alg.m() || Z.size() != alg.k())
    throw std::invalid_argument("poisson_kernel: coordinate lengths do not match the algebra");
  return poisson_kernel(alg.dims(), a, X.squaredNorm(), Z.squaredNorm());
}

/// log P_a(X, Z), for complex powers without overflow.
inline double log_poisson_kernel(Dimensions dims, double t, double u2, double v2) {
  const double Q = dims.Q(), s = std::exp(t) + 0.25 * u2;
  return std::log(dims.poisson_constant()) + Q * t - Q * std::log(s * s + v2);
}

/// The N-part of n0^{-1} n: (X - X0, Z - Z0 - [X0, X]/2).
inline std::pair<Vec, Vec> n_quotient(const HTypeAlgebra& alg, const Vec& X0, const Vec& Z0, const Vec& X, const Vec& Z) {
  return {X - X0, Z - Z0 - 0.5 * alg.bracket(X0, X)};
}

/// P_lambda(x, n0) = P_a(n0^{-1} n)^{1/2 - i lambda/Q} for x = n a (principal power of a positive base).
inline cplx P_lambda(const HTypeAlgebra& alg, SpectralPoint lam, const NAPoint& x, const Vec& X0, const Vec& Z0) {
  check_point(alg, x);
  const auto [dX, dZ] = n_quotient(alg, X0, Z0, x.X, x.Z);
  const double logP = log_poisson_kernel(alg.dims(), x.t, dX.squaredNorm(), dZ.squaredNorm());
  return std::exp((0.5 - cplx(0.0, 1.0) * lam.lambda / alg.Q()) * logP);
}

/// A(x) = log a, the A-coordinate.
inline double A_coordinate(const NAPoint& x) { return x.t; }

/// Horospherical form c_{m,k}^{1/2 - i lambda/Q} exp((Q/2 - i lambda) A(sigma(n0^{-1} x))),
/// computed through the group law and the geodesic inversion.
inline cplx P_lambda_horospherical(const HTypeAlgebra& alg, SpectralPoint lam, const NAPoint& x, const Vec& X0,
                                   const Vec& Z0) {
  const cplx s = 0.5 - cplx(0.0, 1.0) * lam.lambda / alg.Q();
  const NAPoint n0{X0, Z0, 0.0};
  const NAPoint y = geodesic_inversion(alg, multiply(alg, inverse(alg, n0), x));
  return std::exp(s * std::log(alg.dims().poisson_constant()) + (0.5 * alg.Q() - cplx(0.0, 1.0) * lam.lambda) * A_coordinate(y));
}

/// int_N P_a(n) dn via the bi-radial reduction (should be 1 for every a > 0).
inline BiradialResult poisson_integral(Dimensions dims, double a, const QuadratureSpec& spec = {}) {
  return integrate_N_biradial([&](double u, double v) { return poisson_kernel(dims, a, u * u, v * v); }, dims, spec,
                              2.0 * std::sqrt(a), a);
}

/// Angular rules used for non-radial integrals over N: S^{m-1} and S^{k-1}.
struct AngularRules {
  SphereRule v_dirs;
  SphereRule z_dirs;

  /// Product rules with `per_angle` nodes per angle, or a random orthogonal set
  /// of about `cap` directions when the product rule would be larger.
  static AngularRules for_dims(Dimensions d, int per_angle, int cap = 512, std::uint64_t seed = 1) {
    auto pick = [&](int dim) {
      double size = dim == 1 ? 2.0 : 2.0 * per_angle * std::pow(per_angle, dim - 2);
      return size <= cap ? SphereRule::product(dim, per_angle) : SphereRule::random_orthogonal(dim, cap, seed);
    };
    return {pick(d.m), pick(d.k)};
  }
};

namespace detail {

// A vector of complex partial sums that the slice integrators can accumulate.
struct SpectralSum {
  std::vector<cplx> v;
  SpectralSum& operator+=(const SpectralSum& o) {
    if (v.empty()) v.assign(o.v.size(), cplx{});
    for (std::size_t i = 0; i < o.v.size(); ++i) v[i] += o.v[i];
    return *this;
  }
  friend SpectralSum operator*(double w, SpectralSum s) {
    for (auto& x : s.v) x *= w;
    return s;
  }
};

// Integral of g(x) e^{-Qt} over the ball B_R in (X, Z, t), g an arbitrary function of NAPoint.
template <class G>
auto integrate_ball_points(const HTypeAlgebra& alg, double R, G&& g, const SliceRule& rule, const AngularRules& ang) {
  const Dimensions d = alg.dims();
  const double areas = sphere_area(d.m) * sphere_area(d.k);
  const double Q = alg.Q();
  return areas * integrate_ball_slices(
                     d, R,
                     [&](double t, double, double u, double v) {
                       using Res = std::decay_t<decltype(g(NAPoint{}))>;
                       Res acc{};
                       NAPoint x{Vec(d.m), Vec(d.k), t};
                       for (std::size_t i = 0; i < ang.v_dirs.size(); ++i)
                         for (std::size_t j = 0; j < ang.z_dirs.size(); ++j) {
                           x.X = u * ang.v_dirs.node(i);
                           x.Z = v * ang.z_dirs.node(j);
                           acc += ang.v_dirs.weights[i] * ang.z_dirs.weights[j] * g(x);
                         }
                       return std::exp(-Q * t) * acc;
                     },
                     rule);
}

}  // namespace detail

/// Resolution of the four-dimensional ball integrals used for Helgason-Fourier
/// and Radon transforms: slice nodes per parameter and nodes per angle.
struct BallRule {
  SliceRule slices;
  AngularRules angles;

  /// Default resolution for smooth compactly supported integrands: about half of
  /// the one-dimensional spec in each slice parameter and 8 nodes per angle.
  static BallRule for_spec(Dimensions d, const QuadratureSpec& spec) {
    QuadratureSpec s = spec;
    s.panels = std::max(1, spec.panels / 2);
    s.nodes_1d = std::max(4, spec.nodes_1d / 2 + 2);
    const int per = std::max(4, spec.nodes_1d / 2 - 2);
    return {SliceRule::from_spec(s), AngularRules::for_dims(d, per, 512, spec.seed)};
  }
};

/// Helgason-Fourier transform int_{NA} f(x) P_lambda(x, n0) dx of a function
/// supported in B_R, for a list of spectral points (the ball is sampled once).
template <class F>
std::vector<cplx> helgason_fourier(const HTypeAlgebra& alg, F&& f, double R, const std::vector<SpectralPoint>& lams,
                                   const Vec& X0, const Vec& Z0, const BallRule& rule) {
  if (!(R > 0.0)) throw std::invalid_argument("helgason_fourier: support radius must be positive");
  const double Q = alg.Q();
  std::vector<cplx> expo;
  for (const auto& l : lams) expo.push_back(0.5 - cplx(0.0, 1.0) * l.lambda / Q);
  using Sum = detail::SpectralSum;
  const auto total = detail::integrate_ball_points(
      alg, R,
      [&](const NAPoint& x) {
        Sum s;
        s.v.assign(lams.size(), cplx{});
        const double fx = f(x);
        if (fx == 0.0) return s;
        if (!std::isfinite(fx)) throw numerical_error("helgason_fourier: non-finite integrand");
        const auto [dX, dZ] = n_quotient(alg, X0, Z0, x.X, x.Z);
        const double logP = log_poisson_kernel(alg.dims(), x.t, dX.squaredNorm(), dZ.squaredNorm());
        for (std::size_t i = 0; i < lams.size(); ++i) s.v[i] = fx * std::exp(expo[i] * logP);
        return s;
      },
      rule.slices, rule.angles);
  std::vector<cplx> out = total.v;
  out.resize(lams.size());
  return out;
}

template <class F>
cplx helgason_fourier(const HTypeAlgebra& alg, F&& f, double R, SpectralPoint lam, const Vec& X0, const Vec& Z0,
                      const QuadratureSpec& spec = {}) {
  return helgason_fourier(alg, std::forward<F>(f), R, std::vector<SpectralPoint>{lam}, X0, Z0,
                          BallRule::for_spec(alg.dims(), spec))
      .front();
}

/// Radon transform a^{-Q/2} int_N f(n0 sigma(n a)) dn of a function supported in B_R.
///
/// The support of n -> f(n0 sigma(n a)) is the ball of radius R around
/// c = sigma(n0^{-1}); writing n a = c (n', a / a_c) turns the integral into a
/// slice integral of that ball with Jacobian a_c^Q.
template <class F>
double radon_transform(const HTypeAlgebra& alg, F&& f, double R, double a, const Vec& X0, const Vec& Z0,
                       const BallRule& rule) {
  if (!(a > 0.0)) throw std::invalid_argument("radon_transform: a must be positive");
  const Dimensions d = alg.dims();
  const NAPoint n0{X0, Z0, 0.0};
  const NAPoint c = geodesic_inversion(alg, inverse(alg, n0));
  const double tp = std::log(a) - c.t;
  const double areas = sphere_area(d.m) * sphere_area(d.k);
  const double inner = integrate_slice(
      d, tp, R,
      [&](double, double u, double v) {
        double acc = 0.0;
        NAPoint y{Vec(d.m), Vec(d.k), tp};
        for (std::size_t i = 0; i < rule.angles.v_dirs.size(); ++i)
          for (std::size_t j = 0; j < rule.angles.z_dirs.size(); ++j) {
            y.X = u * rule.angles.v_dirs.node(i);
            y.Z = v * rule.angles.z_dirs.node(j);
            const NAPoint x = multiply(alg, n0, geodesic_inversion(alg, multiply(alg, c, y)));
            acc += rule.angles.v_dirs.weights[i] * rule.angles.z_dirs.weights[j] * f(x);
          }
        return acc;
      },
      rule.slices);
  return std::exp(-0.5 * alg.Q() * std::log(a) + alg.Q() * c.t) * areas * inner;
}

template <class F>
double radon_transform(const HTypeAlgebra& alg, F&& f, double R, double a, const Vec& X0, const Vec& Z0,
                       const QuadratureSpec& spec = {}) {
  return radon_transform(alg, std::forward<F>(f), R, a, X0, Z0, BallRule::for_spec(alg.dims(), spec));
}

/// Result of a sampled derivative-bound check.
struct DerivativeBoundReport {
  double max_ratio = 0.0;
  NAPoint worst_point;
  std::size_t samples = 0;
};

/// max over sampled x in B_R of |X_J P_lambda(x, n0)| divided by
/// e^{R |Im lambda|} (1 + |lambda|)^{|J|} P_1(n0)^{1/2 + Im lambda / Q}.
inline DerivativeBoundReport check_Plambda_derivative_bound(const HTypeAlgebra& alg, double R, SpectralPoint lam,
                                                            const Vec& X0, const Vec& Z0, const std::vector<int>& J,
                                                            int radial_samples = 6, int directions = 64,
                                                            std::uint64_t seed = 1) {
  if (J.size() > 2) throw std::invalid_argument("check_Plambda_derivative_bound: |J| <= 2");
  if (!(R > 0.0)) throw std::invalid_argument("check_Plambda_derivative_bound: R must be positive");
  const auto dirs = SphereRule::random_orthogonal(alg.n(), directions, seed);
  const double im = lam.lambda.imag();
  const double P1 = poisson_kernel(alg, 1.0, X0, Z0);
  const double denom = std::exp(R * std::abs(im)) * std::pow(1.0 + std::abs(lam.lambda), static_cast<double>(J.size())) *
                       std::pow(P1, 0.5 + im / alg.Q());
  auto P = [&](const NAPoint& x) { return P_lambda(alg, lam, x, X0, Z0); };
  DerivativeBoundReport rep;
  rep.worst_point = NAPoint::identity(alg);
  for (int i = 0; i <= radial_samples; ++i) {
    const double r = R * i / radial_samples;
    for (std::size_t j = 0; j < (i == 0 ? 1 : dirs.size()); ++j) {
      const NAPoint x = sphere_point(alg, r, dirs.node(j));
      const double ratio = std::abs(left_invariant_derivative(alg, P, x, J)) / denom;
      ++rep.samples;
      if (ratio > rep.max_ratio) {
        rep.max_ratio = ratio;
        rep.worst_point = x;
      }
    }
  }
  return rep;
}

}  // namespace hna
