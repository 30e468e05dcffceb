#pragma once

#include <nlohmann/json.hpp>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "htype.hpp"
#include "quad.hpp"

namespace hna {

/// Point of NA in coordinates (X, Z, t) with t = log a.
struct NAPoint {
  Vec X;
  Vec Z;
  double t = 0.0;

  [[nodiscard]] double a() const { return std::exp(t); }

  static NAPoint identity(const HTypeAlgebra& alg) { return {Vec::Zero(alg.m()), Vec::Zero(alg.k()), 0.0}; }
  static NAPoint from_a(Vec X, Vec Z, double a) {
    if (!(a > 0.0)) throw std::invalid_argument("NAPoint: a must be positive");
    return {std::move(X), std::move(Z), std::log(a)};
  }
};

/// Point of the unit ball of R^{m+k+1}, ordered (X', Z', l').
struct BallPoint {
  Vec Xp;
  Vec Zp;
  double lp = 0.0;

  [[nodiscard]] double norm() const { return std::sqrt(Xp.squaredNorm() + Zp.squaredNorm() + lp * lp); }
};

inline void check_point(const HTypeAlgebra& alg, const NAPoint& p) {
  if (p.X.size() != alg.m() || p.Z.size() != alg.k())
    throw std::invalid_argument("NAPoint: coordinate lengths do not match the algebra");
  if (!std::isfinite(p.t)) throw std::invalid_argument("NAPoint: non-finite t");
}

/// Serialize as the flat array [X..., Z..., t].
inline nlohmann::json point_to_json(const NAPoint& p) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < p.X.size(); ++i) arr.push_back(p.X(i));
  for (Eigen::Index i = 0; i < p.Z.size(); ++i) arr.push_back(p.Z(i));
  arr.push_back(p.t);
  return arr;
}

inline NAPoint point_from_json(const HTypeAlgebra& alg, const nlohmann::json& j) {
  if (!j.is_array() || static_cast<int>(j.size()) != alg.m() + alg.k() + 1)
    throw std::invalid_argument("point: expected an array of length m+k+1");
  NAPoint p{Vec(alg.m()), Vec(alg.k()), 0.0};
  for (int i = 0; i < alg.m(); ++i) p.X(i) = j.at(static_cast<std::size_t>(i)).get<double>();
  for (int i = 0; i < alg.k(); ++i) p.Z(i) = j.at(static_cast<std::size_t>(alg.m() + i)).get<double>();
  p.t = j.back().get<double>();
  return p;
}

/// (X,Z,a)(X',Z',a') = (X + a^{1/2} X', Z + a Z' + a^{1/2} [X,X'] / 2, a a').
inline NAPoint multiply(const HTypeAlgebra& alg, const NAPoint& p, const NAPoint& q) {
  check_point(alg, p);
  check_point(alg, q);
  const double a = p.a(), sa = std::exp(0.5 * p.t);
  return {p.X + sa * q.X, p.Z + a * q.Z + 0.5 * sa * alg.bracket(p.X, q.X), p.t + q.t};
}

inline NAPoint inverse(const HTypeAlgebra& alg, const NAPoint& p) {
  check_point(alg, p);
  return {-std::exp(-0.5 * p.t) * p.X, -std::exp(-p.t) * p.Z, -p.t};
}

/// sinh^2(d(p,e)/2), written without the cancellation of the arccosh form.
inline double sinh2_half_distance(const Vec& X, const Vec& Z, double t) {
  const double a = std::exp(t), w = 0.25 * X.squaredNorm(), one_minus_a = -std::expm1(t);
  return (one_minus_a * one_minus_a + 2.0 * w * (1.0 + a) + w * w + Z.squaredNorm()) / (4.0 * a);
}

/// Geodesic distance to the identity: cosh^2(r/2) = ((1 + a + |X|^2/4)^2 + |Z|^2) / (4a).
inline double distance_to_origin(const HTypeAlgebra& alg, const NAPoint& p) {
  check_point(alg, p);
  return 2.0 * std::asinh(std::sqrt(sinh2_half_distance(p.X, p.Z, p.t)));
}

/// Same distance from the bi-radial data (|X|, |Z|, t).
inline double distance_from_radii(double u, double v, double t) {
  const double a = std::exp(t), w = 0.25 * u * u, one_minus_a = -std::expm1(t);
  const double s2 = (one_minus_a * one_minus_a + 2.0 * w * (1.0 + a) + w * w + v * v) / (4.0 * a);
  return 2.0 * std::asinh(std::sqrt(s2));
}

inline double distance(const HTypeAlgebra& alg, const NAPoint& p, const NAPoint& q) {
  return distance_to_origin(alg, multiply(alg, inverse(alg, p), q));
}

/// Cayley transform onto the unit ball, |cayley(p)| = tanh(d(p,e)/2).
inline BallPoint cayley(const HTypeAlgebra& alg, const NAPoint& p) {
  check_point(alg, p);
  const double a = p.a(), w = 0.25 * p.X.squaredNorm(), V = p.Z.squaredNorm();
  const double c = 1.0 + a + w;
  const double D = c * c + V;
  const double e = std::expm1(p.t) + w;
  return {(c * p.X - alg.apply_JZ(p.Z, p.X)) / D, 2.0 * p.Z / D, (e * c + V) / D};
}

inline NAPoint cayley_inverse(const HTypeAlgebra& alg, const BallPoint& b) {
  if (b.Xp.size() != alg.m() || b.Zp.size() != alg.k())
    throw std::invalid_argument("cayley_inverse: coordinate lengths do not match the algebra");
  if (!(b.norm() < 1.0)) throw std::invalid_argument("cayley_inverse: point is not inside the unit ball");
  const double one_minus_l = 1.0 - b.lp;
  const double D = 4.0 / (one_minus_l * one_minus_l + b.Zp.squaredNorm());
  const double u = 0.5 * one_minus_l * D;
  Vec Z = 0.5 * D * b.Zp;
  Vec X = u * b.Xp + alg.apply_JZ(Z, b.Xp);
  const double a = u - 1.0 - 0.25 * X.squaredNorm();
  if (!(a > 0.0)) throw numerical_error("cayley_inverse: lost positivity of a (point too close to the sphere)");
  return {std::move(X), std::move(Z), std::log(a)};
}

/// Geodesic inversion: an involutive isometry fixing e.
///   sigma(X,Z,a) = ((-(a + |X|^2/4) X + J_Z X) / D, -Z / D, a / D),
///   D = (a + |X|^2/4)^2 + |Z|^2.
inline NAPoint geodesic_inversion(const HTypeAlgebra& alg, const NAPoint& p) {
  check_point(alg, p);
  const double a = p.a(), s = a + 0.25 * p.X.squaredNorm();
  const double D = s * s + p.Z.squaredNorm();
  return {(-s * p.X + alg.apply_JZ(p.Z, p.X)) / D, -p.Z / D, p.t - std::log(D)};
}

/// Left Haar density against dX dZ dt: e^{-Q t}.
inline double haar_weight(const HTypeAlgebra& alg, const NAPoint& p) { return std::exp(-alg.Q() * p.t); }

/// Point of the geodesic sphere S_r in the direction omega of S^{n-1}
/// (ball coordinates ordered X', Z', l').
inline NAPoint sphere_point(const HTypeAlgebra& alg, double r, const Vec& omega) {
  if (omega.size() != alg.n()) throw std::invalid_argument("sphere_point: direction must lie in R^n");
  const double rho = std::tanh(0.5 * r);
  BallPoint b{rho * omega.head(alg.m()), rho * omega.segment(alg.m(), alg.k()), rho * omega(alg.n() - 1)};
  return cayley_inverse(alg, b);
}

/// Average of f over the geodesic sphere through p (radius d(p,e)), normalized measure.
template <class F>
auto radialize(const HTypeAlgebra& alg, F&& f, const NAPoint& p, const SphereRule& rule) {
  if (rule.dim != alg.n()) throw std::invalid_argument("radialize: sphere rule must live on S^{n-1}");
  const double r = distance_to_origin(alg, p);
  return sphere_average([&](const Vec& w) { return f(sphere_point(alg, r, w)); }, rule);
}

/// Average of f(|X| omega, Z, a) over omega in S^{m-1}.
template <class F>
auto v_radial_project(const HTypeAlgebra& alg, F&& f, const NAPoint& p, const SphereRule& rule) {
  check_point(alg, p);
  if (rule.dim != alg.m()) throw std::invalid_argument("v_radial_project: sphere rule must live on S^{m-1}");
  const double u = p.X.norm();
  return sphere_average([&](const Vec& w) { return f(NAPoint{u * w, p.Z, p.t}); }, rule);
}

/// How first-order left-invariant derivatives are evaluated.
enum class DerivativeRoute {
  coordinate,  ///< coordinate expression of the fields
  curve        ///< d/ds f(p exp(sY)) at s = 0
};

namespace detail {

// Fourth-order central difference of g at 0.
template <class G>
auto central_difference(G&& g, double h) {
  return (8.0 * (g(h) - g(-h)) - (g(2.0 * h) - g(-2.0 * h))) / (12.0 * h);
}

inline NAPoint displaced(const HTypeAlgebra& alg, const NAPoint& p, int field, double s, DerivativeRoute route) {
  const int m = alg.m(), k = alg.k();
  if (route == DerivativeRoute::curve) {
    NAPoint step = NAPoint::identity(alg);
    if (field == 0) step.t = s;
    else if (field <= m) step.X(field - 1) = s;
    else step.Z(field - m - 1) = s;
    return multiply(alg, p, step);
  }
  NAPoint q = p;
  if (field == 0) {
    q.t += s;
  } else if (field <= m) {
    const double sa = std::exp(0.5 * p.t);
    const int l = field - 1;
    q.X(l) += s * sa;
    for (int i = 0; i < k; ++i) q.Z(i) += s * 0.5 * sa * (alg.J(i) * p.X)(l);
  } else {
    q.Z(field - m - 1) += s * p.a();
  }
  return q;
}

}  // namespace detail

/// X_J f(p) for a multi-index J of field indices: 0 is a d/da, 1..m the v-fields,
/// m+1..m+k the z-fields. Fields compose left to right (J = {i, j} is X_i X_j f).
/// Derivatives use fourth-order central differences with step
/// 1e-3 (1 + max |coordinate|).
template <class F>
auto left_invariant_derivative(const HTypeAlgebra& alg, F&& f, const NAPoint& p, const std::vector<int>& J,
                               DerivativeRoute route = DerivativeRoute::coordinate) {
  using R = std::decay_t<decltype(f(p))>;
  check_point(alg, p);
  if (J.size() > 3) throw std::invalid_argument("left_invariant_derivative: |J| <= 3 supported");
  for (int j : J)
    if (j < 0 || j >= alg.m() + alg.k() + 1)
      throw std::invalid_argument("left_invariant_derivative: field index out of range");
  if (J.empty()) return static_cast<R>(f(p));
  const std::vector<int> rest(J.begin() + 1, J.end());
  auto inner = [&](const NAPoint& q) -> R { return left_invariant_derivative(alg, f, q, rest, route); };
  const double scale = 1.0 + std::max({p.X.size() ? p.X.cwiseAbs().maxCoeff() : 0.0,
                                       p.Z.size() ? p.Z.cwiseAbs().maxCoeff() : 0.0, std::abs(p.t)});
  const double h = 1e-3 * scale;
  if (!(h > 1e-300)) throw numerical_error("left_invariant_derivative: step underflow");
  return static_cast<R>(detail::central_difference(
      [&](double s) { return inner(detail::displaced(alg, p, J.front(), s, route)); }, h));
}

/// Quadrature rules for integrals over the slices {(X,Z) : d((X,Z,e^t), e) <= R}.
struct SliceRule {
  LineRule tau;    ///< radial parameter, r = |t| + (R - |t|) tau^2
  LineRule sigma;  ///< angular parameter, psi = psi_max(r) sigma
  LineRule t;      ///< ball height parameter, |t| = R (1 - s^2)

  static SliceRule from_spec(const QuadratureSpec& spec) {
    const int p = std::max(2, spec.panels / 4);
    return {panel_rule(0.0, 1.0, p, spec.nodes_1d), panel_rule(0.0, 1.0, p, spec.nodes_1d),
            panel_rule(0.0, 1.0, p, spec.nodes_1d)};
  }
};

/// int int_{d((u,v,e^t), e) <= R} h(r, u, v) u^{m-1} v^{k-1} du dv for fixed t,
/// with u = |X|, v = |Z| (sphere areas are not included).
///
/// Coordinates: q = 1 + a + u^2/4 = rho cos psi, v = rho sin psi with
/// rho = 2 sqrt(a) cosh(r/2); then du dv = (2/u) rho sqrt(a) sinh(r/2) dr dpsi.
template <class H>
auto integrate_slice(Dimensions dims, double t, double R, H&& h, const SliceRule& rule) {
  using Res = std::decay_t<decltype(h(0.0, 0.0, 0.0))>;
  Res acc{};
  const double at = std::abs(t);
  if (!(at < R)) return acc;
  const double a = std::exp(t), sa = std::exp(0.5 * t);
  for (std::size_t i = 0; i < rule.tau.size(); ++i) {
    const double tau = rule.tau.x[i];
    const double r = at + (R - at) * tau * tau;
    const double dr = 2.0 * (R - at) * tau * rule.tau.w[i];
    const double rho = 2.0 * sa * std::cosh(0.5 * r);
    const double gap2 = 4.0 * a * std::sinh(0.5 * (r + at)) * std::sinh(0.5 * (r - at));
    const double psi_max = std::atan2(std::sqrt(std::max(0.0, gap2)), 1.0 + a);
    const double jac = 2.0 * rho * sa * std::sinh(0.5 * r) * psi_max * dr;
    if (jac == 0.0) continue;
    for (std::size_t j = 0; j < rule.sigma.size(); ++j) {
      const double psi = psi_max * rule.sigma.x[j];
      const double q_gap = 2.0 * rho * std::sin(0.5 * (psi_max + psi)) * std::sin(0.5 * (psi_max - psi));
      const double u = 2.0 * std::sqrt(std::max(0.0, q_gap));
      const double v = rho * std::sin(psi);
      const double weight = jac * rule.sigma.w[j] * std::pow(u, dims.m - 2) * std::pow(v, dims.k - 1);
      acc += weight * h(r, u, v);
    }
  }
  return acc;
}

/// int_{-R}^{R} dt int int_{d <= R} g(t, r, u, v) u^{m-1} v^{k-1} du dv; the
/// height is graded as |t| = R (1 - s^2) so the vanishing slices at |t| = R stay smooth.
template <class G>
auto integrate_ball_slices(Dimensions dims, double R, G&& g, const SliceRule& rule) {
  using Res = std::decay_t<decltype(g(0.0, 0.0, 0.0, 0.0))>;
  Res acc{};
  for (std::size_t i = 0; i < rule.t.size(); ++i) {
    const double s = rule.t.x[i];
    const double dt = 2.0 * R * s * rule.t.w[i];
    for (double sign : {1.0, -1.0}) {
      const double t = sign * R * (1.0 - s * s);
      acc += dt * integrate_slice(dims, t, R, [&](double r, double u, double v) { return g(t, r, u, v); }, rule);
    }
  }
  return acc;
}

/// Volume of B_R from the polar form omega_{n-1} 2^{m+k} int_0^R sinh^{m+k}(r/2) cosh^k(r/2) dr.
inline double ball_volume_polar(Dimensions dims, double R, const QuadratureSpec& spec = {}) {
  return integrate_1d([&](double r) { return dims.sphere_volume(r); }, 0.0, R, spec);
}

/// Volume of B_R integrated in (X, Z, t) coordinates against e^{-Qt} dX dZ dt.
inline double ball_volume_coordinates(Dimensions dims, double R, const QuadratureSpec& spec = {}) {
  const auto rule = SliceRule::from_spec(spec);
  const double Q = dims.Q();
  return sphere_area(dims.m) * sphere_area(dims.k) *
         integrate_ball_slices(dims, R, [&](double t, double, double, double) { return std::exp(-Q * t); }, rule);
}

}  // namespace hna
