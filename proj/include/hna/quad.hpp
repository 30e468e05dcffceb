#pragma once

#include <boost/math/special_functions/legendre.hpp>
#include <nlohmann/json.hpp>

#include <Eigen/Dense>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "dimensions.hpp"

namespace hna {

/// Resolution parameters shared by every integration routine.
///
/// Truncation radii of 0 mean "choose from the problem" (see
/// default_truncation_X / default_truncation_Z).
struct QuadratureSpec {
  int nodes_1d = 20;
  int panels = 16;
  double truncation_radius_X = 0.0;
  double truncation_radius_Z = 0.0;
  int sphere_nodes = 65536;
  std::uint64_t seed = 20240611ULL;

  void validate() const {
    if (nodes_1d <= 0 || panels <= 0 || sphere_nodes <= 0)
      throw std::invalid_argument("QuadratureSpec: node and panel counts must be positive");
    if (truncation_radius_X < 0.0 || truncation_radius_Z < 0.0)
      throw std::invalid_argument("QuadratureSpec: truncation radii must be nonnegative");
  }
};

inline void to_json(nlohmann::json& j, const QuadratureSpec& s) {
  j = {{"nodes_1d", s.nodes_1d},
       {"panels", s.panels},
       {"truncation_radius_X", s.truncation_radius_X},
       {"truncation_radius_Z", s.truncation_radius_Z},
       {"sphere_nodes", s.sphere_nodes},
       {"seed", s.seed}};
}

/// Strict parse: unknown keys are rejected, missing keys keep their defaults.
inline void from_json(const nlohmann::json& j, QuadratureSpec& s) {
  if (!j.is_object()) throw std::invalid_argument("quadrature: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "nodes_1d") s.nodes_1d = value.get<int>();
    else if (key == "panels") s.panels = value.get<int>();
    else if (key == "truncation_radius_X") s.truncation_radius_X = value.get<double>();
    else if (key == "truncation_radius_Z") s.truncation_radius_Z = value.get<double>();
    else if (key == "sphere_nodes") s.sphere_nodes = value.get<int>();
    else if (key == "seed") s.seed = value.get<std::uint64_t>();
    else throw std::invalid_argument("quadrature: unknown key '" + key + "'");
  }
  s.validate();
}

/// Default X truncation for Poisson-type integrands over N near a ball of radius R.
inline double default_truncation_X(double R) { return 40.0 * std::max(1.0, std::exp(0.5 * R)); }
/// Default Z truncation for Poisson-type integrands over N near a ball of radius R.
inline double default_truncation_Z(double R) { return 40.0 * std::max(1.0, std::exp(R)); }

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

/// n-point Gauss-Legendre rule, cached per n. Nodes come from Boost's Legendre
/// zeros; weights from 2 / ((1 - x^2) P_n'(x)^2).
inline const GaussRule& gauss_legendre(int n) {
  if (n <= 0) throw std::invalid_argument("gauss_legendre: n must be positive");
  static std::mutex mtx;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  const auto zeros = boost::math::legendre_p_zeros<double>(n);
  GaussRule rule;
  auto push = [&](double z) {
    const double dp = boost::math::legendre_p_prime<double>(n, z);
    rule.x.push_back(z);
    rule.w.push_back(2.0 / ((1.0 - z * z) * dp * dp));
  };
  for (auto r = zeros.rbegin(); r != zeros.rend(); ++r)
    if (*r != 0.0) push(-*r);
  for (double z : zeros) push(z);
  return cache.emplace(n, std::move(rule)).first->second;
}

/// Nodes and weights of a 1-D rule on an interval or half-line.
struct LineRule {
  std::vector<double> x;
  std::vector<double> w;

  void append_panel(double a, double b, int n) {
    const auto& g = gauss_legendre(n);
    const double h = 0.5 * (b - a), c = 0.5 * (a + b);
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      x.push_back(c + h * g.x[i]);
      w.push_back(h * g.w[i]);
    }
  }
  [[nodiscard]] std::size_t size() const { return x.size(); }
};

/// Composite Gauss-Legendre rule with equal panels on [a, b].
inline LineRule panel_rule(double a, double b, int panels, int nodes) {
  if (!(a <= b)) throw std::invalid_argument("panel_rule: need a <= b");
  LineRule r;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) r.append_panel(a + p * h, p + 1 == panels ? b : a + (p + 1) * h, nodes);
  return r;
}

/// Composite rule on [a, b] whose panel boundaries include the given breakpoints.
inline LineRule breakpoint_rule(std::vector<double> breaks, int nodes) {
  std::sort(breaks.begin(), breaks.end());
  LineRule r;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    if (breaks[i + 1] > breaks[i]) r.append_panel(breaks[i], breaks[i + 1], nodes);
  return r;
}

/// Panel count that keeps the phase per panel below 2 pi / 10 for an integrand
/// oscillating like cos(omega s) on an interval of the given length.
inline int oscillation_panels(double omega, double length, int minimum = 32) {
  const double need = 10.0 * std::abs(omega) * length / (2.0 * std::numbers::pi);
  return std::max(minimum, static_cast<int>(std::ceil(need)));
}

/// Rule for [0, infinity): geometric panels from scale*2^-6 up to the truncation
/// point T, plus the tail [T, infinity) mapped by x = T / s, s in (0, 1].
///
/// core_size() is the number of nodes inside [0, T]; nodes past it carry the tail.
struct HalfLineRule {
  LineRule rule;
  std::size_t core = 0;
  double truncation = 0.0;
  [[nodiscard]] std::size_t core_size() const { return core; }
};

inline HalfLineRule half_line_rule(double scale, double truncation, int nodes, bool with_tail = true) {
  if (!(scale > 0.0) || !(truncation > 0.0))
    throw std::invalid_argument("half_line_rule: scale and truncation must be positive");
  HalfLineRule h;
  h.truncation = truncation;
  std::vector<double> breaks{0.0};
  for (double b = scale / 64.0; b < truncation; b *= 2.0) breaks.push_back(b);
  breaks.push_back(truncation);
  h.rule = breakpoint_rule(breaks, nodes);
  h.core = h.rule.size();
  if (with_tail) {
    const auto& g = gauss_legendre(2 * nodes);
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      const double s = 0.5 * (g.x[i] + 1.0);
      h.rule.x.push_back(truncation / s);
      h.rule.w.push_back(0.5 * g.w[i] * truncation / (s * s));
    }
  }
  return h;
}

namespace detail {
template <class T>
bool is_finite_value(const T& v) {
  if constexpr (std::is_floating_point_v<T>) return std::isfinite(v);
  else return std::isfinite(v.real()) && std::isfinite(v.imag());
}
}  // namespace detail

/// Sum of w_i f(x_i) over a rule; NaN or infinite samples are an error.
template <class F>
auto apply_rule(const LineRule& r, F&& f) {
  using R = std::decay_t<decltype(f(0.0))>;
  R acc{};
  for (std::size_t i = 0; i < r.size(); ++i) {
    const R v = f(r.x[i]);
    if (!detail::is_finite_value(v))
      throw numerical_error("quadrature: non-finite integrand at x = " + std::to_string(r.x[i]));
    acc += r.w[i] * v;
  }
  return acc;
}

/// Composite Gauss-Legendre estimate of the integral of f over [a, b].
template <class F>
auto integrate_1d(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
  if (!(a < b)) {
    if (a == b) return decltype(f(a)){};
    throw std::invalid_argument("integrate_1d: need a < b");
  }
  return apply_rule(panel_rule(a, b, spec.panels, spec.nodes_1d), f);
}

/// Integral over N = R^m x R^k of an integrand depending on (|X|, |Z|).
struct BiradialResult {
  double value = 0.0;  ///< full integral, mapped tail included
  double tail = 0.0;   ///< part coming from |X| > T_X or |Z| > T_Z
};

/// omega_{m-1} omega_{k-1} int int g(u, v) u^{m-1} v^{k-1} du dv.
///
/// The quadrant is split at the truncation radii; the part beyond them is
/// evaluated with a mapped rule and returned separately as the tail, so callers
/// can audit truncation. scale_X and scale_Z set where the geometric panels start.
template <class G>
BiradialResult integrate_N_biradial(G&& g, Dimensions dims, const QuadratureSpec& spec = {},
                                    double scale_X = 1.0, double scale_Z = 1.0, double tail_tolerance = -1.0) {
  spec.validate();
  const double TX = spec.truncation_radius_X > 0 ? spec.truncation_radius_X : default_truncation_X(0.0);
  const double TZ = spec.truncation_radius_Z > 0 ? spec.truncation_radius_Z : default_truncation_Z(0.0);
  const auto ru = half_line_rule(scale_X, TX, spec.nodes_1d);
  const auto rv = half_line_rule(scale_Z, TZ, spec.nodes_1d);
  double core = 0.0, tail = 0.0;
  for (std::size_t i = 0; i < ru.rule.size(); ++i) {
    const double u = ru.rule.x[i];
    const double wu = ru.rule.w[i] * std::pow(u, dims.m - 1);
    for (std::size_t j = 0; j < rv.rule.size(); ++j) {
      const double v = rv.rule.x[j];
      const double val = g(u, v);
      if (!std::isfinite(val)) throw numerical_error("integrate_N_biradial: non-finite integrand");
      const double c = wu * rv.rule.w[j] * std::pow(v, dims.k - 1) * val;
      if (i < ru.core_size() && j < rv.core_size()) core += c;
      else tail += c;
    }
  }
  const double areas = sphere_area(dims.m) * sphere_area(dims.k);
  BiradialResult res{areas * (core + tail), areas * tail};
  if (tail_tolerance >= 0.0 && std::abs(res.tail) > tail_tolerance)
    throw numerical_error("integrate_N_biradial: truncation tail " + std::to_string(res.tail) +
                          " exceeds tolerance");
  return res;
}

/// Equal-or-weighted point set on the unit sphere S^{d-1} of R^d; weights sum to 1.
struct SphereRule {
  int dim = 0;
  Eigen::MatrixXd nodes;  ///< d x count, unit columns
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const { return weights.size(); }
  [[nodiscard]] Eigen::VectorXd node(std::size_t i) const { return nodes.col(static_cast<Eigen::Index>(i)); }

  /// Tensor Gauss rule in hyperspherical angles: `per_angle` Gauss nodes for each
  /// polar angle in [0, pi] and 2*per_angle equispaced nodes for the azimuth.
  static SphereRule product(int d, int per_angle) {
    if (d < 1 || per_angle < 1) throw std::invalid_argument("SphereRule::product: bad size");
    SphereRule s;
    s.dim = d;
    if (d == 1) {
      s.nodes = Eigen::MatrixXd(1, 2);
      s.nodes << 1.0, -1.0;
      s.weights = {0.5, 0.5};
      return s;
    }
    const auto& g = gauss_legendre(per_angle);
    const int n_az = 2 * per_angle;
    std::size_t count = static_cast<std::size_t>(n_az);
    for (int j = 0; j < d - 2; ++j) count *= static_cast<std::size_t>(per_angle);
    s.nodes.resize(d, static_cast<Eigen::Index>(count));
    s.weights.assign(count, 0.0);
    std::vector<int> idx(static_cast<std::size_t>(d - 2), 0);
    std::size_t col = 0;
    double total = 0.0;
    for (std::size_t c = 0; c < count / n_az; ++c) {
      // Decode polar-angle indices.
      std::size_t rem = c;
      for (int j = d - 3; j >= 0; --j) {
        idx[static_cast<std::size_t>(j)] = static_cast<int>(rem % per_angle);
        rem /= per_angle;
      }
      Eigen::VectorXd base(d);
      double prod_sin = 1.0, weight = 1.0;
      for (int j = 0; j < d - 2; ++j) {
        const double xg = g.x[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
        const double theta = 0.5 * std::numbers::pi * (xg + 1.0);
        base(j) = prod_sin * std::cos(theta);
        weight *= g.w[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])] *
                  std::pow(std::sin(theta), d - 2 - j);
        prod_sin *= std::sin(theta);
      }
      for (int a = 0; a < n_az; ++a) {
        const double phi = 2.0 * std::numbers::pi * (a + 0.5) / n_az;
        Eigen::VectorXd p = base;
        p(d - 2) = prod_sin * std::cos(phi);
        p(d - 1) = prod_sin * std::sin(phi);
        s.nodes.col(static_cast<Eigen::Index>(col)) = p;
        s.weights[col] = weight;
        total += weight;
        ++col;
      }
    }
    for (double& w : s.weights) w /= total;
    return s;
  }

  /// Seeded random orthogonal-direction set: the columns of Q and -Q for
  /// independent Haar-random orthogonal matrices Q. Exact for polynomials of
  /// degree <= 3 and reproducible for a given seed.
  static SphereRule random_orthogonal(int d, int count, std::uint64_t seed) {
    if (d < 1 || count < 1) throw std::invalid_argument("SphereRule::random_orthogonal: bad size");
    const int frames = std::max(1, count / (2 * d));
    SphereRule s;
    s.dim = d;
    s.nodes.resize(d, 2 * d * frames);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int f = 0; f < frames; ++f) {
      Eigen::MatrixXd G(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) G(i, j) = normal(rng);
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
      Eigen::MatrixXd Qm = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
      for (int c = 0; c < d; ++c) {
        s.nodes.col(2 * d * f + 2 * c) = Qm.col(c);
        s.nodes.col(2 * d * f + 2 * c + 1) = -Qm.col(c);
      }
    }
    s.weights.assign(static_cast<std::size_t>(2 * d * frames), 1.0 / (2.0 * d * frames));
    return s;
  }

  /// Rule used by default for a spec: the product rule (at most 64 nodes per
  /// angle) while its size stays within spec.sphere_nodes and the dimension is
  /// at most 5, otherwise the random orthogonal set.
  static SphereRule for_spec(int d, const QuadratureSpec& spec) {
    if (d == 1) return product(1, 1);
    if (d <= 5) {
      int per = 1;
      auto size_of = [d](int p) {
        double c = 2.0 * p;
        for (int j = 0; j < d - 2; ++j) c *= p;
        return c;
      };
      while (per < 64 && size_of(per + 1) <= spec.sphere_nodes) ++per;
      if (per >= 8) return product(d, per);
    }
    return random_orthogonal(d, spec.sphere_nodes, spec.seed);
  }
};

/// Weighted average of f over a sphere rule; f takes a direction (Eigen vector).
template <class F>
auto sphere_average(F&& f, const SphereRule& rule) {
  using R = std::decay_t<decltype(f(rule.node(0)))>;
  R acc{};
  for (std::size_t i = 0; i < rule.size(); ++i) acc += rule.weights[i] * f(rule.node(i));
  return acc;
}

/// Average over S^{n-1} with the default rule for the spec.
template <class F>
auto sphere_average(F&& f, int n, const QuadratureSpec& spec) {
  if (n < 2) throw std::invalid_argument("sphere_average: n must be >= 2");
  return sphere_average(std::forward<F>(f), SphereRule::for_spec(n, spec));
}

}  // namespace hna
