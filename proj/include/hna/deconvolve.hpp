#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <nlohmann/json.hpp>

#include "meanvalue.hpp"

namespace hna {

/// Real zeros of lambda -> phi_lambda(t) on (0, lambda_max], located by a
/// sign-change scan and refined to 1e-10 by TOMS 748. Zeros come in pairs +-z;
/// only the positive ones are returned.
inline std::vector<double> locate_phi_zeros(Dimensions d, double t, double lambda_max) {
  if (!(t > 0.0)) throw std::invalid_argument("locate_phi_zeros: t must be positive");
  if (!(lambda_max > 0.0)) return {};
  // The zero spacing tends to pi / t; sixteen samples per spacing cannot straddle two zeros.
  const int count = std::max(64, static_cast<int>(std::ceil(16.0 * lambda_max * t / std::numbers::pi)) + 1);
  const auto grid = linear_grid(0.0, lambda_max, count);
  const auto vals = spherical_phi_many(d, std::vector<cplx>(grid.begin(), grid.end()), t);
  auto f = [&](double l) { return spherical_phi(d, l, t).real(); };
  std::vector<double> zeros;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double a = vals[i].real(), b = vals[i + 1].real();
    if (a == 0.0) {
      if (i > 0) zeros.push_back(grid[i]);
      continue;
    }
    if ((a < 0.0) == (b < 0.0) || b == 0.0) continue;
    std::uintmax_t iters = 100;
    const auto root = boost::math::tools::toms748_solve(
        f, grid[i], grid[i + 1], a, b, [](double lo, double hi) { return hi - lo < 1e-11; }, iters);
    zeros.push_back(0.5 * (root.first + root.second));
  }
  if (!grid.empty() && vals.back().real() == 0.0) zeros.push_back(grid.back());
  return zeros;
}

/// Cubic B-spline through samples of an even profile on a uniform grid starting at 0,
/// extended by zero past the last grid point.
inline RadialFunction tabulated_radial(const std::vector<double>& r_grid, const std::vector<double>& values) {
  if (r_grid.size() < 4 || values.size() != r_grid.size())
    throw std::invalid_argument("tabulated_radial: need at least four matching samples");
  if (r_grid.front() != 0.0) throw std::invalid_argument("tabulated_radial: grid must start at 0");
  const double h = r_grid[1] - r_grid[0];
  for (std::size_t i = 1; i < r_grid.size(); ++i)
    if (std::abs(r_grid[i] - r_grid[i - 1] - h) > 1e-9 * std::max(1.0, r_grid.back()))
      throw std::invalid_argument("tabulated_radial: grid must be uniform");
  auto spline = std::make_shared<boost::math::interpolators::cardinal_cubic_b_spline<double>>(
      values.begin(), values.end(), 0.0, h, 0.0);
  const double end = r_grid.back();
  return {[spline, end](double r) { return r > end ? 0.0 : (*spline)(r); }, end};
}

/// lambda quadrature on [0, lambda_max] with panel breaks at the zeros of phi_lambda(t).
/// `reach` bounds the oscillation frequency in lambda of the integrands (support plus radius).
inline LineRule guarded_lambda_rule(const std::vector<double>& zeros, double lambda_max, double reach, int nodes = 20) {
  std::vector<double> breaks{0.0};
  for (double z : zeros)
    if (z > 0.0 && z < lambda_max) breaks.push_back(z);
  breaks.push_back(lambda_max);
  LineRule rule;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double len = breaks[i + 1] - breaks[i];
    if (len <= 0.0) continue;
    const int panels = std::max(1, static_cast<int>(std::ceil(reach * len / std::numbers::pi)));
    for (int p = 0; p < panels; ++p)
      rule.append_panel(breaks[i] + len * p / panels, breaks[i] + len * (p + 1) / panels, nodes);
  }
  return rule;
}

/// Data of M_t f = g to be solved for radial f.
struct DeconvolutionProblem {
  RadialFunction g;
  double t = 1.0;
  LineRule lambda_rule;             ///< lambda nodes and weights on [0, Lambda]
  std::vector<double> zeros;        ///< zeros of phi_lambda(t) in [0, Lambda]
  double zero_guard = 1e-6;         ///< refuse nodes closer than this to a zero
  std::vector<double> r_grid;       ///< uniform output grid starting at 0

  void validate() const {
    if (!g.bounded()) throw std::invalid_argument("DeconvolutionProblem: g must have compact support");
    if (!(t > 0.0)) throw std::invalid_argument("DeconvolutionProblem: t must be positive");
    if (!(zero_guard > 0.0)) throw std::invalid_argument("DeconvolutionProblem: zero guard must be positive");
    if (lambda_rule.size() == 0 || r_grid.empty()) throw std::invalid_argument("DeconvolutionProblem: empty grid");
    if (!std::is_sorted(lambda_rule.x.begin(), lambda_rule.x.end()) || !std::is_sorted(r_grid.begin(), r_grid.end()))
      throw std::invalid_argument("DeconvolutionProblem: grids must be sorted");
  }

  /// Standard setup: Lambda = 40 / (support of g minus t), output grid [0, support of g + t].
  static DeconvolutionProblem make(Dimensions d, const RadialFunction& g, double t, double zero_guard = 1e-6,
                                   int r_points = 81, int nodes = 20) {
    if (!g.bounded()) throw std::invalid_argument("DeconvolutionProblem::make: g must have compact support");
    if (!(t > 0.0)) throw std::invalid_argument("DeconvolutionProblem::make: t must be positive");
    DeconvolutionProblem p;
    p.g = g;
    p.t = t;
    p.zero_guard = zero_guard;
    const double Rg = g.support_radius;
    const double lambda_max = spectral_cutoff(Rg > 1.5 * t ? Rg - t : Rg / 3.0);
    const double r_max = Rg + t;
    p.zeros = locate_phi_zeros(d, t, lambda_max);
    p.lambda_rule = guarded_lambda_rule(p.zeros, lambda_max, r_max + Rg, nodes);
    p.r_grid = linear_grid(0.0, r_max, r_points);
    return p;
  }
};

struct DeconvolutionResult {
  std::vector<double> r_grid;
  std::vector<double> f_rec;
  std::vector<double> g_values;
  std::vector<double> residual;   ///< |M_t f_rec - g| on r_grid
  double residual_rel = 0.0;      ///< sup residual / sup |g|
  double min_phi = 0.0;           ///< smallest |phi_lambda(t)| divided by
  double min_zero_distance = 0.0; ///< closest lambda node to a zero
  std::size_t lambda_nodes = 0;
  std::size_t zeros = 0;
  RadialFunction f;               ///< spline through f_rec
};

inline void to_json(nlohmann::json& j, const DeconvolutionResult& r) {
  j = {{"residual_rel", r.residual_rel}, {"min_phi", r.min_phi},       {"min_zero_distance", r.min_zero_distance},
       {"lambda_nodes", r.lambda_nodes}, {"zeros", r.zeros},           {"r_points", r.r_grid.size()}};
}

/// Radial f with M_t f = g: f~ = g~ / phi_lambda(t) on the guarded grid, then radial inversion.
/// The residual |M_t f - g| is measured along the A-axis with the given sphere rule.
inline DeconvolutionResult solve(const HTypeAlgebra& alg, const DeconvolutionProblem& prob, const SphereRule& sphere,
                                 const QuadratureSpec& spec = {}) {
  prob.validate();
  const Dimensions d = alg.dims();
  DeconvolutionResult res;
  res.min_zero_distance = std::numeric_limits<double>::infinity();
  for (double l : prob.lambda_rule.x)
    for (double z : prob.zeros) res.min_zero_distance = std::min(res.min_zero_distance, std::abs(l - z));
  if (res.min_zero_distance < prob.zero_guard)
    throw numerical_error("deconvolve: lambda node within the zero guard of a zero of phi_lambda(t)");

  const std::vector<cplx> lambdas(prob.lambda_rule.x.begin(), prob.lambda_rule.x.end());
  const auto ghat = abel_fourier(d, prob.g, lambdas, spec);
  const auto phi = spherical_phi_many(d, lambdas, prob.t);
  std::vector<cplx> fhat(lambdas.size());
  res.min_phi = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < lambdas.size(); ++j) {
    res.min_phi = std::min(res.min_phi, std::abs(phi[j]));
    fhat[j] = ghat[j] / phi[j];
  }
  res.r_grid = prob.r_grid;
  res.f_rec = radial_inversion(d, prob.lambda_rule, fhat, prob.r_grid, inversion_constant(d));
  res.f = tabulated_radial(res.r_grid, res.f_rec);
  res.lambda_nodes = lambdas.size();
  res.zeros = prob.zeros.size();

  double gmax = 0.0, rmax = 0.0;
  for (double r : res.r_grid) {
    const NAPoint x{Vec::Zero(alg.m()), Vec::Zero(alg.k()), r};
    const double mt = mean_value(alg, [&](const NAPoint& y) { return res.f(distance_to_origin(alg, y)); }, x, prob.t, sphere);
    const double gv = prob.g(r);
    res.g_values.push_back(gv);
    res.residual.push_back(std::abs(mt - gv));
    gmax = std::max(gmax, std::abs(gv));
    rmax = std::max(rmax, res.residual.back());
  }
  res.residual_rel = gmax > 0.0 ? rmax / gmax : rmax;
  return res;
}

inline DeconvolutionResult solve(const HTypeAlgebra& alg, const DeconvolutionProblem& prob, const QuadratureSpec& spec = {}) {
  return solve(alg, prob, SphereRule::for_spec(alg.n(), spec), spec);
}

/// g = M_t f0 tabulated along the A-axis on `points` uniform radii of [0, R + t] and splined.
inline RadialFunction mean_value_target(const HTypeAlgebra& alg, const RadialFunction& f0, double t,
                                        const SphereRule& sphere, int points = 161) {
  if (!f0.bounded()) throw std::invalid_argument("mean_value_target: f0 must have compact support");
  const auto grid = linear_grid(0.0, f0.support_radius + t, points);
  std::vector<double> vals;
  for (double r : grid) {
    const NAPoint x{Vec::Zero(alg.m()), Vec::Zero(alg.k()), r};
    vals.push_back(mean_value(alg, [&](const NAPoint& y) { return f0(distance_to_origin(alg, y)); }, x, t, sphere));
  }
  vals.back() = 0.0;
  return tabulated_radial(grid, vals);
}

}  // namespace hna
