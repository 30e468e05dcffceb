#include <gtest/gtest.h>

#include <cmath>

#include "hna/deconvolve.hpp"

using namespace hna;

TEST(PhiZeros, SpacingPositivityAndEvenness) {
  const Dimensions d{2, 1};
  const double t = 1.0;
  const auto z = locate_phi_zeros(d, t, 60.0);
  ASSERT_GT(z.size(), 10u);
  EXPECT_GT(spherical_phi(d, 0.0, t).real(), 0.0);
  for (double l = 0.0; l < z.front(); l += 0.05) EXPECT_GT(spherical_phi(d, l, t).real(), 0.0) << l;
  for (double x : z) {
    EXPECT_LT(std::abs(spherical_phi(d, x, t)), 1e-10);
    EXPECT_LT(std::abs(spherical_phi(d, -x, t)), 1e-10);
  }
  for (std::size_t i = z.size() - 4; i + 1 < z.size(); ++i)
    EXPECT_NEAR((z[i + 1] - z[i]) / (std::numbers::pi / t), 1.0, 0.05);
  // Zeros at another radius and another algebra follow the same spacing.
  const auto z2 = locate_phi_zeros(Dimensions{4, 3}, 2.0, 30.0);
  ASSERT_GT(z2.size(), 4u);
  EXPECT_NEAR((z2.back() - z2[z2.size() - 2]) / (std::numbers::pi / 2.0), 1.0, 0.05);
  EXPECT_THROW(locate_phi_zeros(d, 0.0, 10.0), std::invalid_argument);
}

TEST(TabulatedRadial, InterpolatesSmoothProfiles) {
  const auto grid = linear_grid(0.0, 2.0, 81);
  std::vector<double> v;
  for (double r : grid) v.push_back(std::exp(-r * r));
  const auto f = tabulated_radial(grid, v);
  for (double r : {0.013, 0.77, 1.91}) EXPECT_NEAR(f(r), std::exp(-r * r), 1e-5);  // h = 0.025, end slope estimated on the right
  EXPECT_EQ(f(2.5), 0.0);
  EXPECT_THROW(tabulated_radial({0.0, 0.1, 0.3, 0.4}, {1, 1, 1, 1}), std::invalid_argument);
}

TEST(Deconvolve, RecoversKnownBumpAndSmallResidual) {
  const auto alg = build_htype(1, 1);
  QuadratureSpec spec;
  spec.sphere_nodes = 20000;
  const auto sphere = SphereRule::for_spec(alg.n(), spec);
  const auto f0 = RadialFunction::bump(1.0);
  const auto g = mean_value_target(alg, f0, 1.0, sphere);
  const auto prob = DeconvolutionProblem::make(alg.dims(), g, 1.0);
  const auto res = solve(alg, prob, sphere);
  double worst = 0.0;
  for (std::size_t i = 0; i < res.r_grid.size(); ++i) worst = std::max(worst, std::abs(res.f_rec[i] - f0(res.r_grid[i])));
  EXPECT_LT(worst, 1e-2);
  EXPECT_LT(res.residual_rel, 1e-2);
  EXPECT_GE(res.min_zero_distance, prob.zero_guard);
}

TEST(Deconvolve, ZeroDataAndLinearity) {
  const auto alg = build_htype(1, 1);
  QuadratureSpec spec;
  spec.sphere_nodes = 2000;
  const auto sphere = SphereRule::for_spec(alg.n(), spec);
  const RadialFunction zero{[](double) { return 0.0; }, 2.0};
  auto p0 = DeconvolutionProblem::make(alg.dims(), zero, 1.0, 1e-6, 21);
  const auto r0 = solve(alg, p0, sphere);
  for (double v : r0.f_rec) EXPECT_EQ(v, 0.0);

  const auto g1 = RadialFunction::bump(2.0, 6);
  const RadialFunction g2{[](double r) { return std::pow(1.0 - r * r / 4.0, 8) * r * r; }, 2.0};
  const RadialFunction mix{[&](double r) { return 2.0 * g1(r) - 0.5 * g2(r); }, 2.0};
  auto p = DeconvolutionProblem::make(alg.dims(), g1, 1.0, 1e-6, 21);
  const auto a = solve(alg, p, sphere);
  p.g = g2;
  const auto b = solve(alg, p, sphere);
  p.g = mix;
  const auto c = solve(alg, p, sphere);
  double scale = 0.0;
  for (double v : c.f_rec) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < c.f_rec.size(); ++i) EXPECT_NEAR(c.f_rec[i], 2.0 * a.f_rec[i] - 0.5 * b.f_rec[i], 1e-8 * scale);
}

TEST(Deconvolve, GridRefusalNearZeros) {
  const auto alg = build_htype(1, 1);
  auto p = DeconvolutionProblem::make(alg.dims(), RadialFunction::bump(2.0), 1.0, 1e-6, 21);
  p.zero_guard = 0.05;
  EXPECT_THROW(solve(alg, p), numerical_error);
  p.zero_guard = 0.0;
  EXPECT_THROW(solve(alg, p), std::invalid_argument);
}
