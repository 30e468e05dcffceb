#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hna/spherical.hpp"

using namespace hna;

namespace {
const cplx I(0.0, 1.0);
}

TEST(Hypergeometric, TrivialAndClosedForms) {
  EXPECT_EQ(gauss_2f1(0.3, 0.7, 1.5, 0.0), cplx(1.0));
  EXPECT_EQ(gauss_2f1(0.0, 2.5, 1.5, 0.9), cplx(1.0));
  EXPECT_NEAR(std::abs(gauss_2f1(1.0, 1.0, 2.0, 0.5) - 2.0 * std::log(2.0)), 0.0, 1e-14);
  // Terminating series with a = -3 is a cubic polynomial in z.
  const double z = 0.4;
  const double cubic = 1.0 - 3.0 * 2.0 / 4.0 * z + 3.0 * 2.0 * 2.0 * 3.0 / (4.0 * 5.0 * 2.0) * z * z -
                       6.0 * 24.0 / (4.0 * 5.0 * 6.0 * 6.0) * z * z * z;
  EXPECT_NEAR(gauss_2f1(-3.0, 2.0, 4.0, z).real(), cubic, 1e-15);
}

TEST(Hypergeometric, RejectsBadInputAndReportsNonConvergence) {
  EXPECT_THROW(gauss_2f1(1.0, 1.0, -2.0, 0.3), std::invalid_argument);
  EXPECT_THROW(gauss_2f1(1.0, 1.0, 2.0, 1.0), std::invalid_argument);
  EXPECT_THROW(gauss_2f1(1.0, 1.0, 2.0, -0.1), std::invalid_argument);
  EXPECT_THROW(gauss_2f1(1.0, 1.0, 2.0, 0.99999), numerical_error);
}

TEST(Gamma, ComplexLogGammaMatchesOracle) {
  // Real parts of log Gamma from mpmath.loggamma.
  EXPECT_NEAR(lgamma_complex({0.3, 2.0}).real(), -2.359449355937571, 1e-12);
  EXPECT_NEAR(lgamma_complex({-1.7, 0.4}).real(), 0.15447656611829278, 1e-12);
  EXPECT_NEAR(lgamma_complex({0.0, 150.0}).real(), -237.20582813307795, 1e-10);
  for (double x : {0.5, 1.0, 3.7, 12.25}) EXPECT_NEAR(lgamma_complex(x).real(), std::lgamma(x), 1e-13);
  // |Gamma(iy)|^2 = pi / (y sinh(pi y)).
  const double y = 2.3;
  EXPECT_NEAR(2.0 * lgamma_complex({0.0, y}).real(), std::log(std::numbers::pi / (y * std::sinh(std::numbers::pi * y))),
              1e-12);
}

TEST(Jacobi, ParametersFollowDimensions) {
  const auto p = JacobiParams::from({4, 3});
  EXPECT_DOUBLE_EQ(p.alpha, 3.0);
  EXPECT_DOUBLE_EQ(p.beta, 1.0);
  EXPECT_DOUBLE_EQ(p.rho, (Dimensions{4, 3}.Q()));
}

TEST(Jacobi, ValueAtZeroEvennessAndTermination) {
  const auto p = JacobiParams::from({2, 1});
  EXPECT_EQ(jacobi_phi(p, 3.0, 0.0), cplx(1.0));
  for (double s : {0.1, 0.4, 0.9, 1.7, 3.0})
    for (cplx mu : {cplx(0.5), cplx(3.0, 0.4), cplx(7.0, -1.0)}) {
      EXPECT_NEAR(std::abs(jacobi_phi(p, mu, s) - jacobi_phi(p, -mu, s)), 0.0, 1e-12) << s;
    }
  // i mu = rho terminates the series: phi = 1.
  for (double s : {0.2, 1.0, 2.5, 5.0}) EXPECT_NEAR(std::abs(jacobi_phi(p, -I * p.rho, s) - 1.0), 0.0, 1e-13);
}

TEST(Spherical, MatchesHypergeometricOracle) {
  // mpmath hyp2f1 at 30 digits, phi_lambda(r) = 2F1((Q - 2i lambda)/2, (Q + 2i lambda)/2; alpha+1; -sinh^2(r/2)).
  struct Row {
    int m, k;
    cplx lambda;
    double r;
    cplx expect;
  };
  const Row rows[] = {
      {2, 1, 1.0, 1.0, {0.7786001971438418, 0.0}},
      {2, 1, 5.0, 2.0, {0.0054220877696299782, 0.0}},
      {2, 1, {1.0, 0.5}, 0.5, {0.94653369901683653, -0.029821524266396137}},
      {4, 3, 1.0, 1.0, {0.64142907049560941, 0.0}},
      {4, 3, {10.0, -0.5}, 2.0, {-0.0003391178993761763, 0.00022868374538580153}},
      {8, 7, 3.0, 1.5, {0.06796081744696644, 0.0}},
      {2, 1, 10.0, 6.0, {7.9209596279216617e-5, 0.0}},
  };
  for (const auto& row : rows) {
    const auto v = spherical_phi_detail({row.m, row.k}, row.lambda, row.r);
    EXPECT_NEAR(std::abs(v.value - row.expect), 0.0, 1e-9) << row.m << "," << row.k << " lambda=" << row.lambda
                                                          << " r=" << row.r;
  }
}

TEST(Spherical, BasicProperties) {
  const Dimensions d{2, 1};
  EXPECT_EQ(spherical_phi(d, 4.0, 0.0), cplx(1.0));
  for (double r : {0.3, 1.0, 2.5, 4.0}) {
    EXPECT_NEAR(std::abs(spherical_phi(d, -0.5 * I * d.Q(), r) - 1.0), 0.0, 1e-12);
    for (double l : {0.0, 0.7, 3.0, 9.0}) {
      EXPECT_LE(std::abs(spherical_phi(d, l, r)), 1.0 + 1e-12);
      EXPECT_NEAR(std::abs(spherical_phi(d, l, r) - spherical_phi(d, -l, r)), 0.0, 1e-12);
    }
  }
}

TEST(Spherical, PoorlyConditionedSeriesFallsBackToKoornwinder) {
  const Dimensions d{2, 1};
  const auto v = spherical_phi_detail(d, 40.0, 3.0);
  EXPECT_EQ(v.route, SphericalRoute::koornwinder);
  EXPECT_GT(v.conditioning, kSeriesConditioningLimit);
  EXPECT_LE(std::abs(v.value), 1.0);
}

TEST(Koornwinder, AgreesWithSeriesOnGrid) {
  for (auto [m, k] : {std::pair{2, 1}, std::pair{4, 2}, std::pair{4, 3}, std::pair{8, 7}}) {
    const Dimensions d{m, k};
    for (double l : {0.0, 1.0, 5.0, 10.0})
      for (double t : {0.5, 1.0, 2.0}) {
        const cplx series = jacobi_phi(JacobiParams::from(d), 2.0 * l, 0.5 * t);
        EXPECT_NEAR(std::abs(koornwinder_phi(d, l, t) - series), 0.0, 1e-6) << m << "," << k << " " << l << " " << t;
      }
  }
}

TEST(Koornwinder, SmallRadiusLimitAndRejection) {
  const Dimensions d{2, 1};
  EXPECT_NEAR(std::abs(koornwinder_phi(d, 0.0, 1e-3)), 1.0, 1e-2);
  EXPECT_THROW(koornwinder_phi(d, 1.0, 0.0), std::invalid_argument);
}

TEST(Koornwinder, EvenCenterDimensionHasTrivialHypergeometricFactor) {
  // k = 2: Phi(0; T) = int_0^T (cosh T - cosh s)^{(n-3)/2} ds with (n-3)/2 = 2.
  const Dimensions d{4, 2};
  const double T = 0.8;
  const KoornwinderKernel K(d, T, 0.0);
  QuadratureSpec fine;
  fine.panels = 64;
  const double direct = integrate_1d([&](double s) { return std::pow(std::cosh(T) - std::cosh(s), 2.0); }, 0.0, T, fine);
  EXPECT_NEAR(K.transform(0.0).real(), direct, 1e-9);
}

TEST(Spherical, IntegralRepresentationAtIdentityAndOnTheAAxis) {
  const auto alg = build_htype(1, 1);
  QuadratureSpec spec;
  EXPECT_NEAR(std::abs(spherical_phi_integral(alg, 2.0, NAPoint::identity(alg), spec) - 1.0), 0.0, 1e-6);
  const NAPoint y{Vec::Zero(2), Vec::Zero(1), 1.0};
  EXPECT_NEAR(std::abs(spherical_phi_integral(alg, 1.0, y, spec) - 0.7786001971438418), 0.0, 1e-6);
  for (cplx l : {cplx(0.0), cplx(5.0, 0.5), cplx(10.0, -0.5)})
    for (double r : {0.5, 1.0, 2.0}) {
      const NAPoint yr{Vec::Zero(2), Vec::Zero(1), r};
      EXPECT_NEAR(std::abs(spherical_phi_integral(alg, l, yr, spec) - spherical_phi(alg, l, r)), 0.0, 1e-6)
          << l << " " << r;
    }
}

TEST(Spherical, IntegralRepresentationIsRadial) {
  const auto alg = build_htype(1, 1);
  QuadratureSpec spec;
  Vec w(4);
  w << 0.5, -0.3, 0.6, 0.2;
  w.normalize();
  const NAPoint y = sphere_point(alg, 1.0, w);
  ASSERT_NEAR(distance_to_origin(alg, y), 1.0, 1e-12);
  const cplx general = spherical_phi_integral(alg, 1.0, y, spec);
  const cplx axis = spherical_phi_integral(alg, 1.0, NAPoint{Vec::Zero(2), Vec::Zero(1), 1.0}, spec);
  EXPECT_NEAR(std::abs(general - axis), 0.0, 1e-6);
}

TEST(Spherical, EigenOdeResidual) {
  const Dimensions d{2, 1};
  std::vector<double> grid;
  for (double r = 0.1; r <= 3.0 + 1e-12; r += 0.1) grid.push_back(r);
  EXPECT_LT(eigen_ode_residual(d, 1.0, grid), 1e-7);
  EXPECT_LT(eigen_ode_residual(d, -0.5 * I * d.Q(), grid), 1e-9);
  EXPECT_LT(eigen_ode_residual({4, 3}, {2.0, 0.3}, grid), 1e-7);
  EXPECT_LT(eigen_ode_residual(d, 1.0, grid, 1e-2), eigen_ode_residual(d, 1.0, grid, 4e-2));
  EXPECT_THROW(eigen_ode_residual(d, 1.0, {0.01}), std::invalid_argument);
}

TEST(Plancherel, MatchesOracleAndGrowsPolynomially) {
  // mpmath: 1 / |c(2 lambda)|^2 with the Jacobi c-function.
  EXPECT_NEAR(plancherel_density(Dimensions{2, 1}, 1.0), 0.78833702373429059, 1e-12);
  EXPECT_NEAR(plancherel_density(Dimensions{4, 3}, 2.5) / 0.30605038022725013, 1.0, 1e-11);
  EXPECT_NEAR(plancherel_density(Dimensions{8, 7}, 0.3) / 2.6244869606080955e-11, 1.0, 1e-10);
  for (auto d : {Dimensions{2, 1}, Dimensions{4, 3}}) {
    EXPECT_EQ(plancherel_density(d, 0.0), 0.0);
    double lo = 1e300, hi = 0.0;
    for (double l = 10.0; l <= 100.0; l += 1.0) {
      EXPECT_NEAR(plancherel_density(d, l), plancherel_density(d, -l), 1e-12 * plancherel_density(d, l));
      const double ratio = plancherel_density(d, l) / std::pow(l, d.n() - 1);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    EXPECT_GT(lo, 0.0);
    EXPECT_LT(hi / lo, 2.0);
  }
}
