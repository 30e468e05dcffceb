#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hna/nagroup.hpp"

using namespace hna;

namespace {

struct Sampler {
  std::mt19937_64 rng;
  explicit Sampler(std::uint64_t seed) : rng(seed) {}
  Vec vec(int n, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = g(rng);
    return v;
  }
  NAPoint point(const HTypeAlgebra& alg, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    return {vec(alg.m(), scale), vec(alg.k(), scale), g(rng)};
  }
  Vec direction(int n) {
    Vec v = vec(n);
    return v / v.norm();
  }
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
};

double point_gap(const NAPoint& p, const NAPoint& q) {
  return std::max({(p.X - q.X).cwiseAbs().maxCoeff(), (p.Z - q.Z).cwiseAbs().maxCoeff(), std::abs(p.t - q.t)});
}

double rel_gap(const NAPoint& p, const NAPoint& q) {
  const double s = 1.0 + std::max({p.X.cwiseAbs().maxCoeff(), p.Z.cwiseAbs().maxCoeff(), std::abs(p.t)});
  return point_gap(p, q) / s;
}

}  // namespace

TEST(NAGroup, IdentityAndNProduct) {
  const auto alg = build_htype(2, 1);
  Sampler s(1);
  const auto p = s.point(alg);
  const auto e = NAPoint::identity(alg);
  EXPECT_EQ(point_gap(multiply(alg, p, e), p), 0.0);
  EXPECT_EQ(point_gap(multiply(alg, e, p), p), 0.0);
  const Vec X = s.vec(4), Y = s.vec(4);
  const auto xy = multiply(alg, {X, Vec::Zero(2), 0.0}, {Y, Vec::Zero(2), 0.0});
  EXPECT_LT((xy.X - (X + Y)).norm(), 1e-15);
  EXPECT_LT((xy.Z - 0.5 * alg.bracket(X, Y)).norm(), 1e-15);
  EXPECT_EQ(xy.t, 0.0);
}

TEST(NAGroup, GroupAxiomsOnRandomTriples) {
  for (int k : {1, 2, 3}) {
    const auto alg = build_htype(k, 1);
    Sampler s(100 + k);
    double assoc = 0.0, inv = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const auto p = s.point(alg), q = s.point(alg), r = s.point(alg);
      assoc = std::max(assoc, rel_gap(multiply(alg, multiply(alg, p, q), r), multiply(alg, p, multiply(alg, q, r))));
      inv = std::max(inv, point_gap(multiply(alg, p, inverse(alg, p)), NAPoint::identity(alg)));
      inv = std::max(inv, point_gap(multiply(alg, inverse(alg, p), p), NAPoint::identity(alg)));
    }
    EXPECT_LT(assoc, 1e-12) << k;
    EXPECT_LT(inv, 1e-12) << k;
  }
}

TEST(NAGroup, InverseOfASubgroup) {
  const auto alg = build_htype(1, 1);
  const auto p = NAPoint::from_a(Vec::Zero(2), Vec::Zero(1), 3.0);
  EXPECT_NEAR(inverse(alg, p).a(), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(point_gap(inverse(alg, NAPoint::identity(alg)), NAPoint::identity(alg)), 0.0);
}

TEST(NAGroup, DistanceBasics) {
  const auto alg = build_htype(1, 1);
  EXPECT_EQ(distance_to_origin(alg, NAPoint::identity(alg)), 0.0);
  for (double t : {-2.0, -0.3, 1e-9, 0.7, 4.0})
    EXPECT_NEAR(distance_to_origin(alg, {Vec::Zero(2), Vec::Zero(1), t}), std::abs(t), 1e-14 * (1 + std::abs(t)));
}

TEST(NAGroup, DistanceSymmetryAndTriangle) {
  for (int k : {1, 3}) {
    const auto alg = build_htype(k, 1);
    Sampler s(7 + k);
    for (int i = 0; i < 500; ++i) {
      const auto p = s.point(alg), q = s.point(alg), r = s.point(alg);
      const double dpq = distance(alg, p, q);
      EXPECT_NEAR(dpq, distance(alg, q, p), 1e-10 * (1 + dpq));
      EXPECT_LE(distance(alg, p, r), dpq + distance(alg, q, r) + 1e-10);
      EXPECT_NEAR(distance(alg, p, p), 0.0, 1e-7);
      EXPECT_NEAR(distance(alg, NAPoint::identity(alg), q), distance_to_origin(alg, q), 1e-12);
    }
  }
}

TEST(NAGroup, DistanceIsLeftInvariant) {
  const auto alg = build_htype(2, 1);
  Sampler s(9);
  for (int i = 0; i < 200; ++i) {
    const auto g = s.point(alg), p = s.point(alg), q = s.point(alg);
    const double d = distance(alg, p, q);
    EXPECT_NEAR(distance(alg, multiply(alg, g, p), multiply(alg, g, q)), d, 1e-9 * (1 + d));
  }
}

TEST(NAGroup, CayleyExamples) {
  const auto alg = build_htype(1, 1);
  const auto o = cayley(alg, NAPoint::identity(alg));
  EXPECT_EQ(o.norm(), 0.0);
  for (double a : {0.2, 1.0, 3.0}) {
    const auto b = cayley(alg, NAPoint::from_a(Vec::Zero(2), Vec::Zero(1), a));
    EXPECT_EQ(b.Xp.norm(), 0.0);
    EXPECT_EQ(b.Zp.norm(), 0.0);
    EXPECT_NEAR(b.lp, (a - 1) / (a + 1), 1e-15);
  }
  for (double rho : {-0.9, 0.0, 0.5, 0.99}) {
    const auto p = cayley_inverse(alg, {Vec::Zero(2), Vec::Zero(1), rho});
    EXPECT_NEAR(p.a(), (1 + rho) / (1 - rho), 1e-12 * (1 + rho) / (1 - rho));
    EXPECT_EQ(p.X.norm(), 0.0);
  }
  EXPECT_THROW(cayley_inverse(alg, {Vec::Zero(2), Vec::Zero(1), 1.0}), std::invalid_argument);
}

TEST(NAGroup, BallRadiusIsTanhHalfDistance) {
  for (int k : {1, 2, 3}) {
    const auto alg = build_htype(k, 1);
    Sampler s(21 + k);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
      const auto p = s.point(alg);
      worst = std::max(worst, std::abs(cayley(alg, p).norm() - std::tanh(0.5 * distance_to_origin(alg, p))));
    }
    EXPECT_LT(worst, 1e-10) << k;
  }
}

TEST(NAGroup, CayleyRoundTrip) {
  for (int k : {1, 2, 3, 7}) {
    const auto alg = build_htype(k, 1);
    Sampler s(31 + k);
    double worst = 0.0, worst2 = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const Vec w = s.direction(alg.n());
      const double rho = s.uniform(0.0, 0.95);
      BallPoint b{rho * w.head(alg.m()), rho * w.segment(alg.m(), alg.k()), rho * w(alg.n() - 1)};
      const auto back = cayley(alg, cayley_inverse(alg, b));
      worst = std::max({worst, (back.Xp - b.Xp).cwiseAbs().maxCoeff(), (back.Zp - b.Zp).cwiseAbs().maxCoeff(),
                        std::abs(back.lp - b.lp)});
      const auto p = s.point(alg);
      worst2 = std::max(worst2, rel_gap(cayley_inverse(alg, cayley(alg, p)), p));
    }
    EXPECT_LT(worst, 1e-10) << k;
    EXPECT_LT(worst2, 1e-9) << k;
  }
}

TEST(NAGroup, GeodesicInversion) {
  const auto alg1 = build_htype(1, 1);
  const auto s_a = geodesic_inversion(alg1, NAPoint::from_a(Vec::Zero(2), Vec::Zero(1), 2.5));
  EXPECT_NEAR(s_a.a(), 0.4, 1e-15);
  for (int k : {1, 2, 3}) {
    const auto alg = build_htype(k, 1);
    Sampler s(41 + k);
    for (int i = 0; i < 500; ++i) {
      const auto p = s.point(alg);
      const auto sp = geodesic_inversion(alg, p);
      EXPECT_LT(rel_gap(geodesic_inversion(alg, sp), p), 1e-10);
      EXPECT_NEAR(distance_to_origin(alg, sp), distance_to_origin(alg, p), 1e-10);
    }
  }
}

TEST(NAGroup, GeodesicInversionIsAnIsometryInSymmetricCases) {
  // k = 1, 3, 7 on one copy of the minimal module give symmetric spaces; for
  // k = 2 the map only preserves distances to e.
  for (int k : {1, 3, 7}) {
    const auto alg = build_htype(k, 1);
    Sampler s(45 + k);
    for (int i = 0; i < 200; ++i) {
      const auto p = s.point(alg), q = s.point(alg);
      const double d = distance(alg, p, q);
      EXPECT_NEAR(distance(alg, geodesic_inversion(alg, p), geodesic_inversion(alg, q)), d, 1e-9 * (1 + d));
    }
  }
  const auto alg2 = build_htype(2, 1);
  Sampler s(49);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto p = s.point(alg2), q = s.point(alg2);
    worst = std::max(worst, std::abs(distance(alg2, geodesic_inversion(alg2, p), geodesic_inversion(alg2, q)) -
                                     distance(alg2, p, q)));
  }
  EXPECT_GT(worst, 1e-3);
}

TEST(NAGroup, LeftInvariantFieldExamples) {
  const auto alg = build_htype(3, 1);
  Sampler s(51);
  for (int i = 0; i < 20; ++i) {
    const auto p = s.point(alg, 0.7);
    auto log_a = [](const NAPoint& q) { return q.t; };
    EXPECT_NEAR(left_invariant_derivative(alg, log_a, p, {0}), 1.0, 1e-10);
    for (int c = 0; c < alg.k(); ++c) {
      auto Zc = [c](const NAPoint& q) { return q.Z(c); };
      EXPECT_NEAR(left_invariant_derivative(alg, Zc, p, {alg.m() + 1 + c}), p.a(), 1e-10 * (1 + p.a()));
    }
  }
}

TEST(NAGroup, CoordinateAndCurveRoutesAgree) {
  const auto alg = build_htype(2, 1);
  Sampler s(61);
  auto f = [](const NAPoint& q) {
    return std::sin(q.X(0) + 0.3 * q.X(3)) * std::cos(q.Z(1)) + q.Z(0) * q.X(2) + std::exp(0.5 * q.t);
  };
  for (int i = 0; i < 20; ++i) {
    const auto p = s.point(alg, 0.8);
    for (int j = 0; j < alg.n(); ++j) {
      const double a = left_invariant_derivative(alg, f, p, {j}, DerivativeRoute::coordinate);
      const double b = left_invariant_derivative(alg, f, p, {j}, DerivativeRoute::curve);
      EXPECT_NEAR(a, b, 1e-9 * (1 + std::abs(a))) << j;
    }
  }
}

TEST(NAGroup, FieldCommutators) {
  // [H, X_l] = X_l / 2, [H, Z_i] = Z_i, [e_l, e_j] = sum_i <J_i e_l, e_j> Z_i.
  const auto alg = build_htype(1, 1);
  Sampler s(71);
  auto f = [](const NAPoint& q) { return std::sin(q.X(0)) * q.X(1) + q.Z(0) * q.Z(0) + std::cos(q.t + q.X(1)); };
  for (int i = 0; i < 10; ++i) {
    const auto p = s.point(alg, 0.5);
    auto D = [&](std::vector<int> J) { return left_invariant_derivative(alg, f, p, J); };
    EXPECT_NEAR(D({0, 1}) - D({1, 0}), 0.5 * D({1}), 1e-6);
    EXPECT_NEAR(D({0, 3}) - D({3, 0}), D({3}), 1e-6);
    EXPECT_NEAR(D({1, 2}) - D({2, 1}), alg.bracket(Vec::Unit(2, 0), Vec::Unit(2, 1))(0) * D({3}), 1e-6);
  }
}

TEST(NAGroup, DerivativesOfCoshDistanceAreBounded) {
  const auto alg = build_htype(1, 1);
  Sampler s(81);
  auto cosh_r = [&](const NAPoint& q) { return std::cosh(distance_to_origin(alg, q)); };
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Vec w = s.direction(alg.n());
    const auto p = sphere_point(alg, s.uniform(0.1, 3.0), w);
    const double base = cosh_r(p);
    for (int j = 0; j < alg.n(); ++j) {
      worst = std::max(worst, std::abs(left_invariant_derivative(alg, cosh_r, p, {j})) / base);
      for (int l = 0; l < alg.n(); ++l)
        worst = std::max(worst, std::abs(left_invariant_derivative(alg, cosh_r, p, {j, l})) / base);
    }
  }
  // The ratio is bounded by a modest dimensional constant.
  EXPECT_LT(worst, 10.0);
}

TEST(NAGroup, DerivativeRejectsLongMultiIndex) {
  const auto alg = build_htype(1, 1);
  auto f = [](const NAPoint& q) { return q.t; };
  EXPECT_THROW(left_invariant_derivative(alg, f, NAPoint::identity(alg), {0, 0, 0, 0}), std::invalid_argument);
  EXPECT_THROW(left_invariant_derivative(alg, f, NAPoint::identity(alg), {9}), std::invalid_argument);
}

TEST(NAGroup, HaarWeight) {
  const auto alg = build_htype(1, 1);
  EXPECT_EQ(haar_weight(alg, NAPoint::identity(alg)), 1.0);
  EXPECT_NEAR(haar_weight(alg, {Vec::Zero(2), Vec::Zero(1), 1.0}), std::exp(-2.0), 1e-16);
}

TEST(NAGroup, HaarMeasureIsLeftInvariant) {
  // int f(q p) dp against e^{-Qt} dX dZ dt equals int f(p) dp for a bump f,
  // using a tensor Gauss rule on a box that contains both supports.
  const auto alg = build_htype(1, 1);
  const double R = 0.8;
  auto bump = [&](const NAPoint& p) {
    const double r = distance_to_origin(alg, p);
    return r < R ? std::pow(1.0 - r * r / (R * R), 6) : 0.0;
  };
  const NAPoint q{(Vec(2) << 0.3, -0.2).finished(), (Vec(1) << 0.15).finished(), 0.2};
  const auto qinv = inverse(alg, q);
  auto box_integral = [&](const NAPoint& centre, auto&& f) {
    const auto rx = panel_rule(-2.5, 2.5, 6, 12);
    const auto rz = panel_rule(-3.0, 3.0, 6, 12);
    const auto rt = panel_rule(centre.t - R, centre.t + R, 4, 12);
    double acc = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i)
      for (std::size_t j = 0; j < rx.size(); ++j)
        for (std::size_t l = 0; l < rz.size(); ++l)
          for (std::size_t c = 0; c < rt.size(); ++c) {
            NAPoint p{(Vec(2) << centre.X(0) + rx.x[i], centre.X(1) + rx.x[j]).finished(),
                      (Vec(1) << centre.Z(0) + rz.x[l]).finished(), rt.x[c]};
            acc += rx.w[i] * rx.w[j] * rz.w[l] * rt.w[c] * haar_weight(alg, p) * f(p);
          }
    return acc;
  };
  const double plain = box_integral(NAPoint::identity(alg), bump);
  const double shifted = box_integral(qinv, [&](const NAPoint& p) { return bump(multiply(alg, q, p)); });
  QuadratureSpec spec;
  const double slices = sphere_area(2) * sphere_area(1) *
                        integrate_ball_slices(
                            alg.dims(), R,
                            [&](double t, double r, double, double) {
                              return std::exp(-alg.Q() * t) * std::pow(1.0 - r * r / (R * R), 6);
                            },
                            SliceRule::from_spec(spec));
  EXPECT_NEAR(plain / slices, 1.0, 1e-4);
  EXPECT_NEAR(shifted / slices, 1.0, 1e-4);
}

TEST(NAGroup, BallEstimates) {
  const auto alg = build_htype(2, 1);
  Sampler s(91);
  for (double R : {0.5, 2.0, 4.0}) {
    const double cx = std::sqrt(8.0 * std::cosh(0.5 * R)), cz = 2.0 * std::cosh(0.5 * R);
    for (int i = 0; i < 500; ++i) {
      const auto p = sphere_point(alg, s.uniform(0.0, R), s.direction(alg.n()));
      EXPECT_GE(p.a(), std::exp(-R) * (1 - 1e-12));
      EXPECT_LE(p.a(), std::exp(R) * (1 + 1e-12));
      EXPECT_LE(p.X.norm(), cx * std::exp(0.5 * R));
      EXPECT_LE(p.Z.norm(), cz * std::exp(R));
    }
  }
}

TEST(NAGroup, SpherePointsHaveTheRightRadius) {
  const auto alg = build_htype(3, 1);
  Sampler s(95);
  for (int i = 0; i < 100; ++i) {
    const double r = s.uniform(0.01, 5.0);
    EXPECT_NEAR(distance_to_origin(alg, sphere_point(alg, r, s.direction(alg.n()))), r, 1e-10 * (1 + r));
  }
}

TEST(NAGroup, VolumeConsistency) {
  for (auto [m, k] : {std::pair{2, 1}, std::pair{4, 3}}) {
    const Dimensions d{m, k};
    for (double R : {0.5, 1.0, 2.0}) {
      const double polar = ball_volume_polar(d, R);
      EXPECT_NEAR(ball_volume_coordinates(d, R) / polar, 1.0, 1e-3) << m << "," << k << "," << R;
    }
  }
}

TEST(NAGroup, Radialization) {
  const auto alg = build_htype(1, 1);
  const auto rule = SphereRule::product(alg.n(), 24);
  auto radial = [&](const NAPoint& p) { return std::cos(distance_to_origin(alg, p)); };
  auto general = [](const NAPoint& p) { return p.X(0) + p.Z(0) * p.Z(0) + std::sin(p.t) + p.X(1) * p.t; };
  Sampler s(101);
  for (int i = 0; i < 5; ++i) {
    const double r = s.uniform(0.2, 2.0);
    const auto p = sphere_point(alg, r, s.direction(alg.n()));
    const auto q = sphere_point(alg, r, s.direction(alg.n()));
    EXPECT_NEAR(radialize(alg, radial, p, rule), radial(p), 1e-12);
    const double Rp = radialize(alg, general, p, rule);
    EXPECT_NEAR(Rp, radialize(alg, general, q, rule), 1e-6);
    auto Rf = [&](const NAPoint& x) { return radialize(alg, general, x, rule); };
    EXPECT_NEAR(radialize(alg, Rf, p, SphereRule::product(alg.n(), 6)), Rp, 1e-6);
  }
}

TEST(NAGroup, VRadialProjector) {
  const auto alg = build_htype(2, 1);
  const auto rule = SphereRule::product(alg.m(), 12);
  auto radial_in_X = [](const NAPoint& p) { return std::exp(-p.X.squaredNorm()) * p.Z(0) + p.t; };
  auto odd = [](const NAPoint& p) { return p.X(0); };
  auto general = [](const NAPoint& p) { return p.X(0) * p.X(0) * p.X(1) + std::cos(p.X(2)) + p.Z(1); };
  Sampler s(111);
  for (int i = 0; i < 5; ++i) {
    const auto p = s.point(alg);
    EXPECT_NEAR(v_radial_project(alg, radial_in_X, p, rule), radial_in_X(p), 1e-12);
    EXPECT_NEAR(v_radial_project(alg, odd, p, rule), 0.0, 1e-12);
    auto pf = [&](const NAPoint& x) { return v_radial_project(alg, general, x, rule); };
    EXPECT_NEAR(v_radial_project(alg, pf, p, rule), pf(p), 1e-8);
  }
}

TEST(NAGroup, PointJson) {
  const auto alg = build_htype(1, 1);
  const NAPoint p{(Vec(2) << 1.5, -2.0).finished(), (Vec(1) << 0.25).finished(), -0.75};
  const auto j = point_to_json(p);
  EXPECT_EQ(j.dump(), "[1.5,-2.0,0.25,-0.75]");
  EXPECT_EQ(point_gap(point_from_json(alg, j), p), 0.0);
  EXPECT_THROW(point_from_json(alg, nlohmann::json::array({1.0, 2.0})), std::invalid_argument);
}
