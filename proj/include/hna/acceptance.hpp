#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include "deconvolve.hpp"
#include "slowdecrease.hpp"

namespace hna {

/// Outcome of one acceptance criterion. `measured` is compared against `tolerance`
/// in the direction stated by the criterion; `detail` carries the per-case numbers.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

inline void to_json(nlohmann::json& j, const CriterionResult& r) {
  j = {{"id", r.id},           {"name", r.name},           {"status", r.pass ? "pass" : "fail"},
       {"measured", r.measured}, {"tolerance", r.tolerance}, {"detail", r.detail}};
}

/// Algebra and quadrature used by the checks that depend on them.
struct AcceptanceConfig {
  int k = 1;
  int b = 1;
  QuadratureSpec spec;
};

namespace acceptance {

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  Vec vec(int n, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = g(gen);
    return v;
  }
  NAPoint point(const HTypeAlgebra& alg, double scale = 1.0) {
    const Vec X = vec(alg.m(), scale), Z = vec(alg.k(), scale);
    return {X, Z, std::normal_distribution<double>(0.0, scale)(gen)};
  }
};

inline double point_gap(const NAPoint& p, const NAPoint& q) {
  return std::max({(p.X - q.X).cwiseAbs().maxCoeff(), (p.Z - q.Z).cwiseAbs().maxCoeff(), std::abs(p.t - q.t)});
}

inline double point_scale(const NAPoint& p) {
  return 1.0 + std::max({p.X.cwiseAbs().maxCoeff(), p.Z.cwiseAbs().maxCoeff(), std::abs(p.t)});
}

inline CriterionResult htype_identity(const AcceptanceConfig& cfg) {
  CriterionResult r{1, "H-type identity J_Z^2 = -|Z|^2 I", false, 0.0, 1e-12, ""};
  Rng rng(cfg.spec.seed);
  for (int k : {1, 2, 3}) {
    const auto alg = build_htype(k, 1);
    const Mat I = Mat::Identity(alg.m(), alg.m());
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const Vec Z = rng.vec(k);
      const Mat J = alg.JZ(Z);
      const Mat E = J * J + Z.squaredNorm() * I;
      worst = std::max(worst, E.operatorNorm());
    }
    r.measured = std::max(r.measured, worst);
    r.detail += "k=" + std::to_string(k) + ":" + fmt(worst) + " ";
  }
  r.pass = r.measured < r.tolerance;
  return r;
}

inline CriterionResult group_axioms(const AcceptanceConfig& cfg) {
  CriterionResult r{2, "group axioms on random triples", false, 0.0, 1e-12, ""};
  Rng rng(cfg.spec.seed + 1);
  for (int k : {1, 2, 3}) {
    const auto alg = build_htype(k, 1);
    const NAPoint e = NAPoint::identity(alg);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const auto p = rng.point(alg), q = rng.point(alg), s = rng.point(alg);
      const auto lhs = multiply(alg, multiply(alg, p, q), s), rhs = multiply(alg, p, multiply(alg, q, s));
      worst = std::max(worst, point_gap(lhs, rhs) / point_scale(lhs));
      worst = std::max({worst, point_gap(multiply(alg, e, p), p), point_gap(multiply(alg, p, e), p)});
      worst = std::max({worst, point_gap(multiply(alg, p, inverse(alg, p)), e), point_gap(multiply(alg, inverse(alg, p), p), e)});
    }
    r.measured = std::max(r.measured, worst);
    r.detail += "k=" + std::to_string(k) + ":" + fmt(worst) + " ";
  }
  r.pass = r.measured < r.tolerance;
  return r;
}

inline CriterionResult metric_consistency(const AcceptanceConfig& cfg) {
  CriterionResult r{3, "ball radius tanh(d/2) and Cayley round trip", false, 0.0, 1e-10, ""};
  Rng rng(cfg.spec.seed + 2);
  for (int k : {1, 2, 3}) {
    const auto alg = build_htype(k, 1);
    double radius = 0.0, trip = 0.0;
    for (int i = 0; i < 500; ++i) {
      const auto p = rng.point(alg);
      const auto c = cayley(alg, p);
      const double rho = std::sqrt(c.Xp.squaredNorm() + c.Zp.squaredNorm() + c.lp * c.lp);
      radius = std::max(radius, std::abs(rho - std::tanh(0.5 * distance_to_origin(alg, p))));
      const auto back = cayley_inverse(alg, c);
      trip = std::max(trip, point_gap(back, p) / point_scale(p));
      const auto again = cayley(alg, back);
      trip = std::max({trip, (again.Xp - c.Xp).cwiseAbs().maxCoeff(), (again.Zp - c.Zp).cwiseAbs().maxCoeff(),
                       std::abs(again.lp - c.lp)});
    }
    r.measured = std::max({r.measured, radius, trip});
    r.detail += "k=" + std::to_string(k) + ": radius " + fmt(radius) + " round trip " + fmt(trip) + " ";
  }
  r.pass = r.measured < r.tolerance;
  return r;
}

inline CriterionResult poisson_normalization(const AcceptanceConfig& cfg) {
  CriterionResult r{4, "Poisson kernel integrates to one over N", false, 0.0, 1e-6, ""};
  const auto alg = build_htype(cfg.k, cfg.b);
  for (double a : {0.5, 1.0, 2.0}) {
    const double err = std::abs(poisson_integral(alg.dims(), a, cfg.spec).value - 1.0);
    r.measured = std::max(r.measured, err);
    r.detail += "a=" + fmt(a) + ":" + fmt(err) + " ";
  }
  r.pass = r.measured < r.tolerance;
  return r;
}

inline CriterionResult spherical_routes(const AcceptanceConfig& cfg) {
  CriterionResult r{5, "spherical function: series, integral and Koornwinder routes", false, 0.0, 1e-6, ""};
  const auto alg = build_htype(cfg.k, cfg.b);
  const auto p = JacobiParams::from(alg.dims());
  double worst_int = 0.0, worst_koo = 0.0;
  for (double re : {0.0, 1.0, 5.0, 10.0})
    for (double im : {0.0, 0.5, -0.5})
      for (double rr : {0.5, 1.0, 2.0}) {
        const cplx l(re, im);
        const cplx jac = jacobi_phi(p, 2.0 * l, 0.5 * rr);
        const NAPoint y{Vec::Zero(alg.m()), Vec::Zero(alg.k()), rr};
        worst_int = std::max(worst_int, std::abs(jac - spherical_phi_integral(alg, l, y, cfg.spec)));
        worst_koo = std::max(worst_koo, std::abs(jac - koornwinder_phi(alg, l, rr, cfg.spec)));
      }
  r.measured = std::max(worst_int, worst_koo);
  r.detail = "|jacobi-integral| " + fmt(worst_int) + " |jacobi-koornwinder| " + fmt(worst_koo);
  r.pass = r.measured < r.tolerance;
  return r;
}

inline CriterionResult eigen_ode(const AcceptanceConfig& cfg) {
  CriterionResult r{6, "spherical functions solve the radial eigen-equation", false, 0.0, 1e-7, ""};
  const auto alg = build_htype(cfg.k, cfg.b);
  const auto grid = linear_grid(0.1, 3.0, 59);
  for (double l : {0.5, 1.0, 3.0}) {
    const double res = eigen_ode_residual(alg.dims(), l, grid);
    r.measured = std::max(r.measured, res);
    r.detail += "lambda=" + fmt(l) + ":" + fmt(res) + " ";
  }
  r.pass = r.measured < r.tolerance;
  return r;
}

inline CriterionResult projection_slice(const AcceptanceConfig& cfg) {
  CriterionResult r{7, "Fourier transform of the Abel transform equals the spherical transform", false, 0.0, 1e-5, ""};
  const Dimensions d = build_htype(cfg.k, cfg.b).dims();
  const auto grid = linear_grid(0.0, 20.0, 41);
  const std::vector<cplx> lams(grid.begin(), grid.end());
  for (double R : {0.5, 1.0, 2.0}) {
    const auto f = RadialFunction::bump(R);
    const auto sph = spherical_transform_radial(d, f, lams, cfg.spec);
    const auto ft = abel_fourier(d, f, lams, cfg.spec);
    double worst = 0.0;
    for (std::size_t i = 0; i < lams.size(); ++i) worst = std::max(worst, std::abs(sph[i] - ft[i]));
    r.measured = std::max(r.measured, worst);
    r.detail += "R=" + fmt(R) + ":" + fmt(worst) + " ";
  }
  r.pass = r.measured < r.tolerance;
  return r;
}

/// sup over the grid |Re| <= 20, |Im| <= 2 (by symmetry Re, Im >= 0) of
/// |f~(lambda)| e^{-R |Im lambda|} (1 + |lambda|)^j for j = 0..4.
inline std::vector<double> paley_wiener_sups(Dimensions d, const RadialFunction& f, double h, const QuadratureSpec& spec) {
  const int nre = static_cast<int>(std::lround(20.0 / h)) + 1, nim = static_cast<int>(std::lround(2.0 / h)) + 1;
  std::vector<cplx> lams;
  for (int i = 0; i < nre; ++i)
    for (int j = 0; j < nim; ++j) lams.emplace_back(i * h, j * h);
  const auto ft = spherical_transform_radial(d, f, lams, spec);
  std::vector<double> sups(5, 0.0);
  for (std::size_t i = 0; i < lams.size(); ++i)
    for (int j = 0; j <= 4; ++j) {
      const double v = std::abs(ft[i]) * std::exp(-f.support_radius * std::abs(lams[i].imag())) * std::pow(1.0 + std::abs(lams[i]), j);
      if (!std::isfinite(v)) throw numerical_error("paley_wiener_sups: non-finite value");
      sups[static_cast<std::size_t>(j)] = std::max(sups[static_cast<std::size_t>(j)], v);
    }
  return sups;
}

inline CriterionResult paley_wiener(const AcceptanceConfig& cfg) {
  CriterionResult r{8, "exponential-type bound stable under grid refinement", false, 0.0, 0.05, ""};
  const Dimensions d = build_htype(cfg.k, cfg.b).dims();
  const auto f = RadialFunction::bump(1.0);
  const auto coarse = paley_wiener_sups(d, f, 0.5, cfg.spec);
  const auto fine = paley_wiener_sups(d, f, 0.25, cfg.spec);
  bool finite = true;
  for (int j = 0; j <= 4; ++j) {
    const double ratio = fine[static_cast<std::size_t>(j)] / coarse[static_cast<std::size_t>(j)];
    finite = finite && std::isfinite(fine[static_cast<std::size_t>(j)]);
    r.measured = std::max(r.measured, std::abs(ratio - 1.0));
    r.detail += "j=" + std::to_string(j) + ": sup " + fmt(fine[static_cast<std::size_t>(j)]) + " ratio " + fmt(ratio) + " ";
  }
  r.pass = finite && r.measured < r.tolerance;
  return r;
}

inline CriterionResult oscillatory_layer(const AcceptanceConfig& cfg) {
  CriterionResult r{9, "Bessel layer: closed forms, remainder exponent -(nu+3/2), a_0", false, 0.0, 0.2, ""};
  double closed = 0.0;
  for (int nu = 0; nu <= 6; ++nu)
    for (double l : {0.0, 0.5, 3.0, 37.0, 150.0})
      for (double t : {0.5, 1.0, 2.0}) closed = std::max(closed, std::abs(I_nu_exact(l, t, nu) - I_nu_quadrature(l, t, nu, cfg.spec)));
  double a0 = 0.0;
  for (int nu : {1, 2, 3, 5}) {
    const auto rep = taylor_split_check(1.0, nu);
    a0 = std::max(a0, std::abs(rep.a0_fitted - rep.a0_expected));
  }
  const auto grid = linear_grid(50.0, 400.0, 3501);
  double slope_gap = 0.0;
  std::string slopes;
  for (int nu : {2, 3, 5}) {
    const auto rep = oscillatory_report(nu, 1.0, grid, cfg.spec);
    std::vector<double> stated;
    for (std::size_t i = 0; i < grid.size(); ++i) stated.push_back(rep.series[i] - I_tilde_leading_stated(grid[i], 1.0, nu));
    const double s_stated = envelope_slope(grid, stated, 1.0);
    slope_gap = std::max(slope_gap, std::abs(rep.slope + (nu + 1.5)));
    slopes += "nu=" + std::to_string(nu) + ": slope " + fmt(rep.slope) + " (with (nu+1)! constant " + fmt(s_stated) +
              ") target " + fmt(-(nu + 1.5)) + "; ";
  }
  r.measured = slope_gap;
  r.detail = "closed form " + fmt(closed) + " (tol 1e-10); a_0 " + fmt(a0) + " (tol 1e-8); " + slopes;
  r.pass = closed < 1e-10 && a0 < 1e-8 && slope_gap <= r.tolerance;
  return r;
}

inline CriterionResult slow_decrease(const AcceptanceConfig& cfg) {
  CriterionResult r{10, "slow decrease of Phi_k (k=4, t=1) and of phi_lambda(1)", false, 0.0, 0.0, ""};
  const auto rep = phi_k_slow_decrease_report(Dimensions{2, 4}, 1.0);
  const auto alg = build_htype(cfg.k, cfg.b);
  const auto F = spherical_phi_function(alg.dims(), 1.0, 200.0 + 4.0 * std::log(202.0) + 1.0);
  const auto w = find_witness(F, 0.0, 200.0);
  r.measured = rep.status.margin;
  r.detail = "xi0 " + fmt(rep.xi0) + ", witness A " + fmt(rep.witness.A) + " B " + fmt(rep.witness.B) + " D " +
             fmt(rep.witness.D) + ", worst xi " + fmt(rep.status.worst_xi) + ", sharp chain " +
             (rep.sharp_chain ? "holds" : "fails") + ", lemma-type chain " + (rep.strict_chain ? "holds" : "fails") +
             (std::isnan(rep.strict_chain_first_positive) ? std::string()
                                                          : " (positive from xi " + fmt(rep.strict_chain_first_positive) + ")") +
             "; found witness for phi_lambda(1): ";
  if (w) r.detail += "A " + fmt(w->A) + " B " + fmt(w->B) + " C " + fmt(w->C) + " D " + fmt(w->D);
  else r.detail += "none";
  r.pass = rep.pass && w.has_value();
  return r;
}

inline CriterionResult deconvolution(const AcceptanceConfig& cfg) {
  CriterionResult r{11, "deconvolution residual |M_t f - g| / |g| for t=1, bump R=1", false, 0.0, 1e-2, ""};
  const auto alg = build_htype(cfg.k, cfg.b);
  QuadratureSpec sspec = cfg.spec;
  sspec.sphere_nodes = std::min(cfg.spec.sphere_nodes, 20000);
  const auto sphere = SphereRule::for_spec(alg.n(), sspec);
  const auto g = mean_value_target(alg, RadialFunction::bump(1.0), 1.0, sphere);
  const auto res = solve(alg, DeconvolutionProblem::make(alg.dims(), g, 1.0), sphere, cfg.spec);
  r.measured = res.residual_rel;
  r.detail = "lambda nodes " + std::to_string(res.lambda_nodes) + ", zeros " + std::to_string(res.zeros) +
             ", min |phi| " + fmt(res.min_phi);
  r.pass = r.measured < r.tolerance;
  return r;
}

inline CriterionResult mean_value_property(const AcceptanceConfig& cfg) {
  CriterionResult r{12, "M_t phi_lambda = phi_lambda(t) phi_lambda on random points", false, 0.0, 1e-4, ""};
  const auto alg = build_htype(cfg.k, cfg.b);
  QuadratureSpec sspec = cfg.spec;
  sspec.sphere_nodes = std::max(cfg.spec.sphere_nodes, 20000);
  const auto sphere = SphereRule::for_spec(alg.n(), sspec);
  Rng rng(cfg.spec.seed + 12);
  const double t = 1.0, l = 1.5;
  const double phit = spherical_phi(alg, l, t).real();
  auto phi = [&](const NAPoint& y) { return spherical_phi(alg, l, distance_to_origin(alg, y)).real(); };
  for (int i = 0; i < 20; ++i) {
    const NAPoint x = rng.point(alg, 0.6);
    r.measured = std::max(r.measured, std::abs(mean_value(alg, phi, x, t, sphere) - phit * phi(x)));
  }
  r.detail = "lambda 1.5, t 1, " + std::to_string(sphere.size()) + " sphere nodes";
  r.pass = r.measured < r.tolerance;
  return r;
}

}  // namespace acceptance

inline constexpr int kAcceptanceCriteria = 12;

inline CriterionResult run_criterion(int id, const AcceptanceConfig& cfg = {}) {
  using namespace acceptance;
  static const std::vector<std::function<CriterionResult(const AcceptanceConfig&)>> table{
      htype_identity,   group_axioms, metric_consistency, poisson_normalization, spherical_routes, eigen_ode,
      projection_slice, paley_wiener, oscillatory_layer,  slow_decrease,         deconvolution,    mean_value_property};
  if (id < 1 || id > kAcceptanceCriteria) throw std::invalid_argument("run_criterion: id must be in 1..12");
  try {
    return table[static_cast<std::size_t>(id - 1)](cfg);
  } catch (const std::exception& e) {
    CriterionResult r;
    r.id = id;
    r.name = "criterion " + std::to_string(id);
    r.detail = std::string("error: ") + e.what();
    return r;
  }
}

inline std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& cfg = {}) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kAcceptanceCriteria; ++id) out.push_back(run_criterion(id, cfg));
  return out;
}

/// "PASS 01 name: measured=... tolerance=... | detail"
inline std::string format_line(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.pass ? "PASS " : "FAIL ") << (r.id < 10 ? "0" : "") << r.id << ' ' << r.name << ": measured=" << acceptance::fmt(r.measured)
     << " tolerance=" << acceptance::fmt(r.tolerance) << " | " << r.detail;
  return os.str();
}

}  // namespace hna
