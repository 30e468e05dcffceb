#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "meanvalue.hpp"

namespace hna {

using EntireFunction = std::function<cplx(cplx)>;

/// Constants of a slow-decrease witness:
/// sup{|F(z)| : |z - xi| <= A log(2 + |xi|)} >= B (C + |xi|)^{-D} for xi in [xi_min, xi_max].
struct SlowDecreaseWitness {
  double A = 1.0;
  double B = 1.0;
  double C = 1.0;
  double D = 0.0;
  double xi_min = 0.0;
  double xi_max = 200.0;
  int xi_points = 200;
  int disc_samples = 256;

  void validate() const {
    if (!(A > 0.0) || !(B > 0.0) || !(C > 0.0) || !(D >= 0.0))
      throw std::invalid_argument("SlowDecreaseWitness: need A, B, C > 0 and D >= 0");
    if (!(xi_min >= 0.0) || !(xi_max > xi_min)) throw std::invalid_argument("SlowDecreaseWitness: need 0 <= xi_min < xi_max");
    if (xi_points < 200) throw std::invalid_argument("SlowDecreaseWitness: at least 200 xi points");
    if (disc_samples < 8) throw std::invalid_argument("SlowDecreaseWitness: at least 8 disc samples");
  }

  [[nodiscard]] std::vector<double> xi_grid() const { return linear_grid(xi_min, xi_max, xi_points); }
  [[nodiscard]] double radius(double xi) const { return A * std::log(2.0 + std::abs(xi)); }
  [[nodiscard]] double bound(double xi) const { return B * std::pow(C + std::abs(xi), -D); }
};

inline void to_json(nlohmann::json& j, const SlowDecreaseWitness& w) {
  j = {{"A", w.A},           {"B", w.B},           {"C", w.C},
       {"D", w.D},           {"xi_min", w.xi_min}, {"xi_max", w.xi_max},
       {"xi_points", w.xi_points}, {"disc_samples", w.disc_samples}};
}

/// Outcome of a slow-decrease check on a xi range.
struct SlowDecreaseStatus {
  bool pass = false;
  double worst_xi = 0.0;
  double margin = std::numeric_limits<double>::infinity();  ///< min over xi of log(sup) - log(bound)
  std::size_t xi_checked = 0;
  std::string sampling = "boundary circle and real chord";
};

inline void to_json(nlohmann::json& j, const SlowDecreaseStatus& s) {
  j = {{"status", s.pass ? "pass" : "fail"}, {"worst_xi", s.worst_xi}, {"margin", s.margin},
       {"xi_checked", s.xi_checked},         {"sampling", s.sampling}};
}

/// Estimate of sup |F| over the disc of radius rho around xi: half of the
/// samples on the boundary circle, half on the real chord [xi - rho, xi + rho].
inline double disc_sup(const EntireFunction& F, double xi, double rho, int samples) {
  const int circle = samples / 2, chord = samples - circle;
  double best = 0.0;
  auto visit = [&](cplx z) {
    const double v = std::abs(F(z));
    if (!std::isfinite(v)) throw numerical_error("disc_sup: non-finite function value");
    best = std::max(best, v);
  };
  for (int i = 0; i < circle; ++i) visit(cplx(xi, 0.0) + std::polar(rho, 2.0 * std::numbers::pi * (i + 0.5) / circle));
  for (int i = 0; i < chord; ++i) visit(cplx(xi - rho + 2.0 * rho * i / std::max(1, chord - 1), 0.0));
  return best;
}

/// Disc suprema for a given A on the witness grid.
inline std::vector<double> disc_sups(const EntireFunction& F, const SlowDecreaseWitness& w) {
  std::vector<double> out;
  for (double xi : w.xi_grid()) out.push_back(disc_sup(F, xi, w.radius(xi), w.disc_samples));
  return out;
}

inline SlowDecreaseStatus evaluate_witness(const SlowDecreaseWitness& w, const std::vector<double>& sups) {
  const auto grid = w.xi_grid();
  if (sups.size() != grid.size()) throw std::invalid_argument("evaluate_witness: sups do not match the grid");
  SlowDecreaseStatus s;
  s.pass = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double margin = (sups[i] > 0.0 ? std::log(sups[i]) : -std::numeric_limits<double>::infinity()) -
                          std::log(w.bound(grid[i]));
    if (margin < s.margin) {
      s.margin = margin;
      s.worst_xi = grid[i];
    }
    if (margin < 0.0) s.pass = false;
  }
  s.xi_checked = grid.size();
  return s;
}

/// Sampled check of the slow-decrease inequality for every xi on the witness grid.
inline SlowDecreaseStatus check_slow_decrease(const EntireFunction& F, const SlowDecreaseWitness& w) {
  w.validate();
  return evaluate_witness(w, disc_sups(F, w));
}

/// Candidate constants for find_witness.
struct WitnessSearchGrid {
  std::vector<double> A{0.1, 0.25, 0.5, 1.0, 2.0, 4.0};
  std::vector<double> B{1.0, 0.3, 0.1, 0.03, 0.01, 3e-3, 1e-3, 1e-4};
  std::vector<double> C{1.0, 2.0, 5.0};
  std::vector<double> D{0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0};
};

/// First passing witness in the order A ascending, B descending, C ascending,
/// D ascending (as listed in the grid), or none. Disc suprema are computed once per A.
inline std::optional<SlowDecreaseWitness> find_witness(const EntireFunction& F, double xi_min, double xi_max,
                                                       const WitnessSearchGrid& grid = {}, int xi_points = 200,
                                                       int disc_samples = 256) {
  for (double A : grid.A) {
    SlowDecreaseWitness w;
    w.A = A;
    w.xi_min = xi_min;
    w.xi_max = xi_max;
    w.xi_points = xi_points;
    w.disc_samples = disc_samples;
    w.validate();
    const auto sups = disc_sups(F, w);
    for (double B : grid.B)
      for (double C : grid.C)
        for (double D : grid.D) {
          w.B = B;
          w.C = C;
          w.D = D;
          if (evaluate_witness(w, sups).pass) return w;
        }
  }
  return std::nullopt;
}

/// Gauss nodes per panel of the cosine kernels below; the panels already resolve
/// a tenth of a period each, so a short rule keeps full accuracy.
inline constexpr int kEntireKernelNodes = 8;

/// lambda -> Phi_k(lambda; t) as an entire function, with one cosine kernel
/// shared by all evaluations (resolved for |lambda| <= lambda_max).
inline EntireFunction phi_k_function(Dimensions d, double t, double lambda_max) {
  auto K = std::make_shared<KoornwinderKernel>(d, t, lambda_max, kEntireKernelNodes);
  return [K](cplx l) { return K->transform(l); };
}

/// lambda -> phi_lambda(r) as an entire function through the Koornwinder route.
inline EntireFunction spherical_phi_function(Dimensions d, double r, double lambda_max) {
  auto K = std::make_shared<KoornwinderKernel>(d, 0.5 * r, 2.0 * lambda_max, kEntireKernelNodes);
  const double pre = K->prefactor();
  return [K, pre](cplx l) { return K->transform(2.0 * l) / pre; };
}

/// Phi_k for even k >= 4 through the Taylor-split Bessel series of each I~_{N+l}
/// (full relative accuracy at large real lambda).
inline double phi_k_polynomial_series(Dimensions d, double lambda, double t) {
  if (d.k < 4 || d.k % 2 != 0) throw std::invalid_argument("phi_k_polynomial_series: k must be even and >= 4");
  const int M = d.k / 2 - 1;
  const int N = (d.n() - 3) / 2;
  double acc = 0.0;
  for (int l = 0; l <= M; ++l)
    acc += std::pow(2.0, -l) * polynomial_coefficient(l, M, N) * std::pow(std::cosh(t), -l) * I_tilde_nu_series(lambda, t, N + l);
  return acc;
}

/// Disc constant (N+1)! (sinh t)^N of the witness for Phi_k.
inline double phi_k_witness_constant(int N, double t) { return std::tgamma(N + 2.0) * std::pow(std::sinh(t), N); }

/// Numerical realization of the lower-bound argument for Phi_k, k even >= 4.
struct PhiKSlowDecreaseReport {
  int N = 0;
  double t = 0.0;
  double xi0 = 0.0;              ///< first grid xi with A log(2+xi) <= xi/2 and t |V_xi| > 2 pi
  double xi_max = 0.0;
  SlowDecreaseWitness witness;   ///< A = (N+1)! (sinh t)^N, B = A / 2^{N+2}, C = 1, D = N+1
  SlowDecreaseStatus status;     ///< sampled check of the witness on [xi0, xi_max]
  double leading_constant = 0.0; ///< A_lead = N! (sinh t)^N
  double remainder_constant = 0.0;  ///< sup |r_N(lambda)| lambda^{N+3/2} on [xi0/2, 2 xi_max]
  bool lambda0_found = false;    ///< every V_xi contains lambda0 with sin(lambda0 t - N pi/2) >= 0.99
  bool strict_chain = false;     ///< A (2xi)^{-N-1} - C_r (xi/2+1)^{-N-3/2} > 0 on the whole range
  double strict_chain_first_positive = std::numeric_limits<double>::quiet_NaN();
  bool sharp_chain = false;      ///< |Phi_k(lambda0)| >= B (1+xi)^{-N-1} with the actual remainder
  bool pass = false;
};

inline PhiKSlowDecreaseReport phi_k_slow_decrease_report(Dimensions d, double t, double xi_max = 200.0,
                                                         int xi_points = 200, int disc_samples = 256) {
  if (d.k < 4 || d.k % 2 != 0) throw std::invalid_argument("phi_k_slow_decrease_report: k must be even and >= 4");
  if (!(t > 0.0)) throw std::invalid_argument("phi_k_slow_decrease_report: t must be positive");
  PhiKSlowDecreaseReport rep;
  const int N = (d.n() - 3) / 2;
  rep.N = N;
  rep.t = t;
  rep.xi_max = xi_max;
  const double A = phi_k_witness_constant(N, t);
  rep.leading_constant = std::tgamma(N + 1.0) * std::pow(std::sinh(t), N);
  auto radius = [&](double xi) { return A * std::log(2.0 + xi); };
  // xi0 from the conditions of the argument.
  bool found = false;
  for (double xi = 1.0; xi <= xi_max; xi += 0.5)
    if (radius(xi) <= 0.5 * xi && 2.0 * radius(xi) * t > 2.0 * std::numbers::pi) {
      rep.xi0 = xi;
      found = true;
      break;
    }
  if (!found) throw numerical_error("phi_k_slow_decrease_report: xi0 not found in range");

  rep.witness.A = A;
  rep.witness.B = A / std::pow(2.0, N + 2);
  rep.witness.C = 1.0;
  rep.witness.D = N + 1.0;
  rep.witness.xi_min = rep.xi0;
  rep.witness.xi_max = xi_max;
  rep.witness.xi_points = xi_points;
  rep.witness.disc_samples = disc_samples;
  const auto F = phi_k_function(d, t, xi_max + radius(xi_max) + 1.0);
  rep.status = check_slow_decrease(F, rep.witness);

  // Remainder r_N = Phi_k - leading term on the real line.
  auto lead = [&](double l) { return rep.leading_constant * std::pow(l, -N - 1.0) * std::sin(l * t - 0.5 * N * std::numbers::pi); };
  const auto lam = linear_grid(0.5 * rep.xi0, 2.0 * xi_max, 4000);
  for (double l : lam)
    rep.remainder_constant = std::max(rep.remainder_constant,
                                      std::abs(phi_k_polynomial_series(d, l, t) - lead(l)) * std::pow(l, N + 1.5));

  rep.lambda0_found = true;
  rep.strict_chain = true;
  rep.sharp_chain = true;
  const double phase = 0.5 * N * std::numbers::pi;
  for (double xi : rep.witness.xi_grid()) {
    // lambda0 in V_xi = [xi - rho, xi + rho] closest to xi with sin(lambda0 t - N pi/2) = 1.
    const double rho = radius(xi);
    const double period = 2.0 * std::numbers::pi / t;
    const double base = (0.5 * std::numbers::pi + phase) / t;
    const double l0 = base + period * std::round((xi - base) / period);
    if (std::abs(l0 - xi) > rho || std::sin(l0 * t - phase) < 0.99) {
      rep.lambda0_found = false;
      continue;
    }
    const double strict = A * std::pow(2.0 * xi, -N - 1.0) - rep.remainder_constant * std::pow(0.5 * xi + 1.0, -N - 1.5);
    if (strict <= 0.0) rep.strict_chain = false;
    else if (std::isnan(rep.strict_chain_first_positive)) rep.strict_chain_first_positive = xi;
    if (std::abs(phi_k_polynomial_series(d, l0, t)) < rep.witness.bound(xi)) rep.sharp_chain = false;
  }
  if (!rep.strict_chain && std::isnan(rep.strict_chain_first_positive)) {
    // Locate where the lemma-type chain would turn positive, beyond the checked range.
    for (double xi = xi_max; xi < 1e9; xi *= 1.05)
      if (A * std::pow(2.0 * xi, -N - 1.0) > rep.remainder_constant * std::pow(0.5 * xi + 1.0, -N - 1.5)) {
        rep.strict_chain_first_positive = xi;
        break;
      }
  }
  rep.pass = rep.status.pass && rep.lambda0_found && rep.sharp_chain;
  return rep;
}

inline void to_json(nlohmann::json& j, const PhiKSlowDecreaseReport& r) {
  j = {{"N", r.N},
       {"t", r.t},
       {"xi0", r.xi0},
       {"xi_max", r.xi_max},
       {"witness", r.witness},
       {"check", r.status},
       {"leading_constant", r.leading_constant},
       {"remainder_constant", r.remainder_constant},
       {"lambda0_found", r.lambda0_found},
       {"strict_chain", r.strict_chain},
       {"strict_chain_first_positive", std::isnan(r.strict_chain_first_positive) ? nlohmann::json(nullptr)
                                                                                  : nlohmann::json(r.strict_chain_first_positive)},
       {"sharp_chain", r.sharp_chain},
       {"status", r.pass ? "pass" : "fail"}};
}

}  // namespace hna
