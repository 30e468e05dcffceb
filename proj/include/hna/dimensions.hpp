#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hna {

using cplx = std::complex<double>;

/// Failure of a numerical procedure (non-convergence, quadrature audit,
/// truncation tail too large, ...). Precondition violations use
/// std::invalid_argument instead.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Area of the unit sphere S^{d-1} in R^d. For d = 1 this is the counting
/// measure of S^0 = {-1, 1}.
inline double sphere_area(int d) {
  if (d < 1) throw std::invalid_argument("sphere_area: d must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

/// Dimension data (m = dim v, k = dim z) of a harmonic NA group.
///
/// The Jacobi / oscillatory layer only needs these numbers, so it accepts a
/// Dimensions value and does not require an explicit H-type realization.
struct Dimensions {
  int m = 2;
  int k = 1;

  [[nodiscard]] int n() const { return m + k + 1; }
  [[nodiscard]] double Q() const { return 0.5 * m + k; }
  [[nodiscard]] double alpha() const { return 0.5 * (m + k - 1); }
  [[nodiscard]] double beta() const { return 0.5 * (k - 1); }

  /// Normalizing constant of the Poisson kernel, 2^{k-1} pi^{-n/2} Gamma(n/2).
  [[nodiscard]] double poisson_constant() const {
    return std::pow(2.0, k - 1) * std::pow(std::numbers::pi, -0.5 * n()) * std::tgamma(0.5 * n());
  }

  /// Total surface measure of the geodesic sphere of radius r,
  /// omega_{n-1} 2^{m+k} sinh^{m+k}(r/2) cosh^k(r/2).
  [[nodiscard]] double sphere_volume(double r) const {
    return sphere_area(n()) * std::pow(2.0 * std::sinh(0.5 * r), m + k) *
           std::pow(std::cosh(0.5 * r), k);
  }

  void validate() const {
    if (m <= 0 || k <= 0 || m % 2 != 0)
      throw std::invalid_argument("Dimensions: need k >= 1 and m >= 2 even (got m=" +
                                  std::to_string(m) + ", k=" + std::to_string(k) + ")");
  }
};

}  // namespace hna
