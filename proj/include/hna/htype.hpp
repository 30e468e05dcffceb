#pragma once

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "dimensions.hpp"

namespace hna {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Smallest v-dimension allowed for a given center dimension k, from the
/// Clifford-module periodicity: k = 8a + j (1 <= j <= 8) needs m divisible by
/// 2^{e_j + 4a} with e = (1,2,2,3,3,3,3,4).
inline int minimal_v_dimension(int k) {
  if (k < 1) throw std::invalid_argument("minimal_v_dimension: k must be >= 1");
  static constexpr std::array<int, 8> e{1, 2, 2, 3, 3, 3, 3, 4};
  const int a = (k - 1) / 8;
  const int j = k - 8 * a;
  return 1 << (e[j - 1] + 4 * a);
}

/// True if an H-type algebra with dim z = k and dim v = m exists.
inline bool is_admissible(int k, int m) {
  if (k < 1 || m < 1) return false;
  return m % minimal_v_dimension(k) == 0;
}

/// Heisenberg-type algebra v + z with v = R^m, z = R^k, stored as the
/// k skew orthogonal maps J_{u_i} (J_{u_i} J_{u_j} + J_{u_j} J_{u_i} = -2 delta_ij).
class HTypeAlgebra {
 public:
  HTypeAlgebra(int m, std::vector<Mat> J) : m_(m), J_(std::move(J)) {
    if (J_.empty()) throw std::invalid_argument("HTypeAlgebra: need at least one J map");
    for (const auto& Ji : J_)
      if (Ji.rows() != m_ || Ji.cols() != m_)
        throw std::invalid_argument("HTypeAlgebra: J maps must be m x m");
    if (!is_admissible(k(), m_))
      throw std::invalid_argument("HTypeAlgebra: (k,m) = (" + std::to_string(k()) + "," +
                                  std::to_string(m_) + ") is not an admissible pair");
  }

  [[nodiscard]] int m() const { return m_; }
  [[nodiscard]] int k() const { return static_cast<int>(J_.size()); }
  [[nodiscard]] int n() const { return m_ + k() + 1; }
  [[nodiscard]] double Q() const { return 0.5 * m_ + k(); }
  [[nodiscard]] Dimensions dims() const { return {m_, k()}; }
  [[nodiscard]] const Mat& J(int i) const { return J_.at(static_cast<std::size_t>(i)); }
  [[nodiscard]] const std::vector<Mat>& maps() const { return J_; }

  /// J_Z X = sum_i Z_i J_{u_i} X.
  [[nodiscard]] Vec apply_JZ(const Vec& Z, const Vec& X) const {
    check_sizes(Z, X);
    Vec out = Vec::Zero(m_);
    for (int i = 0; i < k(); ++i) out.noalias() += Z(i) * (J_[i] * X);
    return out;
  }

  /// Matrix of J_Z.
  [[nodiscard]] Mat JZ(const Vec& Z) const {
    if (Z.size() != k()) throw std::invalid_argument("JZ: Z must have length k");
    Mat out = Mat::Zero(m_, m_);
    for (int i = 0; i < k(); ++i) out += Z(i) * J_[i];
    return out;
  }

  /// [X,Y]_i = <J_{u_i} X, Y>.
  [[nodiscard]] Vec bracket(const Vec& X, const Vec& Y) const {
    if (X.size() != m_ || Y.size() != m_)
      throw std::invalid_argument("bracket: X and Y must have length m");
    Vec out(k());
    for (int i = 0; i < k(); ++i) out(i) = (J_[i] * X).dot(Y);
    return out;
  }

  /// Largest deviation from the Clifford relations over all pairs (i,j).
  [[nodiscard]] double clifford_defect() const {
    double worst = 0.0;
    const Mat I = Mat::Identity(m_, m_);
    for (int i = 0; i < k(); ++i) {
      worst = std::max(worst, (J_[i] + J_[i].transpose()).cwiseAbs().maxCoeff());
      for (int j = 0; j < k(); ++j) {
        Mat anti = J_[i] * J_[j] + J_[j] * J_[i];
        if (i == j) anti += 2.0 * I;
        worst = std::max(worst, anti.cwiseAbs().maxCoeff());
      }
    }
    return worst;
  }

  [[nodiscard]] nlohmann::json to_json() const {
    nlohmann::json maps = nlohmann::json::array();
    for (const auto& Ji : J_) {
      nlohmann::json rows = nlohmann::json::array();
      for (int r = 0; r < m_; ++r) {
        std::vector<double> row(static_cast<std::size_t>(m_));
        for (int c = 0; c < m_; ++c) row[static_cast<std::size_t>(c)] = Ji(r, c);
        rows.push_back(row);
      }
      maps.push_back(rows);
    }
    return {{"k", k()}, {"m", m_}, {"n", n()}, {"Q", Q()}, {"J", maps}};
  }

 private:
  void check_sizes(const Vec& Z, const Vec& X) const {
    if (Z.size() != k() || X.size() != m_)
      throw std::invalid_argument("apply_JZ: expected |Z| = k and |X| = m");
  }

  int m_;
  std::vector<Mat> J_;
};

namespace detail {

// Quaternion product on R^4 with basis (1, i, j, k).
inline Eigen::Vector4d quat_mul(const Eigen::Vector4d& p, const Eigen::Vector4d& q) {
  return {p(0) * q(0) - p(1) * q(1) - p(2) * q(2) - p(3) * q(3),
          p(0) * q(1) + p(1) * q(0) + p(2) * q(3) - p(3) * q(2),
          p(0) * q(2) - p(1) * q(3) + p(2) * q(0) + p(3) * q(1),
          p(0) * q(3) + p(1) * q(2) - p(2) * q(1) + p(3) * q(0)};
}

inline Eigen::Vector4d quat_conj(const Eigen::Vector4d& p) { return {p(0), -p(1), -p(2), -p(3)}; }

// Octonion product by Cayley-Dickson doubling: (a,b)(c,d) = (ac - conj(d) b, d a + b conj(c)).
inline Eigen::Matrix<double, 8, 1> oct_mul(const Eigen::Matrix<double, 8, 1>& x,
                                           const Eigen::Matrix<double, 8, 1>& y) {
  const Eigen::Vector4d a = x.head<4>(), b = x.tail<4>(), c = y.head<4>(), d = y.tail<4>();
  Eigen::Matrix<double, 8, 1> out;
  out.head<4>() = quat_mul(a, c) - quat_mul(quat_conj(d), b);
  out.tail<4>() = quat_mul(d, a) + quat_mul(b, quat_conj(c));
  return out;
}

// Matrix of x -> u * x for a basis unit u, in dimension 4 or 8.
template <int D, class Mul>
Mat left_mult_matrix(int unit, Mul mul) {
  Mat L(D, D);
  Eigen::Matrix<double, D, 1> u = Eigen::Matrix<double, D, 1>::Zero();
  u(unit) = 1.0;
  for (int c = 0; c < D; ++c) {
    Eigen::Matrix<double, D, 1> e = Eigen::Matrix<double, D, 1>::Zero();
    e(c) = 1.0;
    L.col(c) = mul(u, e);
  }
  return L;
}

inline Mat block_diagonal(const Mat& block, int copies) {
  const auto s = block.rows();
  Mat out = Mat::Zero(s * copies, s * copies);
  for (int c = 0; c < copies; ++c) out.block(c * s, c * s, s, s) = block;
  return out;
}

}  // namespace detail

/// Build the H-type algebra with dim z = k in {1,2,3,7} on b copies of the
/// minimal Clifford module: k=1 uses the complex structure of R^2 (counterclockwise
/// rotation), k=2,3 quaternionic left multiplications on R^4, k=7 octonionic left
/// multiplications on R^8.
inline HTypeAlgebra build_htype(int k, int b) {
  if (b <= 0) throw std::invalid_argument("build_htype: b must be positive");
  std::vector<Mat> minimal;
  switch (k) {
    case 1: {
      Mat R(2, 2);
      R << 0.0, -1.0, 1.0, 0.0;
      minimal.push_back(R);
      break;
    }
    case 2:
    case 3:
      for (int u = 1; u <= k; ++u) minimal.push_back(detail::left_mult_matrix<4>(u, detail::quat_mul));
      break;
    case 7:
      for (int u = 1; u <= 7; ++u) minimal.push_back(detail::left_mult_matrix<8>(u, detail::oct_mul));
      break;
    default:
      throw std::invalid_argument("build_htype: unsupported k = " + std::to_string(k) +
                                  " (supported: 1, 2, 3, 7)");
  }
  std::vector<Mat> J;
  J.reserve(minimal.size());
  for (const auto& block : minimal) J.push_back(detail::block_diagonal(block, b));
  return HTypeAlgebra(static_cast<int>(minimal.front().rows()) * b, std::move(J));
}

}  // namespace hna
