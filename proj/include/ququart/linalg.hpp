// Copyright 2026 The Ququart Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QUQUART_LINALG_HPP
#define QUQUART_LINALG_HPP

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace ququart {

using cplx = std::complex<double>;
using Vector2c = Eigen::Vector2cd;
using Vector4c = Eigen::Vector4cd;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
using Vector4r = Eigen::Vector4d;
using Matrix4r = Eigen::Matrix4d;

inline constexpr double kPi = std::numbers::pi;

inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Maps an angle in degrees onto [0, period).
inline double wrap_degrees(double deg, double period = 180.0) {
  double r = std::fmod(deg, period);
  if (r < 0) r += period;
  // fmod of a value just below a multiple of period can round up to period
  if (r >= period) r = 0.0;
  return r;
}

/// Two-photon tensor product; the signal photon is the most significant
/// index, matching the |H1 H2>, |H1 V2>, |V1 H2>, |V1 V2> ordering.
inline Matrix4c kron(const Matrix2c& signal, const Matrix2c& idler) {
  Matrix4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(2 * i + j, 2 * k + l) = signal(i, k) * idler(j, l);
  return out;
}

inline Vector4c kron(const Vector2c& signal, const Vector2c& idler) {
  return Vector4c(signal(0) * idler(0), signal(0) * idler(1), signal(1) * idler(0),
                  signal(1) * idler(1));
}

namespace detail {

inline double max_abs(const Eigen::MatrixXcd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Hermitian part (M + M^dagger) / 2.
template <typename Derived>
auto hermitian_part(const Eigen::MatrixBase<Derived>& m) {
  using Plain = typename Derived::PlainObject;
  Plain out = (m + m.adjoint()) / 2.0;
  return out;
}

/// Eigenvalues ascending, with values in [-clamp_tol, 0) set to zero.
inline Vector4r clamped_eigenvalues(const Matrix4c& herm, double clamp_tol) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(herm, Eigen::EigenvaluesOnly);
  Vector4r w = es.eigenvalues();
  for (int i = 0; i < 4; ++i) {
    if (w(i) < 0 && w(i) >= -clamp_tol) w(i) = 0.0;
  }
  return w;
}

/// Square root of a positive semidefinite Hermitian matrix through its
/// eigendecomposition. Eigenvalues below rel_floor times the largest one are
/// treated as zero.
template <int N>
Eigen::Matrix<cplx, N, N> psd_sqrt(const Eigen::Matrix<cplx, N, N>& herm, double rel_floor = 0.0) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<cplx, N, N>> es(herm);
  Eigen::Matrix<double, N, 1> w = es.eigenvalues();
  double cut = rel_floor * std::max(w.maxCoeff(), 0.0);
  for (int i = 0; i < N; ++i) w(i) = w(i) > cut ? std::sqrt(w(i)) : 0.0;
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

/// Multiplies v by the phase that makes its entry of largest modulus real and
/// non-negative. Ties resolve to the lowest index.
template <typename Derived>
void canonicalize_phase_by_max(Eigen::MatrixBase<Derived>& v) {
  Eigen::Index best = 0;
  double best_abs = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    double a = std::abs(v(i));
    if (a > best_abs * (1.0 + 1e-12)) {
      best_abs = a;
      best = i;
    }
  }
  if (best_abs <= 0) return;
  cplx phase = std::conj(v(best)) / best_abs;
  v *= phase;
}

/// Orthogonal basis of 4x4 Hermitian matrices: the four diagonal units, then
/// for each pair i < j the symmetric (E_ij + E_ji) and antisymmetric
/// (-i E_ij + i E_ji) units. Every Hermitian M equals sum_k x_k B_k with real x.
inline const std::array<Matrix4c, 16>& hermitian_basis4() {
  static const std::array<Matrix4c, 16> basis = [] {
    std::array<Matrix4c, 16> b;
    int k = 0;
    for (int i = 0; i < 4; ++i) {
      b[k].setZero();
      b[k++](i, i) = 1.0;
    }
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        b[k].setZero();
        b[k](i, j) = b[k](j, i) = 1.0;
        ++k;
        b[k].setZero();
        b[k](i, j) = cplx(0, -1);
        b[k](j, i) = cplx(0, 1);
        ++k;
      }
    return b;
  }();
  return basis;
}

}  // namespace detail
}  // namespace ququart

#endif  // QUQUART_LINALG_HPP
