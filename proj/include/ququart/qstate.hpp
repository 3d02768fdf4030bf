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

#ifndef QUQUART_QSTATE_HPP
#define QUQUART_QSTATE_HPP

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "ququart/error.hpp"
#include "ququart/linalg.hpp"

/// State representations and figures of merit for a single ququart.
///
/// The computational basis is the joint polarization of a frequency
/// non-degenerate photon pair, in the fixed order
///
///   0 <-> |H_1 H_2>,  1 <-> |H_1 V_2>,  2 <-> |V_1 H_2>,  3 <-> |V_1 V_2>
///
/// so that a ququart is also a two-qubit state (signal = qubit 1).
namespace ququart {

/// Absolute tolerances used when validating a density matrix.
struct Tolerances {
  double hermiticity = 1e-9;
  double trace = 1e-9;
  double positivity = 1e-10;
};

/// Normalized four-component state vector.
class PureQuquart {
 public:
  static constexpr double kNormTolerance = 1e-6;

  /// Accepts amplitudes whose squared norm is within kNormTolerance of one and
  /// renormalizes them exactly. Anything further off is a ValidationError.
  explicit PureQuquart(const Vector4c& amplitudes) : amps_(amplitudes) {
    double n2 = amplitudes.squaredNorm();
    if (!std::isfinite(n2) || std::abs(n2 - 1.0) > kNormTolerance) {
      std::ostringstream os;
      os << "ququart amplitudes are not normalized (sum |c|^2 = " << n2 << ")";
      throw ValidationError(os.str());
    }
    amps_ /= std::sqrt(n2);
  }

  PureQuquart(cplx c0, cplx c1, cplx c2, cplx c3)
      : PureQuquart(Vector4c(c0, c1, c2, c3)) {}

  /// Scales any nonzero vector onto the unit sphere.
  static PureQuquart normalized(const Vector4c& v) {
    double n = v.norm();
    if (!(n > 0) || !std::isfinite(n)) throw ValidationError("cannot normalize a zero vector");
    return PureQuquart(Vector4c(v / n));
  }

  static PureQuquart basis(int index) {
    if (index < 0 || index > 3) throw ValidationError("basis index must be in 0..3");
    Vector4c v = Vector4c::Zero();
    v(index) = 1.0;
    return PureQuquart(v);
  }

  const Vector4c& amplitudes() const noexcept { return amps_; }
  cplx operator[](int i) const { return amps_(i); }

  /// Same ray with the first nonzero amplitude real and non-negative.
  PureQuquart canonical(double zero_tol = 1e-12) const {
    Vector4c v = amps_;
    for (int i = 0; i < 4; ++i) {
      double a = std::abs(v(i));
      if (a > zero_tol) {
        v *= std::conj(v(i)) / a;
        break;
      }
    }
    return PureQuquart(v);
  }

  /// 1 - |<a|b>|, which vanishes when the states agree up to a global phase.
  friend double phase_insensitive_distance(const PureQuquart& a, const PureQuquart& b) {
    return 1.0 - std::abs(a.amps_.dot(b.amps_));
  }

 private:
  Vector4c amps_;
};

/// 4x4 Hermitian, unit-trace, positive-semidefinite matrix.
class DensityMatrix {
 public:
  /// Validates `m` against `tol` and stores its Hermitian part.
  explicit DensityMatrix(const Matrix4c& m, const Tolerances& tol = {}) {
    if (!m.allFinite()) throw ValidationError("density matrix has non-finite entries");
    double herm_err = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (herm_err > tol.hermiticity) {
      std::ostringstream os;
      os << "density matrix is not Hermitian (max |rho - rho^dagger| = " << herm_err << ")";
      throw ValidationError(os.str());
    }
    rho_ = detail::hermitian_part(m);
    double tr = rho_.trace().real();
    if (std::abs(tr - 1.0) > tol.trace) {
      std::ostringstream os;
      os << "density matrix trace is " << tr << ", expected 1";
      throw ValidationError(os.str());
    }
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(rho_, Eigen::EigenvaluesOnly);
    double min_eig = es.eigenvalues()(0);
    if (min_eig < -tol.positivity) {
      std::ostringstream os;
      os << "density matrix is not positive semidefinite (min eigenvalue " << min_eig << ")";
      throw ValidationError(os.str());
    }
  }

  static DensityMatrix maximally_mixed() { return DensityMatrix(Matrix4c::Identity() / 4.0); }

  static DensityMatrix diagonal(double p0, double p1, double p2, double p3) {
    Matrix4c m = Matrix4c::Zero();
    m.diagonal() << p0, p1, p2, p3;
    return DensityMatrix(m);
  }

  const Matrix4c& matrix() const noexcept { return rho_; }
  cplx operator()(int r, int c) const { return rho_(r, c); }

  /// Ascending eigenvalues with round-off negatives clamped to zero.
  Vector4r eigenvalues() const { return detail::clamped_eigenvalues(rho_, Tolerances{}.positivity); }

 private:
  Matrix4c rho_;
};

/// Schmidt form sqrt(chi1)|A1>|A2> + sqrt(chi2)|B1>|B2>, chi1 >= chi2.
struct SchmidtForm {
  double chi1 = 1.0;
  double chi2 = 0.0;
  Vector2c a1, b1;  // subsystem 1 (signal)
  Vector2c a2, b2;  // subsystem 2 (idler)

  Vector4c reassemble() const {
    Vector4c v;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        v(2 * i + j) = std::sqrt(chi1) * a1(i) * a2(j) + std::sqrt(chi2) * b1(i) * b2(j);
    return v;
  }
};

inline DensityMatrix density_from_pure(const PureQuquart& psi) {
  const Vector4c& v = psi.amplitudes();
  return DensityMatrix(v * v.adjoint());
}

inline DensityMatrix density_from_pure(const Vector4c& amplitudes) {
  return density_from_pure(PureQuquart(amplitudes));
}

/// Tr[rho^2].
inline double purity(const DensityMatrix& rho) {
  const Matrix4c& m = rho.matrix();
  // Tr[rho^2] = sum |rho_ij|^2 for Hermitian rho
  return m.cwiseAbs2().sum();
}

/// Von Neumann entropy with base-4 logarithm, so that it spans [0, 1].
inline double entropy_base4(const DensityMatrix& rho) {
  const double ln4 = std::log(4.0);
  double s = 0.0;
  for (double lambda : rho.eigenvalues()) {
    if (lambda > 0) s -= lambda * std::log(lambda);
  }
  return std::clamp(s / ln4, 0.0, 1.0);
}

/// Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2.
inline double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  constexpr double kNoise = 1e-13;
  Matrix4c sa = detail::psd_sqrt<4>(a.matrix(), kNoise);
  Matrix4c inner = detail::hermitian_part(sa * b.matrix() * sa);
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(inner, Eigen::EigenvaluesOnly);
  double cut = kNoise * std::max(es.eigenvalues().maxCoeff(), 0.0);
  double root_sum = 0.0;
  for (double w : es.eigenvalues())
    if (w > cut) root_sum += std::sqrt(w);
  return std::clamp(root_sum * root_sum, 0.0, 1.0);
}

/// Half the trace norm of a - b.
inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  Matrix4c diff = a.matrix() - b.matrix();
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(detail::hermitian_part(diff), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

/// 2|c0 c3 - c1 c2|.
inline double concurrence_pure(const PureQuquart& psi) {
  const Vector4c& c = psi.amplitudes();
  return std::min(1.0, 2.0 * std::abs(c(0) * c(3) - c(1) * c(2)));
}

/// Separability test c0 c3 == c1 c2 at an absolute tolerance.
inline bool is_product_state(const PureQuquart& psi, double tol = 1e-9) {
  const Vector4c& c = psi.amplitudes();
  return std::abs(c(0) * c(3) - c(1) * c(2)) < tol;
}

/// sigma_y (x) sigma_y.
inline Matrix4c spin_flip() {
  Matrix4c f = Matrix4c::Zero();
  f(0, 3) = -1.0;
  f(1, 2) = 1.0;
  f(2, 1) = 1.0;
  f(3, 0) = -1.0;
  return f;
}

/// Wootters concurrence. The spin-flip eigenvalues are taken from the
/// Hermitian form sqrt(rho) rho~ sqrt(rho), which shares its spectrum with
/// rho rho~.
inline double concurrence_mixed(const DensityMatrix& rho) {
  const Matrix4c yy = spin_flip();
  Matrix4c flipped = yy * rho.matrix().conjugate() * yy;
  constexpr double kNoise = 1e-13;
  Matrix4c s = detail::psd_sqrt<4>(rho.matrix(), kNoise);
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(detail::hermitian_part(s * flipped * s),
                                             Eigen::EigenvaluesOnly);
  Vector4r mu = es.eigenvalues();  // ascending
  double cut = kNoise * std::max(mu(3), 0.0);
  for (int i = 0; i < 4; ++i) mu(i) = mu(i) > cut ? std::sqrt(mu(i)) : 0.0;
  double c = mu(3) - mu(2) - mu(1) - mu(0);
  return std::clamp(c, 0.0, 1.0);
}

/// Schmidt decomposition via the singular values of the 2x2 amplitude
/// matrix C_ij = <i j|psi>. When chi1 == chi2 the bases are not unique and the
/// SVD's choice is returned.
inline SchmidtForm schmidt_decompose(const PureQuquart& psi) {
  const Vector4c& c = psi.amplitudes();
  Matrix2c cm;
  cm << c(0), c(1), c(2), c(3);
  Eigen::JacobiSVD<Matrix2c> svd(cm, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  SchmidtForm f;
  double s0 = s(0) * s(0), s1 = s(1) * s(1);
  double total = s0 + s1;
  f.chi1 = s0 / total;
  f.chi2 = s1 / total;
  f.a1 = svd.matrixU().col(0);
  f.b1 = svd.matrixU().col(1);
  f.a2 = svd.matrixV().col(0).conjugate();
  f.b2 = svd.matrixV().col(1).conjugate();
  return f;
}

}  // namespace ququart

#endif  // QUQUART_QSTATE_HPP
