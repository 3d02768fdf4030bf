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

#ifndef QUQUART_OPTICS_HPP
#define QUQUART_OPTICS_HPP

#include <array>
#include <cmath>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "ququart/error.hpp"
#include "ququart/linalg.hpp"

/// Jones calculus for the preparation and analysis optics.
///
/// Conventions used throughout the project:
///  - Jones vectors are (E_H, E_V).
///  - A retarder with retardance G and fast axis at angle t from horizontal is
///    R(t) diag(exp(-iG/2), exp(+iG/2)) R(-t): the fast axis leads by G/2 and
///    the determinant is exactly 1.
///  - |D> = (|H> + |V>)/sqrt2, |A> = (|H> - |V>)/sqrt2,
///    |R> = (|H> + i|V>)/sqrt2, |L> = (|H> - i|V>)/sqrt2.
///  - Stokes S3 is positive for |R>.
namespace ququart {

using JonesMatrix = Matrix2c;

namespace pol {
inline Vector2c H() { return Vector2c(1.0, 0.0); }
inline Vector2c V() { return Vector2c(0.0, 1.0); }
inline Vector2c D() { return Vector2c(1.0, 1.0) / std::sqrt(2.0); }
inline Vector2c A() { return Vector2c(1.0, -1.0) / std::sqrt(2.0); }
inline Vector2c R() { return Vector2c(cplx(1.0), cplx(0.0, 1.0)) / std::sqrt(2.0); }
inline Vector2c L() { return Vector2c(cplx(1.0), cplx(0.0, -1.0)) / std::sqrt(2.0); }
}  // namespace pol

enum class WaveplateKind { half, quarter };
enum class AngleReference { from_horizontal, from_vertical };
enum class PolarizerAxis { horizontal, vertical };

/// A zero-order retarder described by its design and mounting.
struct WaveplateSpec {
  WaveplateKind kind = WaveplateKind::half;
  double design_wavelength_nm = 823.5;
  double fast_axis_deg = 0.0;  // in [0, 180)
  AngleReference angle_reference = AngleReference::from_horizontal;

  WaveplateSpec() = default;
  WaveplateSpec(WaveplateKind k, double design_nm, double axis_deg,
                AngleReference ref = AngleReference::from_horizontal)
      : kind(k), design_wavelength_nm(design_nm), fast_axis_deg(wrap_degrees(axis_deg)),
        angle_reference(ref) {
    if (!(design_nm > 0) || !std::isfinite(design_nm))
      throw ValidationError("waveplate design wavelength must be positive");
    if (!std::isfinite(axis_deg)) throw ValidationError("waveplate angle must be finite");
  }

  /// Fast-axis angle measured counter-clockwise from horizontal, in [0, 180).
  double axis_from_horizontal_deg() const {
    return angle_reference == AngleReference::from_horizontal ? fast_axis_deg
                                                             : wrap_degrees(90.0 - fast_axis_deg);
  }

  double design_retardance() const { return kind == WaveplateKind::half ? kPi : kPi / 2.0; }
};

/// Stokes vector (s0, s1, s2, s3) with s1 = I_H - I_V, s2 = I_D - I_A, s3 = I_R - I_L.
struct StokesVector {
  double s0 = 1.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;

  double polarized_intensity() const { return std::sqrt(s1 * s1 + s2 * s2 + s3 * s3); }

  /// s0 > 0 and s1^2 + s2^2 + s3^2 <= s0^2 (relative slack `tol`).
  bool is_physical(double tol = 1e-9) const {
    return s0 > 0 && (s1 * s1 + s2 * s2 + s3 * s3) <= s0 * s0 * (1.0 + tol);
  }

  bool is_fully_polarized(double tol = 1e-6) const {
    return s0 > 0 && std::abs(s1 * s1 + s2 * s2 + s3 * s3 - s0 * s0) <= tol * s0 * s0;
  }

  std::array<double, 4> as_array() const { return {s0, s1, s2, s3}; }
};

inline Matrix2c rotation(double angle_rad) {
  Matrix2c r;
  double c = std::cos(angle_rad), s = std::sin(angle_rad);
  r << c, -s, s, c;
  return r;
}

inline JonesMatrix retarder_jones(double retardance_rad, double axis_angle_rad) {
  Matrix2c d = Matrix2c::Zero();
  d(0, 0) = std::polar(1.0, -retardance_rad / 2.0);
  d(1, 1) = std::polar(1.0, retardance_rad / 2.0);
  return rotation(axis_angle_rad) * d * rotation(-axis_angle_rad);
}

/// Dispersionless zero-order model: the retardance scales as 1/wavelength.
inline double waveplate_retardance(const WaveplateSpec& spec, double wavelength_nm) {
  if (!(wavelength_nm > 0)) throw ValidationError("wavelength must be positive");
  return spec.design_retardance() * spec.design_wavelength_nm / wavelength_nm;
}

inline JonesMatrix waveplate_jones(const WaveplateSpec& spec, double wavelength_nm) {
  return retarder_jones(waveplate_retardance(spec, wavelength_nm),
                        deg_to_rad(spec.axis_from_horizontal_deg()));
}

/// Applies a sequence of plates in order (first element is traversed first).
inline JonesMatrix waveplate_train(std::span<const WaveplateSpec> plates, double wavelength_nm) {
  JonesMatrix u = JonesMatrix::Identity();
  for (const auto& p : plates) u = waveplate_jones(p, wavelength_nm) * u;
  return u;
}

/// The same plate acting on both photons, each at its own wavelength.
inline Matrix4c ququart_unitary(const WaveplateSpec& spec, double lambda1_nm, double lambda2_nm) {
  return kron(waveplate_jones(spec, lambda1_nm), waveplate_jones(spec, lambda2_nm));
}

inline Matrix2c polarizer_projector(PolarizerAxis axis) {
  Matrix2c p = Matrix2c::Zero();
  if (axis == PolarizerAxis::horizontal)
    p(0, 0) = 1.0;
  else
    p(1, 1) = 1.0;
  return p;
}

inline bool is_unitary(const Matrix2c& u, double tol = 1e-9) {
  return (u.adjoint() * u - Matrix2c::Identity()).cwiseAbs().maxCoeff() <= tol;
}

inline StokesVector stokes_from_jones_vector(const Vector2c& e) {
  cplx cross = std::conj(e(0)) * e(1);
  double ih = std::norm(e(0)), iv = std::norm(e(1));
  return {ih + iv, ih - iv, 2.0 * cross.real(), 2.0 * cross.imag()};
}

/// Jones vector (up to global phase) of a fully polarized Stokes vector.
inline Vector2c jones_vector_from_stokes(const StokesVector& s) {
  if (!s.is_fully_polarized()) {
    std::ostringstream os;
    os << "Stokes vector (" << s.s0 << ", " << s.s1 << ", " << s.s2 << ", " << s.s3
       << ") is not fully polarized";
    throw UnsupportedInputError(os.str());
  }
  // Rescale onto the Poincare sphere so the amplitudes stay consistent.
  double scale = s.s0 / s.polarized_intensity();
  double s1 = s.s1 * scale, s2 = s.s2 * scale, s3 = s.s3 * scale;
  double ih = std::max(0.0, (s.s0 + s1) / 2.0);
  double iv = std::max(0.0, (s.s0 - s1) / 2.0);
  if (ih >= iv) {
    double ex = std::sqrt(ih);
    return Vector2c(ex, cplx(s2, s3) / (2.0 * ex));
  }
  double ey = std::sqrt(iv);
  return Vector2c(cplx(s2, -s3) / (2.0 * ey), ey);
}

inline StokesVector stokes_after_element(const JonesMatrix& jones, const StokesVector& input) {
  return stokes_from_jones_vector(jones * jones_vector_from_stokes(input));
}

/// The six calibration probes |H>, |V>, |D>, |A>, |R>, |L> at unit intensity.
inline std::array<StokesVector, 6> standard_probe_inputs() {
  return {StokesVector{1, 1, 0, 0}, StokesVector{1, -1, 0, 0}, StokesVector{1, 0, 1, 0},
          StokesVector{1, 0, -1, 0}, StokesVector{1, 0, 0, 1}, StokesVector{1, 0, 0, -1}};
}

struct StokesProbe {
  StokesVector input;
  StokesVector output;
};

namespace detail {

inline std::array<Matrix2c, 4> stokes_paulis() {
  Matrix2c s0 = Matrix2c::Identity();
  Matrix2c s1, s2, s3;
  s1 << 1, 0, 0, -1;
  s2 << 0, 1, 1, 0;
  s3 << 0, cplx(0, -1), cplx(0, 1), 0;
  return {s0, s1, s2, s3};
}

/// Coherency matrix (1/2) sum_k S_k sigma_k.
inline Matrix2c coherency(const StokesVector& s) {
  auto p = stokes_paulis();
  return 0.5 * (s.s0 * p[0] + s.s1 * p[1] + s.s2 * p[2] + s.s3 * p[3]);
}

inline std::array<double, 4> predicted_stokes(const JonesMatrix& j, const Matrix2c& w) {
  auto p = stokes_paulis();
  Matrix2c out = j * w * j.adjoint();
  std::array<double, 4> s{};
  for (int i = 0; i < 4; ++i) s[i] = (p[i] * out).trace().real();
  return s;
}

/// Largest probe residual |S_pred - S_meas| relative to that probe's input s0.
inline double probe_residual(const JonesMatrix& j, std::span<const StokesProbe> probes) {
  double worst = 0.0;
  for (const auto& pr : probes) {
    auto s = predicted_stokes(j, coherency(pr.input));
    auto m = pr.output.as_array();
    for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(s[i] - m[i]) / pr.input.s0);
  }
  return worst;
}

}  // namespace detail

/// Jones matrix of a (possibly non-unitary) element recovered from Stokes
/// measurements of six pure probe states.
///
/// The output Stokes parameters are linear in the rank-one matrix
/// vec(J) vec(J)^dagger, so that matrix is first fitted by linear least
/// squares and its dominant eigenvector gives J. A damped Gauss-Newton pass
/// over the eight real parameters of J then polishes the fit. The result is
/// unique up to a global phase; the entry of largest modulus is made real and
/// non-negative.
inline JonesMatrix jones_from_stokes_probes(std::span<const StokesProbe> probes,
                                            double max_residual = 1e-3) {
  if (probes.size() != 6) throw ValidationError("Jones calibration needs exactly six probes");
  for (const auto& pr : probes) {
    if (!pr.input.is_fully_polarized())
      throw UnsupportedInputError("calibration probes must be fully polarized");
    if (!pr.output.is_physical(1e-6))
      throw CalibrationError("probe output Stokes vector is unphysical", 0.0);
  }

  // The lifted unknown H_{(ca),(db)} = J_ca conj(J_db) is Hermitian.
  const auto& basis = detail::hermitian_basis4();
  const auto paulis = detail::stokes_paulis();
  const int rows = static_cast<int>(probes.size()) * 4;
  Eigen::MatrixXd design(rows, 16);
  Eigen::VectorXd rhs(rows);
  for (std::size_t p = 0; p < probes.size(); ++p) {
    Matrix2c w = detail::coherency(probes[p].input);
    auto meas = probes[p].output.as_array();
    for (int i = 0; i < 4; ++i) {
      int r = static_cast<int>(p) * 4 + i;
      rhs(r) = meas[i];
      for (int m = 0; m < 16; ++m) {
        cplx acc = 0.0;
        for (int c = 0; c < 2; ++c)
          for (int a = 0; a < 2; ++a)
            for (int d = 0; d < 2; ++d)
              for (int b = 0; b < 2; ++b)
                acc += paulis[i](d, c) * w(a, b) * basis[m](2 * c + a, 2 * d + b);
        design(r, m) = acc.real();
      }
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) < 1e-9 * sv(0))
    throw CalibrationError("probe set does not determine the Jones matrix", 0.0);
  Eigen::VectorXd x = svd.solve(rhs);
  Eigen::Matrix4cd lifted = Eigen::Matrix4cd::Zero();
  for (int m = 0; m < 16; ++m) lifted += x(m) * basis[m];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(lifted);
  Eigen::Vector4cd h = es.eigenvectors().col(3) * std::sqrt(std::max(es.eigenvalues()(3), 0.0));
  JonesMatrix j;
  j << h(0), h(1), h(2), h(3);

  // Levenberg-Marquardt polish on the real and imaginary parts of J.
  auto residual_vec = [&](const JonesMatrix& jj) {
    Eigen::VectorXd r(rows);
    for (std::size_t p = 0; p < probes.size(); ++p) {
      auto s = detail::predicted_stokes(jj, detail::coherency(probes[p].input));
      auto m = probes[p].output.as_array();
      for (int i = 0; i < 4; ++i) r(static_cast<int>(p) * 4 + i) = s[i] - m[i];
    }
    return r;
  };
  double damping = 1e-6;
  Eigen::VectorXd r = residual_vec(j);
  for (int iter = 0; iter < 50 && r.squaredNorm() > 1e-30; ++iter) {
    Eigen::MatrixXd jac(rows, 8);
    for (std::size_t p = 0; p < probes.size(); ++p) {
      Matrix2c w = detail::coherency(probes[p].input);
      for (int i = 0; i < 4; ++i) {
        // dS_i = 2 Re Tr(sigma_i dJ W J^dagger)
        Matrix2c g = w * j.adjoint() * paulis[i];
        int row = static_cast<int>(p) * 4 + i;
        for (int q = 0; q < 2; ++q)
          for (int s = 0; s < 2; ++s) {
            int k = 2 * q + s;
            jac(row, 2 * k) = 2.0 * g(s, q).real();
            jac(row, 2 * k + 1) = -2.0 * g(s, q).imag();
          }
      }
    }
    Eigen::MatrixXd jtj = jac.transpose() * jac;
    Eigen::VectorXd grad = jac.transpose() * r;
    bool improved = false;
    for (int tries = 0; tries < 20 && !improved; ++tries) {
      Eigen::MatrixXd lhs = jtj;
      lhs.diagonal().array() += damping * (1.0 + jtj.diagonal().array());
      Eigen::VectorXd step = lhs.ldlt().solve(-grad);
      JonesMatrix trial = j;
      for (int k = 0; k < 4; ++k) trial(k / 2, k % 2) += cplx(step(2 * k), step(2 * k + 1));
      Eigen::VectorXd rt = residual_vec(trial);
      if (rt.squaredNorm() < r.squaredNorm()) {
        j = trial;
        r = rt;
        damping = std::max(damping * 0.1, 1e-12);
        improved = true;
      } else {
        damping *= 10.0;
      }
    }
    if (!improved) break;
  }

  double resid = detail::probe_residual(j, probes);
  if (resid > max_residual) {
    std::ostringstream os;
    os << "probe data are inconsistent with a single Jones matrix (residual " << resid << ")";
    throw CalibrationError(os.str(), resid);
  }
  detail::canonicalize_phase_by_max(j);
  return j;
}

/// Jones matrix recovery up to global phase: min over phi of max |a - e^{i phi} b|.
inline double jones_distance_up_to_phase(const JonesMatrix& a, const JonesMatrix& b) {
  cplx overlap = (b.adjoint() * a).trace();
  cplx phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cplx(1.0);
  return (a - phase * b).cwiseAbs().maxCoeff();
}

}  // namespace ququart

#endif  // QUQUART_OPTICS_HPP
