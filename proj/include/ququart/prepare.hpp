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

#ifndef QUQUART_PREPARE_HPP
#define QUQUART_PREPARE_HPP

#include <cmath>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include "ququart/error.hpp"
#include "ququart/linalg.hpp"
#include "ququart/optics.hpp"
#include "ququart/qstate.hpp"

/// Models of the ququart preparation schemes: single and double crystal
/// down-conversion sources, waveplate transformation of the emitted state, the
/// Mach-Zehnder amplitude/phase planner and the Schmidt-coefficient scheme.
namespace ququart {

enum class CrystalType { type_I, type_II };

/// Collinear frequency non-degenerate down-conversion source.
struct SpdcSource {
  static constexpr double kEnergyTolerance = 1e-6;  // nm^-1

  double pump_wavelength_nm = 390.0;
  double signal_wavelength_nm = 823.5;
  double idler_wavelength_nm = 740.8;
  CrystalType crystal_type = CrystalType::type_I;
  PolarizerAxis optic_axis = PolarizerAxis::horizontal;

  SpdcSource() = default;
  SpdcSource(double pump_nm, double signal_nm, double idler_nm,
             CrystalType type = CrystalType::type_I,
             PolarizerAxis axis = PolarizerAxis::horizontal)
      : pump_wavelength_nm(pump_nm), signal_wavelength_nm(signal_nm), idler_wavelength_nm(idler_nm),
        crystal_type(type), optic_axis(axis) {
    validate();
  }

  double energy_mismatch() const {
    return 1.0 / pump_wavelength_nm - 1.0 / signal_wavelength_nm - 1.0 / idler_wavelength_nm;
  }

  void validate() const {
    if (!(pump_wavelength_nm > 0 && signal_wavelength_nm > 0 && idler_wavelength_nm > 0))
      throw ValidationError("source wavelengths must be positive");
    if (std::abs(energy_mismatch()) > kEnergyTolerance) {
      std::ostringstream os;
      os << "source violates energy conservation: 1/lp - 1/l1 - 1/l2 = " << energy_mismatch()
         << " nm^-1";
      throw ValidationError(os.str());
    }
  }
};

/// Two orthogonal type-I crystals in tandem. `coherence` is 0 when the two
/// emission amplitudes are fully distinguishable in time and 1 when that
/// distinguishability has been erased.
struct DoubleCrystalConfig {
  double pump_angle_deg = 45.0;     // from horizontal, in [0, 90]
  double relative_phase_rad = 0.0;  // phase of |0> relative to |3>
  double coherence = 0.0;           // in [0, 1]

  void validate() const {
    if (!(pump_angle_deg >= 0.0 && pump_angle_deg <= 90.0))
      throw ValidationError("pump angle must lie in [0, 90] degrees");
    if (!(coherence >= 0.0 && coherence <= 1.0))
      throw ValidationError("coherence must lie in [0, 1]");
    if (!std::isfinite(relative_phase_rad)) throw ValidationError("relative phase must be finite");
  }
};

/// Amplitude magnitudes and the three interferometer phases.
struct MachZehnderPlan {
  std::array<double, 4> magnitudes{1.0, 0.0, 0.0, 0.0};
  double phi_03 = 0.0;
  double phi_12 = 0.0;
  double phi_01 = 0.0;

  void validate(double tol = 1e-9) const {
    double s = 0.0;
    for (double m : magnitudes) {
      if (!(m >= 0.0)) throw ValidationError("plan magnitudes must be non-negative");
      s += m * m;
    }
    if (std::abs(s - 1.0) > tol) {
      std::ostringstream os;
      os << "plan magnitudes are not normalized (sum of squares " << s << ")";
      throw ValidationError(os.str());
    }
  }
};

/// Basis state emitted by one crystal. A type-I crystal with horizontal optic
/// axis is driven by horizontal pump light and emits |V1 V2> = |3>; the
/// vertical-axis crystal emits |H1 H2> = |0>. Type-II crystals emit |H1 V2> =
/// |1> (horizontal axis) or |V1 H2> = |2> (vertical axis).
inline PureQuquart single_crystal_state(CrystalType type, PolarizerAxis optic_axis,
                                        PolarizerAxis pump_polarization) {
  if (pump_polarization != optic_axis)
    throw NoEmissionError("pump polarization is orthogonal to the crystal's pumped axis");
  int index = 0;
  if (type == CrystalType::type_I)
    index = optic_axis == PolarizerAxis::horizontal ? 3 : 0;
  else
    index = optic_axis == PolarizerAxis::horizontal ? 1 : 2;
  return PureQuquart::basis(index);
}

/// rho = |a|^2 |3><3| + |b|^2 |0><0| + k (a b* |3><0| + h.c.) with
/// a = cos(pump angle), b = sin(pump angle) exp(i phase).
inline DensityMatrix double_crystal_state(const DoubleCrystalConfig& config) {
  config.validate();
  double theta = deg_to_rad(config.pump_angle_deg);
  cplx a = std::cos(theta);
  cplx b = std::polar(std::sin(theta), config.relative_phase_rad);
  Matrix4c m = Matrix4c::Zero();
  m(3, 3) = std::norm(a);
  m(0, 0) = std::norm(b);
  m(3, 0) = config.coherence * a * std::conj(b);
  m(0, 3) = std::conj(m(3, 0));
  return DensityMatrix(m);
}

inline DensityMatrix apply_unitary(const DensityMatrix& rho, const Matrix4c& u) {
  return DensityMatrix(detail::hermitian_part(Matrix4c(u * rho.matrix() * u.adjoint())));
}

inline DensityMatrix apply_waveplate(const DensityMatrix& rho, const WaveplateSpec& spec,
                                     const SpdcSource& source = {}) {
  return apply_unitary(
      rho, ququart_unitary(spec, source.signal_wavelength_nm, source.idler_wavelength_nm));
}

inline PureQuquart apply_waveplate(const PureQuquart& psi, const WaveplateSpec& spec,
                                   const SpdcSource& source = {}) {
  Matrix4c u = ququart_unitary(spec, source.signal_wavelength_nm, source.idler_wavelength_nm);
  return PureQuquart::normalized(u * psi.amplitudes());
}

inline DensityMatrix partially_mixed_state(const DoubleCrystalConfig& config,
                                           const WaveplateSpec& spec,
                                           const SpdcSource& source = {}) {
  return apply_waveplate(double_crystal_state(config), spec, source);
}

/// Convex combination sum p_i |psi_i><psi_i|. Weights must be non-negative
/// and sum to one.
inline DensityMatrix mixture(std::span<const std::pair<double, PureQuquart>> components) {
  if (components.empty()) throw ValidationError("mixture needs at least one component");
  Matrix4c m = Matrix4c::Zero();
  double total = 0.0;
  for (const auto& [p, psi] : components) {
    if (!(p >= 0.0)) throw ValidationError("mixture weights must be non-negative");
    total += p;
    m += p * psi.amplitudes() * psi.amplitudes().adjoint();
  }
  if (std::abs(total - 1.0) > 1e-9) throw ValidationError("mixture weights must sum to one");
  return DensityMatrix(m);
}

inline PureQuquart mz_plan_to_state(const MachZehnderPlan& plan) {
  plan.validate();
  const auto& m = plan.magnitudes;
  Vector4c c(m[0], std::polar(m[1], plan.phi_01), std::polar(m[2], plan.phi_12 + plan.phi_01),
             std::polar(m[3], plan.phi_03));
  return PureQuquart(c);
}

/// Inverse of mz_plan_to_state up to global phase. Phases that refer to an
/// amplitude below `zero_tol` are reported as zero.
///
/// The global phase is fixed by c0 when it is nonzero. Otherwise the phase of
/// c1 is absorbed (phi_01 = 0), and failing that the phase of c2.
inline MachZehnderPlan state_to_mz_plan(const PureQuquart& psi, double zero_tol = 1e-12) {
  const Vector4c& c = psi.amplitudes();
  MachZehnderPlan plan;
  for (int i = 0; i < 4; ++i) plan.magnitudes[i] = std::abs(c(i));
  bool nz[4];
  for (int i = 0; i < 4; ++i) nz[i] = plan.magnitudes[i] > zero_tol;

  double ref = 0.0;  // global phase removed from every amplitude
  if (nz[0])
    ref = std::arg(c(0));
  else if (nz[1])
    ref = std::arg(c(1));
  else if (nz[2])
    ref = std::arg(c(2));
  else
    ref = std::arg(c(3));

  auto rel = [&](int i) { return std::remainder(std::arg(c(i)) - ref, 2.0 * kPi); };
  if (nz[3] && (nz[0] || nz[1] || nz[2])) plan.phi_03 = rel(3);
  if (nz[1] && nz[0]) plan.phi_01 = rel(1);
  if (nz[2]) {
    double p2 = (nz[0] || nz[1]) ? rel(2) : 0.0;
    if (nz[1])
      plan.phi_12 = std::remainder(p2 - plan.phi_01, 2.0 * kPi);
    else if (nz[0]) {
      // c1 == 0: the split between phi_01 and phi_12 is free; put it in phi_01.
      plan.phi_01 = p2;
      plan.phi_12 = 0.0;
    }
  }
  // Zero-magnitude plan entries are exactly zero.
  for (auto& m : plan.magnitudes)
    if (m <= zero_tol) m = 0.0;
  double n = 0.0;
  for (double m : plan.magnitudes) n += m * m;
  for (auto& m : plan.magnitudes) m /= std::sqrt(n);
  return plan;
}

/// (U1 x U2)(sqrt(chi1)|HH> + sqrt(1 - chi1) e^{i phase}|VV>), each arm's
/// plates evaluated at that arm's wavelength.
inline PureQuquart schmidt_scheme_state(double chi1, double pump_phase_rad,
                                        std::span<const WaveplateSpec> signal_plates,
                                        std::span<const WaveplateSpec> idler_plates,
                                        const SpdcSource& source = {}) {
  if (!(chi1 >= 0.0 && chi1 <= 1.0)) throw ValidationError("chi1 must lie in [0, 1]");
  Vector4c v(std::sqrt(chi1), 0.0, 0.0, std::polar(std::sqrt(1.0 - chi1), pump_phase_rad));
  Matrix4c u = kron(waveplate_train(signal_plates, source.signal_wavelength_nm),
                    waveplate_train(idler_plates, source.idler_wavelength_nm));
  return PureQuquart::normalized(u * v);
}

}  // namespace ququart

#endif  // QUQUART_PREPARE_HPP
