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

#ifndef QUQUART_FIXTURES_HPP
#define QUQUART_FIXTURES_HPP

#include <array>
#include <cstdint>
#include <cstring>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>

#include "ququart/error.hpp"
#include "ququart/linalg.hpp"
#include "ququart/prepare.hpp"
#include "ququart/qstate.hpp"
#include "ququart/tomo.hpp"

/// Published experimental data: the tomography settings table, the four
/// coincidence datasets (180 s each) and the printed theory, reconstructed and
/// error matrices. Matrices are kept exactly as printed, to four decimals.
namespace ququart::fixtures {

/// Printed 4x4 complex matrix, entries as {re, im}.
using PrintedMatrix = std::array<std::array<std::array<double, 2>, 4>, 4>;

inline constexpr std::array<std::string_view, 4> kDatasetNames = {
    "pure_30deg_hwp", "mixed_pump30", "mixed_pump45", "partial_22p5"};

inline constexpr double kAcquisitionSeconds = 180.0;

/// Rows of the settings table as (HWP1, QWP1, HWP2, QWP2), degrees.
inline constexpr std::array<std::array<double, 4>, 16> kTable1 = {{
    {45, 0, 45, 0},        // H H
    {45, 0, 0, 0},         // H V
    {0, 0, 0, 0},          // V V
    {0, 0, 45, 0},         // V H
    {22.5, 0, 45, 0},      // R H
    {22.5, 0, 0, 0},       // R V
    {22.5, 45, 0, 0},      // D V
    {22.5, 45, 45, 0},     // D H
    {22.5, 45, 22.5, 0},   // D R
    {22.5, 45, 22.5, 45},  // D D
    {22.5, 0, 22.5, 45},   // R D
    {45, 0, 22.5, 45},     // H D
    {0, 0, 22.5, 45},      // V D
    {0, 0, 22.5, 90},      // V L
    {45, 0, 22.5, 90},     // H L
    {22.5, 0, 22.5, 90},   // R L
}};

/// Basis labels listed next to each row (signal, idler).
inline constexpr std::array<std::array<char, 2>, 16> kTable1Labels = {{
    {'H', 'H'}, {'H', 'V'}, {'V', 'V'}, {'V', 'H'}, {'R', 'H'}, {'R', 'V'}, {'D', 'V'}, {'D', 'H'},
    {'D', 'R'}, {'D', 'D'}, {'R', 'D'}, {'H', 'D'}, {'V', 'D'}, {'V', 'L'}, {'H', 'L'}, {'R', 'L'},
}};

inline Vector2c labeled_state(char label) {
  switch (label) {
    case 'H': return pol::H();
    case 'V': return pol::V();
    case 'D': return pol::D();
    case 'A': return pol::A();
    case 'R': return pol::R();
    case 'L': return pol::L();
    default: throw LookupError(std::string("unknown polarization label '") + label + "'");
  }
}

inline std::array<AnalysisSetting, 16> table1_settings() {
  std::array<AnalysisSetting, 16> out;
  for (int i = 0; i < 16; ++i)
    out[i] = AnalysisSetting(kTable1[i][0], kTable1[i][1], kTable1[i][2], kTable1[i][3]);
  return out;
}

inline const ProjectorSet& default_projectors() {
  static const ProjectorSet set(table1_settings());
  return set;
}

namespace data {

inline constexpr std::array<std::int64_t, 16> kCountsPure = {
    6118, 1858, 917, 2943, 1565, 477, 2362, 7549, 2395, 8254, 1664, 6653, 3078, 2739, 5817, 1398};
inline constexpr std::array<std::int64_t, 16> kCountsMix30 = {
    1911, 46, 6287, 34, 795, 3562, 3005, 1048, 1911, 2061, 2321, 981, 3141, 3154, 973, 2220};
inline constexpr std::array<std::int64_t, 16> kCountsMix45 = {
    3442, 30, 3983, 23, 1621, 2358, 1950, 1895, 1906, 1973, 1959, 1840, 2040, 2026, 1809, 1909};
inline constexpr std::array<std::int64_t, 16> kCountsPartial = {
    1760, 1730, 1733, 1839, 1687, 1630, 1758, 1961, 817, 3029, 1008, 1701, 1940, 1944, 1692, 1192};

inline constexpr PrintedMatrix kTheoryPure = {{
    {{{0.5432, 0}, {0.3136, 0.1182}, {0.3136, 0}, {0.1811, 0.0683}}},
    {{{0.3136, -0.1182}, {0.2068, 0}, {0.1811, -0.0683}, {0.1194, 0}}},
    {{{0.3136, 0}, {0.1811, 0.0683}, {0.1811, 0}, {0.1045, 0.0394}}},
    {{{0.1811, -0.0683}, {0.1194, 0}, {0.1045, -0.0394}, {0.0689, 0}}},
}};
inline constexpr PrintedMatrix kExpPure = {{
    {{{0.5138, 0}, {0.2749, 0.0523}, {0.3236, 0.1308}, {0.1643, 0.1026}}},
    {{{0.2749, -0.0523}, {0.1590, 0}, {0.1887, 0.0418}, {0.1004, 0.0379}}},
    {{{0.3236, -0.1308}, {0.1887, -0.0418}, {0.2463, 0}, {0.1259, 0.0224}}},
    {{{0.1643, -0.1026}, {0.1004, -0.0379}, {0.1259, -0.0224}, {0.0777, 0}}},
}};
inline constexpr PrintedMatrix kErrorPure = {{
    {{{0.0066, 0}, {0.0042, -0.0034}, {0.0069, 0.0023}, {0.0083, 0.0028}}},
    {{{0.0042, 0.0034}, {0.0036, 0}, {0.0056, -0.0035}, {0.0039, 0.0013}}},
    {{{0.0069, -0.0023}, {0.0056, 0.0035}, {0.0046, 0}, {0.0029, -0.0024}}},
    {{{0.0083, -0.0028}, {0.0039, -0.0013}, {0.0029, 0.0024}, {0.0026, 0}}},
}};

inline constexpr PrintedMatrix kTheoryMix30 = {{
    {{{0.25, 0}, {0, 0}, {0, 0}, {0, 0}}},
    {{{0, 0}, {0, 0}, {0, 0}, {0, 0}}},
    {{{0, 0}, {0, 0}, {0, 0}, {0, 0}}},
    {{{0, 0}, {0, 0}, {0, 0}, {0.75, 0}}},
}};
inline constexpr PrintedMatrix kExpMix30 = {{
    {{{0.2300, 0}, {0.0024, 0.0009}, {0.0211, -0.0007}, {-0.0015, 0.0020}}},
    {{{0.0024, -0.0009}, {0.0057, 0}, {-0.0006, 0.0017}, {-0.0572, -0.0019}}},
    {{{0.0211, 0.0007}, {-0.0006, -0.0017}, {0.0041, 0}, {0.0069, 0.0018}}},
    {{{-0.0015, -0.0020}, {-0.0572, 0.0019}, {0.0069, -0.0018}, {0.7571, 0}}},
}};
inline constexpr PrintedMatrix kErrorMix30 = {{
    {{{0.0053, 0}, {0.0027, -0.0027}, {0.0030, 0.0023}, {0.0071, 0.0044}}},
    {{{0.0027, 0.0027}, {0.0008, 0}, {0.0044, -0.0070}, {0.0044, 0.0053}}},
    {{{0.0030, -0.0023}, {0.0044, 0.0070}, {0.0007, 0}, {0.0048, -0.0048}}},
    {{{0.0071, -0.0044}, {0.0044, -0.0053}, {0.0048, 0.0048}, {0.0096, 0}}},
}};

inline constexpr PrintedMatrix kTheoryMix45 = {{
    {{{0.5, 0}, {0, 0}, {0, 0}, {0, 0}}},
    {{{0, 0}, {0, 0}, {0, 0}, {0, 0}}},
    {{{0, 0}, {0, 0}, {0, 0}, {0, 0}}},
    {{{0, 0}, {0, 0}, {0, 0}, {0.5, 0}}},
}};
inline constexpr PrintedMatrix kExpMix45 = {{
    {{{0.4584, 0}, {0.0142, 0.0048}, {0.0253, 0.0162}, {0.0158, -0.0097}}},
    {{{0.0142, -0.0048}, {0.0041, 0}, {0.0012, 0.0004}, {-0.0406, 0.0118}}},
    {{{0.0253, -0.0162}, {0.0012, -0.0004}, {0.0031, 0}, {0.0024, 0.0029}}},
    {{{0.0158, 0.0097}, {-0.0406, -0.0118}, {0.0024, -0.0029}, {0.5313, 0}}},
}};
inline constexpr PrintedMatrix kErrorMix45 = {{
    {{{0.0078, 0}, {0.0040, -0.0039}, {0.0043, 0.0036}, {0.0075, 0.0047}}},
    {{{0.0040, 0.0039}, {0.0007, 0}, {0.0047, -0.0074}, {0.0038, 0.0047}}},
    {{{0.0043, -0.0036}, {0.0047, 0.0074}, {0.0006, 0}, {0.0042, -0.0042}}},
    {{{0.0075, -0.0047}, {0.0038, -0.0047}, {0.0042, 0.0042}, {0.0084, 0}}},
}};

inline constexpr PrintedMatrix kTheoryPartial = {{
    {{{0.25, 0}, {0, 0}, {-0.0086, 0}, {0.2414, 0.0644}}},
    {{{0, 0}, {0.25, 0}, {0.2414, -0.0644}, {0.0086, 0}}},
    {{{-0.0086, 0}, {0.2414, 0.0644}, {0.25, 0}, {0, 0}}},
    {{{0.2414, -0.0644}, {0.0086, 0}, {0, 0}, {0.25, 0}}},
}};
inline constexpr PrintedMatrix kExpPartial = {{
    {{{0.2493, 0}, {-0.0077, -0.0007}, {0.0234, 0.0126}, {0.1793, 0.1665}}},
    {{{-0.0077, 0.0007}, {0.2433, 0}, {0.2032, 0.1184}, {0.0142, -0.0036}}},
    {{{0.0234, -0.0126}, {0.2032, -0.1184}, {0.2590, 0}, {0.0333, -0.0019}}},
    {{{0.1793, -0.1665}, {0.0142, 0.0036}, {0.0333, 0.0019}, {0.2542, 0}}},
}};
inline constexpr PrintedMatrix kErrorPartial = {{
    {{{0.0059, 0}, {0.0042, -0.0042}, {0.0046, 0.0039}, {0.0098, 0.0036}}},
    {{{0.0042, 0.0042}, {0.0059, 0}, {0.0065, -0.0054}, {0.0043, 0.0040}}},
    {{{0.0046, -0.0039}, {0.0065, 0.0054}, {0.0061, 0}, {0.0042, -0.0042}}},
    {{{0.0098, -0.0036}, {0.0043, -0.0040}, {0.0042, 0.0042}, {0.0059, 0}}},
}};

}  // namespace data

/// Figures of merit quoted alongside each dataset.
struct ReportedMetrics {
  double fidelity;
  double purity_exp;
  double entropy_exp;
  double purity_theory;
  double entropy_theory;
};

/// How the dataset's state was prepared.
struct PreparationRecipe {
  enum class Scheme { single_crystal_waveplate, double_crystal, double_crystal_waveplate };
  Scheme scheme;
  DoubleCrystalConfig double_crystal{};
  std::optional<WaveplateSpec> waveplate;
};

struct PaperDataset {
  std::string name;
  CountRecord counts;
  PrintedMatrix theory_printed;
  PrintedMatrix exp_printed;
  PrintedMatrix error_printed;
  ReportedMetrics reported;
  PreparationRecipe recipe;

  DensityMatrix rho_theory() const;
  DensityMatrix rho_exp() const;
  Matrix4c delta_rho() const;
};

inline Matrix4c to_matrix(const PrintedMatrix& p) {
  Matrix4c m;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m(r, c) = cplx(p[r][c][0], p[r][c][1]);
  return m;
}

/// Tolerance for printed matrices, which carry four decimals.
inline constexpr double kPrintedTolerance = 5e-3;

/// Turns a printed matrix into a density matrix: the Hermitian part is taken,
/// eigenvalues in [-kPrintedTolerance, 0) are set to zero and the trace is
/// renormalized. Hermiticity and positivity beyond kPrintedTolerance, or a
/// trace off by more than 2 * kPrintedTolerance, are rejected.
inline DensityMatrix published_density(const PrintedMatrix& p) {
  Matrix4c m = to_matrix(p);
  double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kPrintedTolerance) throw ValidationError("printed matrix is not Hermitian");
  m = detail::hermitian_part(m);
  double tr = m.trace().real();
  if (std::abs(tr - 1.0) > 2 * kPrintedTolerance)
    throw ValidationError("printed matrix trace is too far from one");
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(m);
  Vector4r w = es.eigenvalues();
  if (w(0) < -kPrintedTolerance) throw ValidationError("printed matrix is not positive");
  w = w.cwiseMax(0.0);
  w /= w.sum();
  return DensityMatrix(
      detail::hermitian_part(Matrix4c(es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint())));
}

inline DensityMatrix PaperDataset::rho_theory() const { return published_density(theory_printed); }
inline DensityMatrix PaperDataset::rho_exp() const { return published_density(exp_printed); }
inline Matrix4c PaperDataset::delta_rho() const { return to_matrix(error_printed); }

inline CountRecord paper_counts(const std::array<std::int64_t, 16>& n) {
  CountRecord rec;
  rec.counts = n;
  rec.duration_s = kAcquisitionSeconds;
  rec.origin = CountOrigin::paper_fixture;
  return rec;
}

inline PaperDataset load_dataset(std::string_view name) {
  using Scheme = PreparationRecipe::Scheme;
  if (name == "pure_30deg_hwp")
    return {std::string(name), paper_counts(data::kCountsPure), data::kTheoryPure, data::kExpPure,
            data::kErrorPure, {0.938, 0.962, 0.052, 1.0, 0.0},
            {Scheme::single_crystal_waveplate, {}, WaveplateSpec(WaveplateKind::half, 823.5, 30.0,
                                                                 AngleReference::from_vertical)}};
  if (name == "mixed_pump30")
    return {std::string(name), paper_counts(data::kCountsMix30), data::kTheoryMix30,
            data::kExpMix30, data::kErrorMix30, {0.987, 0.634, 0.394, 0.625, 0.406},
            {Scheme::double_crystal, {30.0, 0.0, 0.0}, std::nullopt}};
  if (name == "mixed_pump45")
    return {std::string(name), paper_counts(data::kCountsMix45), data::kTheoryMix45,
            data::kExpMix45, data::kErrorMix45, {0.989, 0.499, 0.504, 0.5, 0.5},
            {Scheme::double_crystal, {45.0, 0.0, 0.0}, std::nullopt}};
  if (name == "partial_22p5")
    return {std::string(name), paper_counts(data::kCountsPartial), data::kTheoryPartial,
            data::kExpPartial, data::kErrorPartial, {0.878, 0.483, 0.551, 0.5, 0.5},
            {Scheme::double_crystal_waveplate, {45.0, 0.0, 0.0},
             WaveplateSpec(WaveplateKind::half, 823.5, 22.5, AngleReference::from_vertical)}};
  std::ostringstream os;
  os << "unknown dataset '" << name << "'; valid names are:";
  for (auto n : kDatasetNames) os << ' ' << n;
  throw LookupError(os.str());
}

/// Theory state generated from a dataset's preparation recipe.
inline DensityMatrix prepare_from_recipe(const PreparationRecipe& recipe,
                                         const SpdcSource& source = {}) {
  using Scheme = PreparationRecipe::Scheme;
  switch (recipe.scheme) {
    case Scheme::single_crystal_waveplate: {
      PureQuquart psi = single_crystal_state(CrystalType::type_I, PolarizerAxis::horizontal,
                                             PolarizerAxis::horizontal);
      return density_from_pure(apply_waveplate(psi, *recipe.waveplate, source));
    }
    case Scheme::double_crystal:
      return double_crystal_state(recipe.double_crystal);
    case Scheme::double_crystal_waveplate:
      return partially_mixed_state(recipe.double_crystal, *recipe.waveplate, source);
  }
  throw ValidationError("unknown preparation scheme");
}

/// FNV-1a over the bytes of every embedded number.
inline std::uint64_t checksum() {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&](const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 0x100000001b3ull;
    }
  };
  mix(kTable1.data(), sizeof(kTable1));
  for (auto name : kDatasetNames) {
    PaperDataset d = load_dataset(name);
    mix(d.counts.counts.data(), sizeof(d.counts.counts));
    mix(&d.theory_printed, sizeof(PrintedMatrix));
    mix(&d.exp_printed, sizeof(PrintedMatrix));
    mix(&d.error_printed, sizeof(PrintedMatrix));
    mix(&d.reported, sizeof(ReportedMetrics));
  }
  return h;
}

}  // namespace ququart::fixtures

#endif  // QUQUART_FIXTURES_HPP
