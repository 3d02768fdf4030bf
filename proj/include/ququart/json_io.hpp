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

#ifndef QUQUART_JSON_IO_HPP
#define QUQUART_JSON_IO_HPP

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ququart/error.hpp"
#include "ququart/fixtures.hpp"
#include "ququart/linalg.hpp"
#include "ququart/optics.hpp"
#include "ququart/prepare.hpp"
#include "ququart/qstate.hpp"
#include "ququart/tomo.hpp"

/// JSON encodings shared by the command-line tool and the tests.
///
/// Complex numbers are [re, im] pairs, matrices are row-major nested arrays.
/// Doubles are written with round-trip precision (17 significant digits).
/// Angles are in degrees, phases in radians, wavelengths in nm.
namespace ququart::io {

using json = nlohmann::ordered_json;

/// Malformed or missing input field; `what()` starts with the JSON path.
class FormatError : public Error {
 public:
  FormatError(const std::string& path, const std::string& msg) : Error(path + ": " + msg) {}
};

namespace detail {

inline const json& field(const json& j, std::string_view key, const std::string& path) {
  if (!j.is_object()) throw FormatError(path, "expected an object");
  auto it = j.find(std::string(key));
  if (it == j.end()) throw FormatError(path + "." + std::string(key), "missing field");
  return *it;
}

inline double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw FormatError(path, "expected a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) throw FormatError(path, "expected a finite number");
  return v;
}

inline double number_field(const json& j, std::string_view key, const std::string& path) {
  return number(field(j, key, path), path + "." + std::string(key));
}

inline double number_field_or(const json& j, std::string_view key, const std::string& path,
                              double fallback) {
  if (!j.is_object()) throw FormatError(path, "expected an object");
  auto it = j.find(std::string(key));
  if (it == j.end()) return fallback;
  return number(*it, path + "." + std::string(key));
}

inline std::string string_field(const json& j, std::string_view key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_string()) throw FormatError(path + "." + std::string(key), "expected a string");
  return v.get<std::string>();
}

inline const json& array_of(const json& j, std::size_t n, const std::string& path) {
  if (!j.is_array()) throw FormatError(path, "expected an array");
  if (j.size() != n) {
    std::ostringstream os;
    os << "expected " << n << " entries, got " << j.size();
    if (j.size() < n) os << " (entry [" << j.size() << "] is missing)";
    throw FormatError(path, os.str());
  }
  return j;
}

inline std::string index_path(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

}  // namespace detail

inline json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const json& j, const std::string& path) {
  detail::array_of(j, 2, path);
  return {detail::number(j[0], detail::index_path(path, 0)),
          detail::number(j[1], detail::index_path(path, 1))};
}

template <int R, int C>
json matrix_to_json(const Eigen::Matrix<cplx, R, C>& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <int N>
Eigen::Matrix<cplx, N, N> matrix_from_json(const json& j, const std::string& path) {
  detail::array_of(j, N, path);
  Eigen::Matrix<cplx, N, N> m;
  for (int r = 0; r < N; ++r) {
    std::string rp = detail::index_path(path, r);
    detail::array_of(j[r], N, rp);
    for (int c = 0; c < N; ++c) m(r, c) = complex_from_json(j[r][c], detail::index_path(rp, c));
  }
  return m;
}

inline json real_matrix_to_json(const Matrix4r& m) {
  json rows = json::array();
  for (int r = 0; r < 4; ++r) {
    json row = json::array();
    for (int c = 0; c < 4; ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json to_json(const DensityMatrix& rho) { return matrix_to_json<4, 4>(rho.matrix()); }

/// Accepts either a bare 4x4 matrix or an object with a "rho" field.
inline DensityMatrix density_from_json(const json& j, const std::string& path = "$") {
  if (j.is_object()) return density_from_json(detail::field(j, "rho", path), path + ".rho");
  Matrix4c m = matrix_from_json<4>(j, path);
  try {
    return DensityMatrix(m);
  } catch (const ValidationError& e) {
    throw FormatError(path, e.what());
  }
}

inline json to_json(const PureQuquart& psi) {
  json a = json::array();
  for (int i = 0; i < 4; ++i) a.push_back(complex_to_json(psi[i]));
  return a;
}

inline PureQuquart pure_from_json(const json& j, const std::string& path = "$") {
  detail::array_of(j, 4, path);
  Vector4c v;
  for (int i = 0; i < 4; ++i) v(i) = complex_from_json(j[i], detail::index_path(path, i));
  try {
    return PureQuquart(v);
  } catch (const ValidationError& e) {
    throw FormatError(path, e.what());
  }
}

inline json to_json(const StokesVector& s) { return json::array({s.s0, s.s1, s.s2, s.s3}); }

inline StokesVector stokes_from_json(const json& j, const std::string& path) {
  detail::array_of(j, 4, path);
  StokesVector s;
  s.s0 = detail::number(j[0], detail::index_path(path, 0));
  s.s1 = detail::number(j[1], detail::index_path(path, 1));
  s.s2 = detail::number(j[2], detail::index_path(path, 2));
  s.s3 = detail::number(j[3], detail::index_path(path, 3));
  return s;
}

inline std::vector<StokesProbe> probes_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) throw FormatError(path, "expected an array of probe pairs");
  std::vector<StokesProbe> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::string p = detail::index_path(path, i);
    out.push_back({stokes_from_json(detail::field(j[i], "input", p), p + ".input"),
                   stokes_from_json(detail::field(j[i], "output", p), p + ".output")});
  }
  return out;
}

inline json to_json(const std::vector<StokesProbe>& probes) {
  json a = json::array();
  for (const auto& p : probes) a.push_back({{"input", to_json(p.input)}, {"output", to_json(p.output)}});
  return a;
}

inline json to_json(const DbsCalibration& dbs) {
  return {{"transmit", matrix_to_json<2, 2>(dbs.transmit)},
          {"reflect", matrix_to_json<2, 2>(dbs.reflect)}};
}

inline DbsCalibration dbs_from_json(const json& j, const std::string& path = "$") {
  DbsCalibration d;
  d.transmit = matrix_from_json<2>(detail::field(j, "transmit", path), path + ".transmit");
  d.reflect = matrix_from_json<2>(detail::field(j, "reflect", path), path + ".reflect");
  return d;
}

inline json to_json(const CountRecord& rec) {
  json j = {{"duration_s", rec.duration_s}, {"counts", rec.counts}};
  if (rec.seed) j["seed"] = *rec.seed;
  return j;
}

inline CountRecord counts_from_json(const json& j, const std::string& path = "$") {
  CountRecord rec;
  rec.origin = CountOrigin::external;
  rec.duration_s = detail::number_field(j, "duration_s", path);
  if (!(rec.duration_s > 0)) throw FormatError(path + ".duration_s", "must be positive");
  const json& c = detail::field(j, "counts", path);
  std::string cp = path + ".counts";
  if (!c.is_array()) throw FormatError(cp, "expected an array");
  if (c.size() != kSettings) {
    std::ostringstream os;
    os << "expected 16 counts (n_1..n_16), got " << c.size();
    if (c.size() < kSettings) os << "; n_" << c.size() + 1 << " is missing";
    throw FormatError(cp, os.str());
  }
  for (int nu = 0; nu < kSettings; ++nu) {
    const json& v = c[nu];
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
      throw FormatError(detail::index_path(cp, nu),
                        "n_" + std::to_string(nu + 1) + " must be a non-negative integer");
    rec.counts[nu] = v.get<std::int64_t>();
  }
  if (j.contains("seed") && j["seed"].is_number_unsigned()) {
    rec.seed = j["seed"].get<std::uint64_t>();
    rec.origin = CountOrigin::simulated;
  }
  return rec;
}

inline json to_json(std::span<const AnalysisSetting> settings) {
  json a = json::array();
  for (const auto& s : settings)
    a.push_back({{"hwp1", s.hwp1}, {"qwp1", s.qwp1}, {"hwp2", s.hwp2}, {"qwp2", s.qwp2}});
  return a;
}

inline std::array<AnalysisSetting, kSettings> settings_from_json(const json& j,
                                                                 const std::string& path = "$") {
  detail::array_of(j, kSettings, path);
  std::array<AnalysisSetting, kSettings> out;
  for (int i = 0; i < kSettings; ++i) {
    std::string p = detail::index_path(path, i);
    out[i] = AnalysisSetting(detail::number_field(j[i], "hwp1", p), detail::number_field(j[i], "qwp1", p),
                             detail::number_field(j[i], "hwp2", p), detail::number_field(j[i], "qwp2", p));
  }
  return out;
}

inline json to_json(const WaveplateSpec& w) {
  return {{"kind", w.kind == WaveplateKind::half ? "half" : "quarter"},
          {"design_wavelength_nm", w.design_wavelength_nm},
          {"fast_axis_deg", w.fast_axis_deg},
          {"angle_reference",
           w.angle_reference == AngleReference::from_horizontal ? "from_horizontal" : "from_vertical"}};
}

inline WaveplateSpec waveplate_from_json(const json& j, const std::string& path) {
  std::string kind = detail::string_field(j, "kind", path);
  WaveplateKind k;
  if (kind == "half")
    k = WaveplateKind::half;
  else if (kind == "quarter")
    k = WaveplateKind::quarter;
  else
    throw FormatError(path + ".kind", "expected \"half\" or \"quarter\"");
  AngleReference ref = AngleReference::from_horizontal;
  if (j.contains("angle_reference")) {
    std::string r = detail::string_field(j, "angle_reference", path);
    if (r == "from_vertical")
      ref = AngleReference::from_vertical;
    else if (r != "from_horizontal")
      throw FormatError(path + ".angle_reference", "expected \"from_horizontal\" or \"from_vertical\"");
  }
  double design = detail::number_field(j, "design_wavelength_nm", path);
  if (!(design > 0)) throw FormatError(path + ".design_wavelength_nm", "must be positive");
  return WaveplateSpec(k, design, detail::number_field(j, "fast_axis_deg", path), ref);
}

inline std::vector<WaveplateSpec> plates_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) throw FormatError(path, "expected an array of waveplates");
  std::vector<WaveplateSpec> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(waveplate_from_json(j[i], detail::index_path(path, i)));
  return out;
}

inline SpdcSource source_from_json(const json& j, const std::string& path) {
  SpdcSource s;
  s.pump_wavelength_nm = detail::number_field_or(j, "pump_nm", path, s.pump_wavelength_nm);
  s.signal_wavelength_nm = detail::number_field_or(j, "signal_nm", path, s.signal_wavelength_nm);
  s.idler_wavelength_nm = detail::number_field_or(j, "idler_nm", path, s.idler_wavelength_nm);
  try {
    s.validate();
  } catch (const ValidationError& e) {
    throw FormatError(path, e.what());
  }
  return s;
}

inline PolarizerAxis axis_from_string(const std::string& s, const std::string& path) {
  if (s == "horizontal") return PolarizerAxis::horizontal;
  if (s == "vertical") return PolarizerAxis::vertical;
  throw FormatError(path, "expected \"horizontal\" or \"vertical\"");
}

/// Output of a preparation config: the density matrix, and the state vector
/// when the scheme yields a pure state.
struct PreparedState {
  DensityMatrix rho;
  std::optional<PureQuquart> psi;
};

/// Evaluates a preparation document. `scheme` selects one of single_crystal,
/// double_crystal, partially_mixed, mach_zehnder or schmidt.
inline PreparedState prepare_from_json(const json& j, const std::string& path = "$") {
  std::string scheme = detail::string_field(j, "scheme", path);
  SpdcSource source;
  if (j.contains("source")) source = source_from_json(j["source"], path + ".source");
  auto double_crystal = [&]() {
    DoubleCrystalConfig c;
    c.pump_angle_deg = detail::number_field(j, "pump_angle_deg", path);
    c.relative_phase_rad = detail::number_field_or(j, "relative_phase_rad", path, 0.0);
    c.coherence = detail::number_field_or(j, "coherence", path, 0.0);
    try {
      c.validate();
    } catch (const ValidationError& e) {
      throw FormatError(path, e.what());
    }
    return c;
  };

  if (scheme == "single_crystal") {
    std::string type = detail::string_field(j, "crystal_type", path);
    CrystalType ct;
    if (type == "type_I")
      ct = CrystalType::type_I;
    else if (type == "type_II")
      ct = CrystalType::type_II;
    else
      throw FormatError(path + ".crystal_type", "expected \"type_I\" or \"type_II\"");
    PolarizerAxis axis = axis_from_string(detail::string_field(j, "optic_axis", path), path + ".optic_axis");
    PolarizerAxis pump = axis_from_string(detail::string_field(j, "pump_polarization", path),
                                          path + ".pump_polarization");
    PureQuquart psi = single_crystal_state(ct, axis, pump);
    if (j.contains("waveplate"))
      psi = apply_waveplate(psi, waveplate_from_json(j["waveplate"], path + ".waveplate"), source);
    return {density_from_pure(psi), psi};
  }
  if (scheme == "double_crystal") {
    DoubleCrystalConfig c = double_crystal();
    return {double_crystal_state(c), std::nullopt};
  }
  if (scheme == "partially_mixed") {
    DoubleCrystalConfig c = double_crystal();
    WaveplateSpec w = waveplate_from_json(detail::field(j, "waveplate", path), path + ".waveplate");
    return {partially_mixed_state(c, w, source), std::nullopt};
  }
  if (scheme == "mach_zehnder") {
    MachZehnderPlan plan;
    const json& m = detail::array_of(detail::field(j, "magnitudes", path), 4, path + ".magnitudes");
    for (int i = 0; i < 4; ++i)
      plan.magnitudes[i] = detail::number(m[i], detail::index_path(path + ".magnitudes", i));
    plan.phi_03 = detail::number_field_or(j, "phi_03", path, 0.0);
    plan.phi_12 = detail::number_field_or(j, "phi_12", path, 0.0);
    plan.phi_01 = detail::number_field_or(j, "phi_01", path, 0.0);
    try {
      plan.validate();
    } catch (const ValidationError& e) {
      throw FormatError(path + ".magnitudes", e.what());
    }
    PureQuquart psi = mz_plan_to_state(plan);
    return {density_from_pure(psi), psi};
  }
  if (scheme == "schmidt") {
    double chi1 = detail::number_field(j, "chi1", path);
    if (!(chi1 >= 0 && chi1 <= 1)) throw FormatError(path + ".chi1", "must lie in [0, 1]");
    double phase = detail::number_field_or(j, "pump_phase_rad", path, 0.0);
    std::vector<WaveplateSpec> u1, u2;
    if (j.contains("u1")) u1 = plates_from_json(j["u1"], path + ".u1");
    if (j.contains("u2")) u2 = plates_from_json(j["u2"], path + ".u2");
    PureQuquart psi = schmidt_scheme_state(chi1, phase, u1, u2, source);
    return {density_from_pure(psi), psi};
  }
  throw FormatError(path + ".scheme",
                    "unknown scheme \"" + scheme +
                        "\" (expected single_crystal, double_crystal, partially_mixed, "
                        "mach_zehnder or schmidt)");
}

inline json metrics_json(const DensityMatrix& rho) {
  Vector4r w = rho.eigenvalues();
  return {{"purity", purity(rho)},
          {"entropy", entropy_base4(rho)},
          {"concurrence", concurrence_mixed(rho)},
          {"eigenvalues", json::array({w(0), w(1), w(2), w(3)})}};
}

inline json to_json(const StateComparison& c) {
  return {{"fidelity", c.fidelity},           {"trace_distance", c.trace_distance},
          {"max_abs_difference", c.max_abs_difference},
          {"purity_a", c.purity_a},           {"purity_b", c.purity_b},
          {"entropy_a", c.entropy_a},         {"entropy_b", c.entropy_b},
          {"concurrence_a", c.concurrence_a}, {"concurrence_b", c.concurrence_b}};
}

inline json to_json(const ReconstructionResult& r) {
  json j;
  j["method"] = r.method == ReconstructionMethod::mle ? "mle" : "linear";
  j["rho"] = matrix_to_json<4, 4>(r.rho);
  j["likelihood"] = r.likelihood;
  j["iterations"] = r.iterations;
  j["eigenvalues"] = json::array({r.eigenvalues(0), r.eigenvalues(1), r.eigenvalues(2), r.eigenvalues(3)});
  j["physical"] = r.physical;
  return j;
}

inline json to_json(const ErrorEstimate& e) {
  return {{"delta_rho", real_matrix_to_json(e.delta_rho)},
          {"delta_re", real_matrix_to_json(e.delta_re)},
          {"delta_im", real_matrix_to_json(e.delta_im)},
          {"resamples", e.resamples},
          {"excluded", e.excluded},
          {"master_seed", e.master_seed}};
}

inline json read_json_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw FormatError(file, "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(file, std::string("invalid JSON: ") + e.what());
  }
}

inline void write_json_file(const std::string& file, const json& j) {
  std::ofstream out(file);
  if (!out) throw FormatError(file, "cannot open file for writing");
  out << j.dump(2) << '\n';
  if (!out) throw FormatError(file, "write failed");
}

}  // namespace ququart::io

#endif  // QUQUART_JSON_IO_HPP
