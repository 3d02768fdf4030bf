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

#include <string>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ququart/json_io.hpp"

using namespace ququart;
using io::json;

namespace {

json reparse(const json& j) { return json::parse(j.dump()); }

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const io::FormatError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Json, density_round_trip_is_exact) {
  oracle::Gen g(51);
  for (int t = 0; t < 200; ++t) {
    DensityMatrix rho(g.density());
    DensityMatrix back = io::density_from_json(reparse(io::to_json(rho)));
    EXPECT_EQ(back.matrix(), rho.matrix());
  }
}

TEST(Json, density_layout) {
  json j = io::to_json(DensityMatrix::diagonal(0.25, 0, 0, 0.75));
  ASSERT_EQ(j.size(), 4u);
  ASSERT_EQ(j[3].size(), 4u);
  EXPECT_EQ(j[3][3], json::array({0.75, 0.0}));
  EXPECT_EQ(io::density_from_json(json{{"rho", j}}).matrix()(3, 3), cplx(0.75));
}

TEST(Json, doubles_keep_full_precision) {
  json j = json::array({0.1 + 1e-13});
  EXPECT_EQ(json::parse(j.dump())[0].get<double>(), 0.1 + 1e-13);
}

TEST(Json, pure_round_trip) {
  oracle::Gen g(52);
  for (int t = 0; t < 100; ++t) {
    PureQuquart p(g.pure_state());
    EXPECT_LT((io::pure_from_json(reparse(io::to_json(p))).amplitudes() - p.amplitudes()).norm(), 1e-15);
  }
  EXPECT_NE(error_of([] { io::pure_from_json(json::parse("[[1,0],[1,0],[0,0],[0,0]]")); }), "");
}

TEST(Json, dbs_and_stokes_round_trip) {
  oracle::Gen g(53);
  DbsCalibration d{g.unitary<2>(), g.unitary<2>()};
  auto back = io::dbs_from_json(reparse(io::to_json(d)));
  EXPECT_EQ(back.transmit, d.transmit);
  EXPECT_EQ(back.reflect, d.reflect);
  StokesVector s{1.5, 0.5, -0.25, 1.0};
  auto sb = io::stokes_from_json(reparse(io::to_json(s)), "$");
  EXPECT_EQ(sb.as_array(), s.as_array());
  std::vector<StokesProbe> probes = {{s, s}, {StokesVector{1, 0, 0, 1}, StokesVector{2, 0, 2, 0}}};
  auto pb = io::probes_from_json(reparse(io::to_json(probes)), "$");
  ASSERT_EQ(pb.size(), 2u);
  EXPECT_EQ(pb[1].output.as_array(), probes[1].output.as_array());
}

TEST(Json, counts_round_trip_and_validation) {
  CountRecord rec;
  for (int nu = 0; nu < 16; ++nu) rec.counts[nu] = 100 + nu;
  rec.duration_s = 180;
  auto back = io::counts_from_json(reparse(io::to_json(rec)));
  EXPECT_EQ(back.counts, rec.counts);
  EXPECT_EQ(back.duration_s, 180.0);

  json j = io::to_json(rec);
  j["counts"].erase(15);
  std::string msg = error_of([&] { io::counts_from_json(j, "counts.json"); });
  EXPECT_NE(msg.find("n_16"), std::string::npos) << msg;
  EXPECT_NE(msg.find("counts.json.counts"), std::string::npos) << msg;

  j = io::to_json(rec);
  j["counts"][4] = -3;
  msg = error_of([&] { io::counts_from_json(j); });
  EXPECT_NE(msg.find("n_5"), std::string::npos) << msg;
  j = io::to_json(rec);
  j["counts"][4] = 2.5;
  EXPECT_NE(error_of([&] { io::counts_from_json(j); }), "");
  j = io::to_json(rec);
  j.erase("duration_s");
  msg = error_of([&] { io::counts_from_json(j); });
  EXPECT_NE(msg.find("$.duration_s"), std::string::npos) << msg;
}

TEST(Json, settings_round_trip) {
  std::array<AnalysisSetting, 16> s;
  for (int i = 0; i < 16; ++i) s[i] = AnalysisSetting(i * 7.5, i * 3.0, 90 - i, 2.0 * i);
  auto back = io::settings_from_json(reparse(io::to_json(std::span<const AnalysisSetting>(s))));
  EXPECT_EQ(back, s);
}

TEST(Json, waveplate_round_trip) {
  WaveplateSpec w(WaveplateKind::quarter, 740.8, 33.0, AngleReference::from_vertical);
  auto back = io::waveplate_from_json(reparse(io::to_json(w)), "$");
  EXPECT_EQ(back.kind, w.kind);
  EXPECT_EQ(back.fast_axis_deg, w.fast_axis_deg);
  EXPECT_EQ(back.angle_reference, w.angle_reference);
  EXPECT_EQ(back.design_wavelength_nm, w.design_wavelength_nm);
}

TEST(Json, prepare_schemes) {
  auto single = io::prepare_from_json(json::parse(R"({
    "scheme": "single_crystal", "crystal_type": "type_I", "optic_axis": "horizontal",
    "pump_polarization": "horizontal",
    "waveplate": {"kind": "half", "design_wavelength_nm": 823.5, "fast_axis_deg": 30,
                  "angle_reference": "from_vertical"}})"));
  ASSERT_TRUE(single.psi.has_value());
  EXPECT_NEAR(single.rho.matrix()(0, 0).real(), 0.5432, 0.01);

  auto dc = io::prepare_from_json(json::parse(R"({"scheme": "double_crystal", "pump_angle_deg": 30})"));
  EXPECT_NEAR(dc.rho.matrix()(3, 3).real(), 0.75, 1e-15);
  EXPECT_FALSE(dc.psi.has_value());

  auto pm = io::prepare_from_json(json::parse(R"({"scheme": "partially_mixed", "pump_angle_deg": 45,
    "waveplate": {"kind": "half", "design_wavelength_nm": 823.5, "fast_axis_deg": 22.5,
                  "angle_reference": "from_vertical"}})"));
  EXPECT_NEAR(entropy_base4(pm.rho), 0.5, 1e-12);

  auto mz = io::prepare_from_json(json::parse(R"({"scheme": "mach_zehnder", "magnitudes": [1, 0, 0, 0]})"));
  EXPECT_EQ(mz.rho.matrix()(0, 0), cplx(1.0));

  auto sc = io::prepare_from_json(json::parse(R"({"scheme": "schmidt", "chi1": 0.8,
    "u1": [{"kind": "quarter", "design_wavelength_nm": 823.5, "fast_axis_deg": 10}],
    "u2": [{"kind": "half", "design_wavelength_nm": 740.8, "fast_axis_deg": 70}]})"));
  EXPECT_NEAR(concurrence_pure(*sc.psi), 0.8, 1e-9);
}

TEST(Json, prepare_errors_name_the_field) {
  auto msg = [](const char* text) { return error_of([&] { io::prepare_from_json(json::parse(text)); }); };
  EXPECT_NE(msg(R"({"scheme": "nope"})").find("$.scheme"), std::string::npos);
  EXPECT_NE(msg(R"({"pump_angle_deg": 30})").find("$.scheme"), std::string::npos);
  EXPECT_NE(msg(R"({"scheme": "double_crystal"})").find("$.pump_angle_deg"), std::string::npos);
  EXPECT_NE(msg(R"({"scheme": "double_crystal", "pump_angle_deg": "x"})").find("$.pump_angle_deg"),
            std::string::npos);
  EXPECT_NE(msg(R"({"scheme": "partially_mixed", "pump_angle_deg": 45,
                    "waveplate": {"kind": "full", "design_wavelength_nm": 800, "fast_axis_deg": 0}})")
                .find("$.waveplate.kind"),
            std::string::npos);
  EXPECT_NE(msg(R"({"scheme": "mach_zehnder", "magnitudes": [1, 0, 0]})").find("$.magnitudes"),
            std::string::npos);
  EXPECT_NE(msg(R"({"scheme": "schmidt", "chi1": 2})").find("$.chi1"), std::string::npos);
  EXPECT_NE(msg(R"({"scheme": "double_crystal", "pump_angle_deg": 30, "coherence": 3})"), "");
}

TEST(Json, report_fields) {
  ReconstructionResult r;
  r.method = ReconstructionMethod::mle;
  r.iterations = 12;
  r.likelihood = 3.5;
  json j = io::to_json(r);
  for (const char* k : {"method", "rho", "likelihood", "iterations", "eigenvalues", "physical"})
    EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_EQ(j["method"], "mle");
  json m = io::metrics_json(DensityMatrix::maximally_mixed());
  EXPECT_DOUBLE_EQ(m["purity"].get<double>(), 0.25);
  EXPECT_NEAR(m["entropy"].get<double>(), 1.0, 1e-12);
  EXPECT_EQ(m["concurrence"].get<double>(), 0.0);
}
