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

#ifndef QUQUART_REPORT_HPP
#define QUQUART_REPORT_HPP

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "ququart/fixtures.hpp"
#include "ququart/qstate.hpp"
#include "ququart/tomo.hpp"

namespace ququart::report {

enum class Check { within, at_least };

/// One line of the reproduction table.
struct Row {
  std::string label;
  double reference = 0.0;
  double computed = 0.0;
  double tolerance = 0.0;
  Check check = Check::within;
  bool hard = true;

  double delta() const { return std::abs(computed - reference); }
  bool pass() const {
    if (check == Check::within) return delta() <= tolerance;
    return computed >= reference;
  }
};

struct PaperReport {
  std::vector<Row> rows;

  bool hard_pass() const {
    for (const auto& r : rows)
      if (r.hard && !r.pass()) return false;
    return true;
  }
  std::vector<Row> hard_failures() const {
    std::vector<Row> out;
    for (const auto& r : rows)
      if (r.hard && !r.pass()) out.push_back(r);
    return out;
  }
};

inline constexpr double kMetricTolerance = 0.01;
inline constexpr double kPaperCountFidelity = 0.90;

inline const char* short_name(std::string_view dataset) {
  if (dataset == "pure_30deg_hwp") return "pure";
  if (dataset == "mixed_pump30") return "mix30";
  if (dataset == "mixed_pump45") return "mix45";
  return "partial";
}

/// Element-wise tolerance between the generated and the printed theory matrix.
inline double theory_tolerance(std::string_view dataset) {
  if (dataset == "pure_30deg_hwp") return 0.01;
  if (dataset == "partial_22p5") return 0.015;
  return 1e-12;
}

/// Recomputes published metrics, regenerates theory states and reconstructs
/// from the raw counts for every embedded dataset.
inline PaperReport paper_report(const MleOptions& opt = {}) {
  PaperReport rep;
  const ProjectorSet& proj = fixtures::default_projectors();
  for (auto name : fixtures::kDatasetNames) {
    auto ds = fixtures::load_dataset(name);
    std::string tag = short_name(name);
    DensityMatrix exp = ds.rho_exp();
    DensityMatrix theory = ds.rho_theory();

    rep.rows.push_back({tag + " Tr[ρ²]", ds.reported.purity_exp, purity(exp), kMetricTolerance});
    rep.rows.push_back({tag + " S_exp", ds.reported.entropy_exp, entropy_base4(exp), kMetricTolerance});
    rep.rows.push_back({tag + " F", ds.reported.fidelity, fidelity(theory, exp), kMetricTolerance});

    DensityMatrix generated = fixtures::prepare_from_recipe(ds.recipe);
    double diff = detail::max_abs(generated.matrix() - fixtures::to_matrix(ds.theory_printed));
    rep.rows.push_back({tag + " theory max|Δρ|", 0.0, diff, theory_tolerance(name)});

    double f_mle = 0.0;
    try {
      f_mle = fidelity(mle_reconstruct(ds.counts, proj, std::nullopt, opt).density(), exp);
    } catch (const ConvergenceError& e) {
      f_mle = fidelity(e.best_so_far().density(), exp);
    }
    rep.rows.push_back({tag + " F(mle, ρ_exp)", kPaperCountFidelity, f_mle, 0.0, Check::at_least, false});
  }
  return rep;
}

inline std::string format_row(const Row& r) {
  char buf[256];
  const char* status = r.pass() ? "pass" : (r.hard ? "FAIL" : "below (identity DBS)");
  if (r.check == Check::within)
    std::snprintf(buf, sizeof buf, "%s\t%.4f\t%.4f\t%.4f\t±%g\t%s\t%s", r.label.c_str(), r.reference,
                  r.computed, r.delta(), r.tolerance, r.hard ? "hard" : "soft", status);
  else
    std::snprintf(buf, sizeof buf, "%s\t%.4f\t%.4f\t%.4f\t>=\t%s\t%s", r.label.c_str(), r.reference,
                  r.computed, r.computed - r.reference, r.hard ? "hard" : "soft", status);
  return buf;
}

inline std::string format_table(const PaperReport& rep) {
  std::string out = "row\tpaper\tcomputed\t|Δ|\ttolerance\tkind\tstatus\n";
  for (const auto& r : rep.rows) out += format_row(r) + "\n";
  return out;
}

}  // namespace ququart::report

#endif  // QUQUART_REPORT_HPP
