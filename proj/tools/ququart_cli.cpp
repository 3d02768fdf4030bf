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

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ququart/json_io.hpp"
#include "ququart/ququart.hpp"

using namespace ququart;
using io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAcceptance = 1;
constexpr int kExitInput = 2;
constexpr int kExitConvergence = 3;

void emit(const json& j, const std::string& out) {
  if (out.empty())
    std::cout << j.dump(2) << '\n';
  else
    io::write_json_file(out, j);
}

ProjectorSet projectors_from(const std::string& settings_file, const std::string& dbs_file) {
  std::optional<DbsCalibration> dbs;
  if (!dbs_file.empty()) dbs = io::dbs_from_json(io::read_json_file(dbs_file), dbs_file);
  if (settings_file.empty()) {
    if (!dbs) return fixtures::default_projectors();
    return build_projectors(fixtures::table1_settings(), dbs);
  }
  auto settings = io::settings_from_json(io::read_json_file(settings_file), settings_file);
  return build_projectors(settings, dbs);
}

LikelihoodModel parse_likelihood(const std::string& s) {
  if (s == "gaussian") return LikelihoodModel::gaussian;
  if (s == "poisson") return LikelihoodModel::poisson;
  throw io::FormatError("--likelihood", "expected gaussian or poisson");
}

struct PrepareArgs {
  std::string config, out;
};

int cmd_prepare(const PrepareArgs& a) {
  json cfg = io::read_json_file(a.config);
  auto prepared = io::prepare_from_json(cfg, a.config);
  json j;
  j["scheme"] = cfg["scheme"];
  j["rho"] = io::to_json(prepared.rho);
  if (prepared.psi) j["psi"] = io::to_json(*prepared.psi);
  j["metrics"] = io::metrics_json(prepared.rho);
  emit(j, a.out);
  return kExitOk;
}

struct SimulateArgs {
  std::string rho, settings, dbs, out;
  double total = 1e4;
  double duration = 1.0;
  std::uint64_t seed = 1;
  bool expected = false;
};

int cmd_simulate(const SimulateArgs& a) {
  DensityMatrix rho = io::density_from_json(io::read_json_file(a.rho), a.rho);
  ProjectorSet proj = projectors_from(a.settings, a.dbs);
  if (a.expected) {
    auto mean = expected_counts(rho, proj, a.total);
    CountRecord rec;
    rec.duration_s = a.duration;
    for (int nu = 0; nu < kSettings; ++nu) rec.counts[nu] = std::llround(mean[nu]);
    emit(io::to_json(rec), a.out);
    return kExitOk;
  }
  emit(io::to_json(simulate_counts(rho, proj, a.total, a.seed, a.duration)), a.out);
  return kExitOk;
}

struct ReconstructArgs {
  std::string counts, settings, dbs, out;
  std::string likelihood = "gaussian";
  int resamples = 0;
  std::uint64_t seed = 1;
  int threads = 1;
  long max_iterations = 50000;
};

int cmd_reconstruct(const ReconstructArgs& a) {
  CountRecord rec = io::counts_from_json(io::read_json_file(a.counts), a.counts);
  ProjectorSet proj = projectors_from(a.settings, a.dbs);
  MleOptions opt;
  opt.likelihood = parse_likelihood(a.likelihood);
  opt.simplex.max_iterations = a.max_iterations;
  if (a.resamples != 0 && a.resamples < 50)
    throw io::FormatError("--resamples", "must be 0 or at least 50");

  ReconstructionResult lin = linear_reconstruct(rec, proj);
  json j;
  j["total_counts"] = estimate_total(rec);
  j["duration_s"] = rec.duration_s;
  j["likelihood_model"] = a.likelihood;
  j["linear"] = io::to_json(lin);

  int code = kExitOk;
  ReconstructionResult mle;
  try {
    mle = mle_reconstruct(rec, proj, std::nullopt, opt);
    j["converged"] = true;
  } catch (const ConvergenceError& e) {
    mle = e.best_so_far();
    j["converged"] = false;
    code = kExitConvergence;
  }
  json mle_j = io::to_json(mle);
  for (auto& [k, v] : mle_j.items()) j[k] = v;
  j["metrics"] = io::metrics_json(mle.density());
  if (code == kExitOk && a.resamples > 0)
    j["errors"] = io::to_json(error_monte_carlo(rec, proj, a.resamples, a.seed, opt, a.threads));
  emit(j, a.out);
  if (code != kExitOk) std::cerr << "error: MLE did not converge; wrote best-so-far estimate\n";
  return code;
}

struct MetricsArgs {
  std::string rho, out;
};

int cmd_metrics(const MetricsArgs& a) {
  DensityMatrix rho = io::density_from_json(io::read_json_file(a.rho), a.rho);
  emit(io::metrics_json(rho), a.out);
  return kExitOk;
}

struct CompareArgs {
  std::string a, b, out;
};

int cmd_compare(const CompareArgs& c) {
  DensityMatrix ra = io::density_from_json(io::read_json_file(c.a), c.a);
  DensityMatrix rb = io::density_from_json(io::read_json_file(c.b), c.b);
  emit(io::to_json(compare_states(ra, rb)), c.out);
  return kExitOk;
}

struct CalibrateArgs {
  std::string transmit, reflect, out;
  double max_residual = 1e-3;
};

int cmd_calibrate(const CalibrateArgs& a) {
  auto fit = [&](const std::string& file) {
    auto probes = io::probes_from_json(io::read_json_file(file), file);
    return jones_from_stokes_probes(probes, a.max_residual);
  };
  DbsCalibration dbs{fit(a.transmit), fit(a.reflect)};
  emit(io::to_json(dbs), a.out);
  return kExitOk;
}

struct PaperArgs {
  std::string out;
};

int cmd_paper(const PaperArgs& a) {
  auto rep = report::paper_report();
  std::string table = report::format_table(rep);
  if (a.out.empty()) {
    std::cout << table;
  } else {
    std::ofstream f(a.out);
    f << table;
    if (!f) throw io::FormatError(a.out, "write failed");
  }
  if (rep.hard_pass()) return kExitOk;
  std::cerr << "hard criteria failed:\n";
  for (const auto& r : rep.hard_failures()) std::cerr << report::format_row(r) << '\n';
  return kExitAcceptance;
}

struct ExportArgs {
  std::string name, dir;
};

int cmd_fixtures_export(const ExportArgs& a) {
  auto ds = fixtures::load_dataset(a.name);
  namespace fs = std::filesystem;
  fs::path dir(a.dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw io::FormatError(a.dir, "cannot create directory: " + ec.message());
  io::write_json_file((dir / "counts.json").string(), io::to_json(ds.counts));
  auto settings = fixtures::table1_settings();
  io::write_json_file((dir / "settings.json").string(), io::to_json(std::span<const AnalysisSetting>(settings)));
  io::write_json_file((dir / "rho_theory.json").string(), io::to_json(ds.rho_theory()));
  io::write_json_file((dir / "rho_exp.json").string(), io::to_json(ds.rho_exp()));
  io::write_json_file((dir / "delta_rho.json").string(), io::matrix_to_json<4, 4>(ds.delta_rho()));
  io::write_json_file((dir / "reported.json").string(),
                      {{"fidelity", ds.reported.fidelity},
                       {"purity_exp", ds.reported.purity_exp},
                       {"entropy_exp", ds.reported.entropy_exp},
                       {"purity_theory", ds.reported.purity_theory},
                       {"entropy_theory", ds.reported.entropy_theory}});
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ququart: preparation, simulation and tomography of polarization ququarts"};
  app.require_subcommand(1);

  PrepareArgs prep;
  auto* sp = app.add_subcommand("prepare", "Build a theory density matrix from a preparation config");
  sp->add_option("config", prep.config, "Preparation JSON")->required();
  sp->add_option("-o,--out", prep.out, "Output file (stdout if omitted)");

  SimulateArgs sim;
  auto* ss = app.add_subcommand("simulate", "Draw Poisson counts for the 16 analysis settings");
  ss->add_option("rho", sim.rho, "Density matrix JSON")->required();
  ss->add_option("-N,--total", sim.total, "Mean total count rate N")->check(CLI::PositiveNumber);
  ss->add_option("--seed", sim.seed, "RNG seed");
  ss->add_option("--duration", sim.duration, "Acquisition time in seconds")->check(CLI::PositiveNumber);
  ss->add_option("--settings", sim.settings, "Settings JSON (default: Table I)");
  ss->add_option("--dbs", sim.dbs, "DBS calibration JSON");
  ss->add_flag("--expected", sim.expected, "Write rounded expected counts instead of a Poisson draw");
  ss->add_option("-o,--out", sim.out, "Output file (stdout if omitted)");

  ReconstructArgs rec;
  auto* sr = app.add_subcommand("reconstruct", "Linear and maximum-likelihood reconstruction");
  sr->add_option("counts", rec.counts, "Counts JSON")->required();
  sr->add_option("--settings", rec.settings, "Settings JSON (default: Table I)");
  sr->add_option("--dbs", rec.dbs, "DBS calibration JSON");
  sr->add_option("--likelihood", rec.likelihood, "gaussian (default) or poisson")
      ->check(CLI::IsMember({"gaussian", "poisson"}));
  sr->add_option("--resamples", rec.resamples, "Bootstrap resamples for error bars (0 = none, else >= 50)")
      ->check(CLI::NonNegativeNumber);
  sr->add_option("--seed", rec.seed, "Bootstrap master seed");
  sr->add_option("--threads", rec.threads, "Bootstrap worker threads")->check(CLI::PositiveNumber);
  sr->add_option("--max-iterations", rec.max_iterations, "Simplex iteration cap for the MLE search")
      ->check(CLI::PositiveNumber);
  sr->add_option("-o,--out", rec.out, "Output file (stdout if omitted)");

  MetricsArgs met;
  auto* sm = app.add_subcommand("metrics", "Purity, entropy, concurrence and eigenvalues");
  sm->add_option("rho", met.rho, "Density matrix JSON")->required();
  sm->add_option("-o,--out", met.out, "Output file (stdout if omitted)");

  CompareArgs cmp;
  auto* sc = app.add_subcommand("compare", "Fidelity and distances between two density matrices");
  sc->add_option("a", cmp.a, "First density matrix JSON")->required();
  sc->add_option("b", cmp.b, "Second density matrix JSON")->required();
  sc->add_option("-o,--out", cmp.out, "Output file (stdout if omitted)");

  CalibrateArgs cal;
  auto* sk = app.add_subcommand("calibrate-dbs", "Fit DBS Jones matrices from Stokes probe pairs");
  sk->add_option("--transmit", cal.transmit, "Six probe pairs for the transmitted port")->required();
  sk->add_option("--reflect", cal.reflect, "Six probe pairs for the reflected port")->required();
  sk->add_option("--max-residual", cal.max_residual, "Largest accepted relative Stokes residual")
      ->check(CLI::PositiveNumber);
  sk->add_option("-o,--out", cal.out, "Output file (stdout if omitted)");

  PaperArgs pap;
  auto* sq = app.add_subcommand("paper", "Reproduce the published metrics and reconstructions");
  sq->add_option("-o,--out", pap.out, "Write the TSV table here instead of stdout");

  ExportArgs exp;
  auto* sf = app.add_subcommand("fixtures", "Embedded datasets");
  sf->require_subcommand(1);
  auto* se = sf->add_subcommand("export", "Write a dataset as JSON files");
  se->add_option("name", exp.name, "pure_30deg_hwp | mixed_pump30 | mixed_pump45 | partial_22p5")->required();
  se->add_option("--dir", exp.dir, "Target directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*sp) return cmd_prepare(prep);
    if (*ss) return cmd_simulate(sim);
    if (*sr) return cmd_reconstruct(rec);
    if (*sm) return cmd_metrics(met);
    if (*sc) return cmd_compare(cmp);
    if (*sk) return cmd_calibrate(cal);
    if (*sq) return cmd_paper(pap);
    if (*se) return cmd_fixtures_export(exp);
  } catch (const EstimationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}
