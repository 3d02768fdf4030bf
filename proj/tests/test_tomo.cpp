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

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ququart/fixtures.hpp"
#include "ququart/simplex.hpp"
#include "ququart/tomo.hpp"

using namespace ququart;

namespace {

const ProjectorSet& table1() { return fixtures::default_projectors(); }

CountRecord oracle_counts(const Matrix4c& rho, double total) {
  auto states = oracle::table1_states(fixtures::kTable1);
  auto n = oracle::born_counts(rho, states, total);
  CountRecord rec;
  for (int nu = 0; nu < 16; ++nu) rec.counts[nu] = std::llround(n[nu]);
  return rec;
}

void expect_physical(const Matrix4c& rho) {
  EXPECT_LE(oracle::max_abs(rho - rho.adjoint()), 1e-9);
  EXPECT_NEAR(rho.trace().real(), 1.0, 1e-9);
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(rho);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
}

}  // namespace

TEST(Table1, reproduces_labeled_states) {
  for (int nu = 0; nu < 16; ++nu) {
    const auto& row = fixtures::kTable1[nu];
    AnalysisSetting s(row[0], row[1], row[2], row[3]);
    Vector2c a = analysis_state(s, Arm::signal), b = analysis_state(s, Arm::idler);
    Vector2c la = fixtures::labeled_state(fixtures::kTable1Labels[nu][0]);
    Vector2c lb = fixtures::labeled_state(fixtures::kTable1Labels[nu][1]);
    EXPECT_GE(std::abs(a.dot(la)), 1 - 1e-9) << "row " << nu + 1;
    EXPECT_GE(std::abs(b.dot(lb)), 1 - 1e-9) << "row " << nu + 1;
    EXPECT_GE(oracle::overlap(a, oracle::analyzed_state(row[0], row[1])), 1 - 1e-9);
    EXPECT_GE(oracle::overlap(b, oracle::analyzed_state(row[2], row[3])), 1 - 1e-9);
  }
}

TEST(Table1, row5_is_right_circular) {
  Vector2c r = analysis_state(AnalysisSetting(22.5, 0, 22.5, 0), Arm::signal);
  EXPECT_GE(std::abs(r.dot(pol::R())), 1 - 1e-12);
}

TEST(Projectors, condition_number_is_stable) {
  auto a = build_projectors(fixtures::table1_settings());
  auto b = build_projectors(fixtures::table1_settings());
  EXPECT_EQ(a.condition_number(), b.condition_number());
  EXPECT_NEAR(a.condition_number(), 7.7505, 1e-3);
  for (int nu = 0; nu < 16; ++nu) {
    EXPECT_EQ(a[nu], b[nu]);
    EXPECT_LT(oracle::max_abs(a[nu] * a[nu] - a[nu]), 1e-12);
  }
}

TEST(Projectors, incomplete_settings_rejected) {
  auto s = fixtures::table1_settings();
  s[15] = s[0];
  EXPECT_THROW(build_projectors(s), CompletenessError);
  std::array<AnalysisSetting, 15> short_list{};
  EXPECT_THROW(build_projectors(short_list), ValidationError);
}

TEST(Projectors, identity_dbs_changes_nothing) {
  DbsCalibration id{Matrix2c::Identity(), Matrix2c::Identity()};
  auto p = build_projectors(fixtures::table1_settings(), id);
  for (int nu = 0; nu < 16; ++nu) EXPECT_LT(oracle::max_abs(p[nu] - table1()[nu]), 1e-15);
}

TEST(Projectors, unitary_dbs_pulls_states_back) {
  oracle::Gen g(41);
  Matrix2c jt = g.unitary<2>(), jr = g.unitary<2>();
  auto p = build_projectors(fixtures::table1_settings(), DbsCalibration{jt, jr});
  Matrix4c j = oracle::kron(jt, jr);
  DensityMatrix rho(g.density());
  DensityMatrix after(j * rho.matrix() * j.adjoint());
  auto with_dbs = expected_counts(rho, p, 1000.0);
  auto plain = expected_counts(after, table1(), 1000.0);
  for (int nu = 0; nu < 16; ++nu) EXPECT_NEAR(with_dbs[nu], plain[nu], 1e-9);
}

TEST(ExpectedCounts, match_born_rule_oracle) {
  oracle::Gen g(42);
  auto states = oracle::table1_states(fixtures::kTable1);
  for (int t = 0; t < 100; ++t) {
    Matrix4c m = g.density();
    auto n = expected_counts(DensityMatrix(m), table1(), 1e4);
    auto o = oracle::born_counts(m, states, 1e4);
    for (int nu = 0; nu < 16; ++nu) EXPECT_NEAR(n[nu], o[nu], 1e-9);
    EXPECT_NEAR(n[0] + n[1] + n[2] + n[3], 1e4, 1e-8);
  }
  EXPECT_THROW(expected_counts(DensityMatrix::maximally_mixed(), table1(), 0.0), ValidationError);
}

TEST(SimulateCounts, deterministic_and_unbiased) {
  auto rho = DensityMatrix::maximally_mixed();
  auto a = simulate_counts(rho, table1(), 1e4, 7);
  auto b = simulate_counts(rho, table1(), 1e4, 7);
  auto c = simulate_counts(rho, table1(), 1e4, 8);
  EXPECT_EQ(a, b);
  EXPECT_NE(a.counts, c.counts);
  EXPECT_EQ(a.origin, CountOrigin::simulated);
  EXPECT_EQ(*a.seed, 7u);
  double sum = 0;
  for (int s = 0; s < 200; ++s) sum += simulate_counts(rho, table1(), 1e4, 100 + s).counts[0];
  EXPECT_NEAR(sum / 200, 2500.0, 4 * std::sqrt(2500.0 / 200));
  auto zero = simulate_counts(density_from_pure(PureQuquart::basis(0)), table1(), 1e4, 3);
  EXPECT_EQ(zero.counts[1], 0);
}

TEST(EstimateTotal, first_four_and_linear) {
  auto rec = fixtures::load_dataset("pure_30deg_hwp").counts;
  EXPECT_EQ(estimate_total(rec), 6118 + rec.counts[1] + rec.counts[2] + rec.counts[3]);
  CountRecord scaled = rec;
  for (auto& n : scaled.counts) n *= 7;
  EXPECT_EQ(estimate_total(scaled), 7 * estimate_total(rec));
  EXPECT_LT(oracle::max_abs(linear_reconstruct(scaled, table1()).rho - linear_reconstruct(rec, table1()).rho),
            1e-12);
}

TEST(Linear, exact_on_basis_state) {
  CountRecord rec = oracle_counts(density_from_pure(PureQuquart::basis(0)).matrix(), 1e6);
  auto r = linear_reconstruct(rec, table1());
  Matrix4c expect = Matrix4c::Zero();
  expect(0, 0) = 1;
  EXPECT_LT(oracle::max_abs(r.rho - expect), 1e-12);
  EXPECT_EQ(r.method, ReconstructionMethod::linear);
}

TEST(Linear, noiseless_round_trip) {
  oracle::Gen g(43);
  for (int t = 0; t < 200; ++t) {
    Matrix4c m = g.density();
    auto r = linear_reconstruct(oracle_counts(m, 1e9), table1());
    EXPECT_LT(oracle::max_abs(r.rho - m), 1e-6);
  }
}

TEST(Linear, paper_counts_give_hermitian_unit_trace) {
  for (auto name : fixtures::kDatasetNames) {
    auto r = linear_reconstruct(fixtures::load_dataset(name).counts, table1());
    EXPECT_LT(oracle::max_abs(r.rho - r.rho.adjoint()), 1e-12);
    EXPECT_NEAR(r.rho.trace().real(), 1.0, 1e-12);
    EXPECT_EQ(r.physical, r.eigenvalues(0) >= -1e-10);
  }
}

TEST(Linear, zero_counts_degenerate) {
  CountRecord rec;
  EXPECT_THROW(linear_reconstruct(rec, table1()), DegenerateDataError);
  EXPECT_THROW(mle_reconstruct(rec, table1()), DegenerateDataError);
}

TEST(Counts, validation) {
  CountRecord rec;
  rec.counts[3] = -1;
  EXPECT_THROW(rec.validate(), ValidationError);
  rec.counts[3] = 1;
  rec.duration_s = 0;
  EXPECT_THROW(rec.validate(), ValidationError);
}

TEST(Mle, noiseless_fidelity) {
  oracle::Gen g(44);
  for (int t = 0; t < 30; ++t) {
    Matrix4c m = g.density();
    auto r = mle_reconstruct(oracle_counts(m, 1e9), table1());
    EXPECT_GE(fidelity(r.density(), DensityMatrix(m)), 1 - 1e-6);
    expect_physical(r.rho);
  }
}

TEST(Mle, physical_and_cost_monotone_on_noisy_data) {
  oracle::Gen g(45);
  for (int t = 0; t < 30; ++t) {
    DensityMatrix rho(g.density(t % 4 + 1));
    auto rec = simulate_counts(rho, table1(), 500.0, 900 + t);
    auto r = mle_reconstruct(rec, table1());
    expect_physical(r.rho);
    EXPECT_LE(r.likelihood, mle_cost(r.seed_rho->matrix(), rec, table1()) + 1e-12);
    EXPECT_NEAR(mle_cost(r.rho, rec, table1()), r.likelihood, 1e-8 * std::max(1.0, r.likelihood));
    EXPECT_TRUE(r.physical);
  }
}

TEST(Mle, paper_counts) {
  for (auto name : fixtures::kDatasetNames) {
    auto ds = fixtures::load_dataset(name);
    auto r = mle_reconstruct(ds.counts, table1());
    expect_physical(r.rho);
    EXPECT_LE(r.likelihood, mle_cost(r.seed_rho->matrix(), ds.counts, table1()));
    EXPECT_GE(fidelity(r.density(), ds.rho_exp()), 0.85) << name;
  }
}

TEST(Mle, pure_dataset_purity_in_range) {
  auto r = mle_reconstruct(fixtures::load_dataset("pure_30deg_hwp").counts, table1());
  double p = purity(r.density());
  EXPECT_GE(p, 0.90);
  EXPECT_LE(p, 1.0);
}

TEST(Mle, poisson_model) {
  MleOptions opt;
  opt.likelihood = LikelihoodModel::poisson;
  oracle::Gen g(46);
  Matrix4c m = g.density();
  auto r = mle_reconstruct(oracle_counts(m, 1e8), table1(), std::nullopt, opt);
  EXPECT_GE(fidelity(r.density(), DensityMatrix(m)), 1 - 1e-5);
  expect_physical(r.rho);
}

TEST(Mle, iteration_cap_raises_with_best_estimate) {
  MleOptions opt;
  opt.simplex.max_iterations = 20;
  auto rec = fixtures::load_dataset("mixed_pump30").counts;
  try {
    mle_reconstruct(rec, table1(), std::nullopt, opt);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    expect_physical(e.best_so_far().rho);
    EXPECT_FALSE(e.best_so_far().cost_trace.empty());
  }
}

TEST(Mle, explicit_seed) {
  auto rec = fixtures::load_dataset("mixed_pump45").counts;
  auto r = mle_reconstruct(rec, table1(), DensityMatrix::maximally_mixed());
  EXPECT_LT(oracle::max_abs(r.seed_rho->matrix() - Matrix4c::Identity() / 4.0), 1e-12);
  expect_physical(r.rho);
}

TEST(Parameterization, triangular_round_trip) {
  oracle::Gen g(47);
  for (int t = 0; t < 100; ++t) {
    Matrix4c m = detail::repair_positivity(g.density());
    Matrix4c tri = detail::triangular_factor(m);
    EXPECT_LT(oracle::max_abs(tri.adjoint() * tri - m), 1e-12);
    auto params = detail::params_from_triangular(tri);
    EXPECT_EQ(params.size(), 16);
    EXPECT_LT(oracle::max_abs(detail::density_from_params(params) - m), 1e-12);
  }
}

TEST(Parameterization, repair_floors_negative_eigenvalues) {
  Matrix4c m = Matrix4c::Zero();
  m(0, 0) = 1.1;
  m(1, 1) = -0.1;
  Matrix4c r = detail::repair_positivity(m);
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(r);
  EXPECT_NEAR(es.eigenvalues().minCoeff(), 1e-6 / (1.1 + 3e-6), 1e-12);
  EXPECT_NEAR(r.trace().real(), 1.0, 1e-12);
}

TEST(Bootstrap, deterministic_and_thread_independent) {
  auto rec = fixtures::load_dataset("pure_30deg_hwp").counts;
  auto a = error_monte_carlo(rec, table1(), 50, 99);
  auto b = error_monte_carlo(rec, table1(), 50, 99, {}, 3);
  EXPECT_EQ(a.delta_rho, b.delta_rho);
  EXPECT_EQ(a.delta_re, b.delta_re);
  EXPECT_EQ(a.excluded, b.excluded);
  EXPECT_EQ(a.resamples, 50);
  auto c = error_monte_carlo(rec, table1(), 50, 100);
  EXPECT_NE(a.delta_rho, c.delta_rho);
  EXPECT_GT(a.delta_rho.minCoeff(), 0.0);
  EXPECT_LT(a.delta_rho.maxCoeff(), 0.05);
}

TEST(Bootstrap, seeds_are_order_independent) {
  EXPECT_EQ(resample_seed(5, 17), resample_seed(5, 17));
  EXPECT_NE(resample_seed(5, 17), resample_seed(5, 18));
  EXPECT_NE(resample_seed(5, 17), resample_seed(6, 17));
}

TEST(Bootstrap, needs_fifty_resamples) {
  auto rec = fixtures::load_dataset("pure_30deg_hwp").counts;
  EXPECT_THROW(error_monte_carlo(rec, table1(), 49, 1), ValidationError);
}

TEST(Compare, identity_and_reference_pairs) {
  oracle::Gen g(48);
  DensityMatrix r(g.density());
  auto self = compare_states(r, r);
  EXPECT_NEAR(self.fidelity, 1.0, 1e-8);
  EXPECT_NEAR(self.trace_distance, 0.0, 1e-12);
  EXPECT_EQ(self.max_abs_difference, 0.0);
  auto m30 = fixtures::load_dataset("mixed_pump30");
  EXPECT_NEAR(compare_states(m30.rho_theory(), m30.rho_exp()).fidelity, 0.987, 0.01);
  auto m45 = fixtures::load_dataset("mixed_pump45");
  auto c = compare_states(m45.rho_theory(), m45.rho_exp());
  EXPECT_NEAR(c.fidelity, 0.989, 0.01);
  EXPECT_NEAR(c.purity_a, 0.5, 1e-12);
  EXPECT_NEAR(c.entropy_a, 0.5, 1e-12);
}

TEST(Simplex, minimizes_quadratic_and_never_worsens) {
  auto f = [](const Eigen::VectorXd& x) {
    double s = 0;
    for (int i = 0; i < x.size(); ++i) s += (i + 1) * (x(i) - 0.5 * i) * (x(i) - 0.5 * i);
    return s;
  };
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(6);
  auto r = nelder_mead(f, x0, {});
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.value, 1e-9);
  EXPECT_LE(r.value, f(x0));
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(r.x(i), 0.5 * i, 1e-4);
  for (std::size_t k = 1; k < r.cost_trace.size(); ++k) EXPECT_LE(r.cost_trace[k], r.cost_trace[k - 1]);
}
