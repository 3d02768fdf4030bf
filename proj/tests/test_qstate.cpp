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

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ququart/qstate.hpp"

using namespace ququart;

namespace {

Vector4c v4(cplx a, cplx b, cplx c, cplx d) { return Vector4c(a, b, c, d); }
const double kS = 1.0 / std::sqrt(2.0);

}  // namespace

TEST(PureQuquart, rejects_unnormalized) {
  EXPECT_THROW(PureQuquart(v4(1, 1, 0, 0)), ValidationError);
  EXPECT_NO_THROW(PureQuquart(v4(1 + 3e-7, 0, 0, 0)));
  PureQuquart p(v4(1 + 3e-7, 0, 0, 0));
  EXPECT_NEAR(p.amplitudes().norm(), 1.0, 1e-15);
}

TEST(PureQuquart, canonical_fixes_first_nonzero_phase) {
  PureQuquart p(v4(0, cplx(0, kS), 0, cplx(-kS, 0)));
  auto c = p.canonical();
  EXPECT_NEAR(c[1].imag(), 0.0, 1e-15);
  EXPECT_GT(c[1].real(), 0.0);
  EXPECT_NEAR(phase_insensitive_distance(p, c), 0.0, 1e-12);
}

TEST(DensityMatrix, validates_invariants) {
  Matrix4c m = Matrix4c::Identity() / 4.0;
  EXPECT_NO_THROW(DensityMatrix{m});
  Matrix4c bad = m;
  bad(0, 1) = 1e-6;
  EXPECT_THROW(DensityMatrix{bad}, ValidationError);
  bad = m * 1.01;
  EXPECT_THROW(DensityMatrix{bad}, ValidationError);
  EXPECT_THROW(DensityMatrix::diagonal(0.6, 0.6, -0.2, 0.0), ValidationError);
}

TEST(DensityFromPure, basis_projector) {
  auto rho = density_from_pure(PureQuquart::basis(0));
  Matrix4c expect = Matrix4c::Zero();
  expect(0, 0) = 1.0;
  EXPECT_EQ(rho.matrix(), expect);
}

TEST(DensityFromPure, bell_like) {
  auto rho = density_from_pure(v4(kS, 0, 0, kS));
  for (auto [r, c] : {std::pair{0, 0}, {0, 3}, {3, 0}, {3, 3}}) EXPECT_NEAR(rho.matrix()(r, c).real(), 0.5, 1e-15);
  EXPECT_NEAR(rho.matrix()(1, 1).real(), 0.0, 1e-15);
}

TEST(DensityFromPure, published_diagonal) {
  const double p[4] = {0.5432, 0.2068, 0.1811, 0.0689};
  double norm = p[0] + p[1] + p[2] + p[3];
  Vector4c v;
  for (int i = 0; i < 4; ++i) v(i) = std::polar(std::sqrt(p[i] / norm), 0.3 * i);
  auto rho = density_from_pure(PureQuquart::normalized(v));
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(rho.matrix()(i, i).real(), p[i], 1e-4);
}

TEST(DensityFromPure, rejects_unnormalized) { EXPECT_THROW(density_from_pure(v4(1, 0, 0, 0.01)), ValidationError); }

TEST(Purity, maximally_mixed) { EXPECT_NEAR(purity(DensityMatrix::maximally_mixed()), 0.25, 1e-15); }

TEST(Entropy, reference_values) {
  EXPECT_NEAR(entropy_base4(density_from_pure(v4(0.6, 0, cplx(0, 0.8), 0))), 0.0, 1e-12);
  EXPECT_NEAR(entropy_base4(DensityMatrix::maximally_mixed()), 1.0, 1e-12);
  EXPECT_NEAR(entropy_base4(DensityMatrix::diagonal(0.25, 0, 0, 0.75)), 0.406, 1e-3);
}

TEST(Entropy, clamps_tiny_negative_eigenvalues) {
  Matrix4c m = Matrix4c::Zero();
  m(0, 0) = 1.0 + 5e-11;
  m(1, 1) = -5e-11;
  DensityMatrix rho(m);
  EXPECT_NEAR(entropy_base4(rho), 0.0, 1e-9);
  m(0, 0) = 1.0 + 1e-8;
  m(1, 1) = -1e-8;
  EXPECT_THROW(DensityMatrix{m}, ValidationError);
}

TEST(Entropy, matches_oracle_on_random_states) {
  oracle::Gen g(11);
  for (int t = 0; t < 200; ++t) {
    Matrix4c m = g.density();
    EXPECT_NEAR(entropy_base4(DensityMatrix(m)), oracle::entropy4(m), 1e-9);
    EXPECT_NEAR(purity(DensityMatrix(m)), oracle::purity(m), 1e-12);
  }
}

TEST(Entropy, monotone_on_diagonal_mixtures) {
  double prev_s = -1.0, prev_p = 2.0;
  for (int k = 0; k <= 50; ++k) {
    double p = 0.01 * k;
    auto rho = DensityMatrix::diagonal(p, 0, 0, 1 - p);
    double s = entropy_base4(rho), pur = purity(rho);
    EXPECT_GT(s, prev_s - 1e-15);
    EXPECT_LT(pur, prev_p + 1e-15);
    prev_s = s;
    prev_p = pur;
    auto mirror = DensityMatrix::diagonal(1 - p, 0, 0, p);
    EXPECT_NEAR(entropy_base4(mirror), s, 1e-12);
  }
}

TEST(Fidelity, identity_symmetry_and_pure_form) {
  oracle::Gen g(12);
  for (int t = 0; t < 200; ++t) {
    DensityMatrix a(g.density()), b(g.density());
    EXPECT_NEAR(fidelity(a, a), 1.0, 1e-8);
    double fab = fidelity(a, b);
    EXPECT_NEAR(fab, fidelity(b, a), 1e-9);
    EXPECT_GE(fab, -1e-12);
    EXPECT_LE(fab, 1.0 + 1e-9);
    Vector4c psi = g.pure_state();
    EXPECT_NEAR(fidelity(density_from_pure(psi), b), oracle::fidelity_pure(psi, b.matrix()), 1e-8);
  }
}

TEST(TraceDistance, basic) {
  auto a = DensityMatrix::diagonal(1, 0, 0, 0);
  auto b = DensityMatrix::diagonal(0, 0, 0, 1);
  EXPECT_NEAR(trace_distance(a, b), 1.0, 1e-12);
  EXPECT_NEAR(trace_distance(a, a), 0.0, 1e-12);
}

TEST(ConcurrencePure, reference_values) {
  EXPECT_EQ(concurrence_pure(PureQuquart::basis(3)), 0.0);
  EXPECT_NEAR(concurrence_pure(PureQuquart(v4(kS, 0, 0, kS))), 1.0, 1e-12);
  EXPECT_NEAR(concurrence_pure(PureQuquart(v4(0.8, 0, 0, 0.6))), 0.96, 1e-12);
}

TEST(ConcurrencePure, separability_criterion_both_directions) {
  oracle::Gen g(13);
  for (int t = 0; t < 1000; ++t) {
    Vector4c prod = g.product_state();
    PureQuquart p(prod);
    EXPECT_TRUE(is_product_state(p));
    EXPECT_NEAR(concurrence_pure(p), 0.0, 1e-9);
    Vector4c pert = prod;
    double eps = std::pow(10.0, g.uniform(-6, -1));
    pert(g.integer(0, 3)) += eps * g.gaussian();
    PureQuquart q = PureQuquart::normalized(pert);
    double gap = std::abs(q[0] * q[3] - q[1] * q[2]);
    EXPECT_EQ(is_product_state(q), gap < 1e-9);
    EXPECT_NEAR(concurrence_pure(q), 2 * gap, 1e-12);
  }
}

TEST(ConcurrenceMixed, reference_values) {
  EXPECT_NEAR(concurrence_mixed(density_from_pure(v4(kS, 0, 0, kS))), 1.0, 1e-8);
  EXPECT_NEAR(concurrence_mixed(DensityMatrix::diagonal(0.5, 0, 0, 0.5)), 0.0, 1e-12);
  EXPECT_NEAR(concurrence_mixed(DensityMatrix::diagonal(0.25, 0, 0, 0.75)), 0.0, 1e-12);
}

TEST(ConcurrenceMixed, matches_wootters_oracle) {
  oracle::Gen g(14);
  for (int t = 0; t < 300; ++t) {
    Matrix4c m = g.density();
    EXPECT_NEAR(concurrence_mixed(DensityMatrix(m)), oracle::concurrence(m), 1e-7) << "case " << t;
  }
}

TEST(ConcurrenceMixed, agrees_with_pure_formula_on_rank_one) {
  oracle::Gen g(15);
  for (int t = 0; t < 300; ++t) {
    PureQuquart p(g.pure_state());
    EXPECT_NEAR(concurrence_mixed(density_from_pure(p)), concurrence_pure(p), 1e-8);
  }
}

TEST(Invariance, entropy_under_global_unitaries) {
  oracle::Gen g(16);
  for (int t = 0; t < 300; ++t) {
    Matrix4c m = g.density();
    Matrix4c u = g.unitary<4>();
    Matrix4c rot = u * m * u.adjoint();
    EXPECT_NEAR(entropy_base4(DensityMatrix(rot)), entropy_base4(DensityMatrix(m)), 1e-9);
  }
}

TEST(Invariance, concurrence_under_local_unitaries) {
  oracle::Gen g(17);
  for (int t = 0; t < 300; ++t) {
    Matrix4c m = g.density();
    Matrix4c u = kron(Matrix2c(g.unitary<2>()), Matrix2c(g.unitary<2>()));
    Matrix4c rot = u * m * u.adjoint();
    EXPECT_NEAR(concurrence_mixed(DensityMatrix(rot)), concurrence_mixed(DensityMatrix(m)), 1e-8);
  }
}

TEST(Schmidt, product_state) {
  auto s = schmidt_decompose(PureQuquart::basis(0));
  EXPECT_NEAR(s.chi1, 1.0, 1e-12);
  EXPECT_NEAR(s.chi2, 0.0, 1e-12);
  EXPECT_NEAR(std::abs(s.a1(0)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(s.a2(0)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(s.b1(1)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(s.b2(1)), 1.0, 1e-12);
}

TEST(Schmidt, maximally_entangled) {
  auto s = schmidt_decompose(PureQuquart(v4(kS, 0, 0, kS)));
  EXPECT_NEAR(s.chi1, 0.5, 1e-12);
  EXPECT_NEAR(s.chi2, 0.5, 1e-12);
}

TEST(Schmidt, random_states_satisfy_invariants) {
  oracle::Gen g(18);
  for (int t = 0; t < 1000; ++t) {
    Vector4c v = t % 10 == 0 ? g.product_state() : g.pure_state();
    PureQuquart p(v);
    auto s = schmidt_decompose(p);
    EXPECT_NEAR(s.chi1 + s.chi2, 1.0, 1e-9);
    EXPECT_GE(s.chi1, s.chi2);
    EXPECT_GE(s.chi2, -1e-15);
    EXPECT_NEAR(std::abs(s.a1.dot(s.b1)), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(s.a2.dot(s.b2)), 0.0, 1e-9);
    EXPECT_LE(phase_insensitive_distance(PureQuquart::normalized(s.reassemble()), p), 1e-8);
    EXPECT_NEAR(2 * std::sqrt(s.chi1 * s.chi2), concurrence_pure(p), 1e-8);
    auto chi = oracle::schmidt_coefficients(v);
    EXPECT_NEAR(s.chi1, chi[0], 1e-9);
    EXPECT_NEAR(s.chi2, chi[1], 1e-9);
  }
}
