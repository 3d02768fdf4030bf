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

// Prepares a partially entangled state, simulates a tomography run on the
// Table I settings and reconstructs it.

#include <cstdio>

#include "ququart/ququart.hpp"

int main() {
  using namespace ququart;
  std::vector<WaveplateSpec> u1 = {WaveplateSpec(WaveplateKind::quarter, 823.5, 15.0)};
  PureQuquart psi = schmidt_scheme_state(0.8, 0.3, u1, {});
  DensityMatrix rho = density_from_pure(psi);

  const ProjectorSet& proj = fixtures::default_projectors();
  CountRecord counts = simulate_counts(rho, proj, 2e4, 42, 180.0);
  ReconstructionResult lin = linear_reconstruct(counts, proj);
  ReconstructionResult mle = mle_reconstruct(counts, proj);
  ErrorEstimate err = error_monte_carlo(counts, proj, 100, 7);

  std::printf("concurrence: prepared %.4f, reconstructed %.4f\n", concurrence_pure(psi),
              concurrence_mixed(mle.density()));
  std::printf("purity: %.4f  entropy: %.4f\n", purity(mle.density()), entropy_base4(mle.density()));
  std::printf("fidelity to prepared state: %.4f (linear estimate physical: %s)\n",
              fidelity(mle.density(), rho), lin.physical ? "yes" : "no");
  std::printf("largest bootstrap error: %.4f\n", err.delta_rho.maxCoeff());
  return 0;
}
