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

#ifndef QUQUART_TOMO_HPP
#define QUQUART_TOMO_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ququart/error.hpp"
#include "ququart/linalg.hpp"
#include "ququart/optics.hpp"
#include "ququart/qstate.hpp"
#include "ququart/simplex.hpp"

/// Sixteen-setting polarization tomography of a ququart: projector
/// construction, count prediction and simulation, linear inversion,
/// maximum-likelihood reconstruction and bootstrap error bars.
namespace ququart {

inline constexpr int kSettings = 16;

enum class Arm { signal, idler };

/// Fast-axis angles (degrees) of the analysis waveplates in both arms. Angles
/// are measured from the vertical axis, the same convention as the
/// preparation waveplate.
struct AnalysisSetting {
  double hwp1 = 0.0, qwp1 = 0.0, hwp2 = 0.0, qwp2 = 0.0;

  AnalysisSetting() = default;
  AnalysisSetting(double h1, double q1, double h2, double q2)
      : hwp1(wrap_degrees(h1)), qwp1(wrap_degrees(q1)), hwp2(wrap_degrees(h2)),
        qwp2(wrap_degrees(q2)) {}

  friend bool operator==(const AnalysisSetting&, const AnalysisSetting&) = default;
};

/// Jones matrices of the dichroic beam splitter: `transmit` acts on the
/// signal photon, `reflect` on the idler.
struct DbsCalibration {
  JonesMatrix transmit = JonesMatrix::Identity();
  JonesMatrix reflect = JonesMatrix::Identity();
};

/// State onto which one analysis arm projects. The photon passes the QWP, then
/// the HWP, then a polarizer transmitting vertical light; both plates are
/// ideal at the arm's own wavelength.
inline Vector2c analysis_state(const AnalysisSetting& s, Arm arm) {
  double hwp = arm == Arm::signal ? s.hwp1 : s.hwp2;
  double qwp = arm == Arm::signal ? s.qwp1 : s.qwp2;
  constexpr double lambda = 1.0;  // plates are evaluated at their design wavelength
  JonesMatrix h = waveplate_jones({WaveplateKind::half, lambda, hwp, AngleReference::from_vertical}, lambda);
  JonesMatrix q =
      waveplate_jones({WaveplateKind::quarter, lambda, qwp, AngleReference::from_vertical}, lambda);
  return (h * q).adjoint() * pol::V();
}

/// The sixteen rank-one measurement projectors and the linear system that
/// maps a Hermitian matrix onto their expectation values.
class ProjectorSet {
 public:
  ProjectorSet(std::span<const AnalysisSetting> settings, std::optional<DbsCalibration> dbs = {})
      : dbs_(dbs) {
    if (settings.size() != kSettings) {
      std::ostringstream os;
      os << "tomography needs " << kSettings << " settings, got " << settings.size();
      throw ValidationError(os.str());
    }
    std::copy(settings.begin(), settings.end(), settings_.begin());
    for (int nu = 0; nu < kSettings; ++nu) {
      Vector2c a = analysis_state(settings_[nu], Arm::signal);
      Vector2c b = analysis_state(settings_[nu], Arm::idler);
      if (dbs_) {
        // The photon meets the DBS before the analysis optics, so the measured
        // state is pulled back through J^dagger (J^-1 for a unitary DBS).
        a = (dbs_->transmit.adjoint() * a).eval();
        b = (dbs_->reflect.adjoint() * b).eval();
        if (a.norm() == 0 || b.norm() == 0)
          throw CompletenessError("DBS calibration annihilates an analysis state");
        a.normalize();
        b.normalize();
      }
      states_[nu] = kron(a, b);
      projectors_[nu] = states_[nu] * states_[nu].adjoint();
    }
    const auto& basis = detail::hermitian_basis4();
    for (int nu = 0; nu < kSettings; ++nu)
      for (int k = 0; k < 16; ++k) system_(nu, k) = (projectors_[nu] * basis[k]).trace().real();
    Eigen::JacobiSVD<Eigen::Matrix<double, 16, 16>> svd(system_);
    const auto& sv = svd.singularValues();
    condition_ = sv(15) > 0 ? sv(0) / sv(15) : std::numeric_limits<double>::infinity();
    if (!std::isfinite(condition_) || condition_ > 1e10) {
      std::ostringstream os;
      os << "measurement settings are not tomographically complete (condition number "
         << condition_ << ")";
      throw CompletenessError(os.str());
    }
    solver_ = system_.fullPivLu();
  }

  const Matrix4c& operator[](int nu) const { return projectors_[nu]; }
  const Vector4c& state(int nu) const { return states_[nu]; }
  const std::array<AnalysisSetting, kSettings>& settings() const { return settings_; }
  const std::optional<DbsCalibration>& dbs() const { return dbs_; }
  double condition_number() const { return condition_; }

  /// Hermitian matrix whose projector expectations are `frequencies`.
  Matrix4c invert(const Eigen::Matrix<double, 16, 1>& frequencies) const {
    Eigen::Matrix<double, 16, 1> x = solver_.solve(frequencies);
    const auto& basis = detail::hermitian_basis4();
    Matrix4c m = Matrix4c::Zero();
    for (int k = 0; k < 16; ++k) m += x(k) * basis[k];
    return m;
  }

 private:
  std::array<AnalysisSetting, kSettings> settings_;
  std::optional<DbsCalibration> dbs_;
  std::array<Vector4c, kSettings> states_;
  std::array<Matrix4c, kSettings> projectors_;
  Eigen::Matrix<double, 16, 16> system_;
  Eigen::FullPivLU<Eigen::Matrix<double, 16, 16>> solver_;
  double condition_ = 0.0;
};

inline ProjectorSet build_projectors(std::span<const AnalysisSetting> settings,
                                     std::optional<DbsCalibration> dbs = {}) {
  return ProjectorSet(settings, dbs);
}

enum class CountOrigin { paper_fixture, simulated, external };

/// Coincidence counts n_1..n_16 (stored zero-based).
struct CountRecord {
  std::array<std::int64_t, kSettings> counts{};
  double duration_s = 1.0;
  CountOrigin origin = CountOrigin::external;
  std::optional<std::uint64_t> seed;

  void validate() const {
    for (int nu = 0; nu < kSettings; ++nu)
      if (counts[nu] < 0) {
        std::ostringstream os;
        os << "count n_" << nu + 1 << " is negative";
        throw ValidationError(os.str());
      }
    if (!(duration_s > 0)) throw ValidationError("acquisition duration must be positive");
  }

  friend bool operator==(const CountRecord&, const CountRecord&) = default;
};

/// N * Tr[rho Pi_nu] for every setting.
inline std::array<double, kSettings> expected_counts(const DensityMatrix& rho,
                                                     const ProjectorSet& projectors, double total) {
  if (!(total > 0)) throw ValidationError("total count rate must be positive");
  std::array<double, kSettings> out{};
  for (int nu = 0; nu < kSettings; ++nu) {
    const Vector4c& v = projectors.state(nu);
    double p = v.dot(rho.matrix() * v).real();
    out[nu] = total * std::clamp(p, 0.0, 1.0);
  }
  return out;
}

/// Independent Poisson draws around the Born-rule expectations.
inline CountRecord simulate_counts(const DensityMatrix& rho, const ProjectorSet& projectors,
                                   double total, std::uint64_t seed, double duration_s = 1.0) {
  auto mean = expected_counts(rho, projectors, total);
  std::mt19937_64 rng(seed);
  CountRecord rec;
  for (int nu = 0; nu < kSettings; ++nu) {
    if (mean[nu] <= 0) {
      rec.counts[nu] = 0;
      continue;
    }
    std::poisson_distribution<std::int64_t> dist(mean[nu]);
    rec.counts[nu] = dist(rng);
  }
  rec.duration_s = duration_s;
  rec.origin = CountOrigin::simulated;
  rec.seed = seed;
  return rec;
}

/// n1 + n2 + n3 + n4: the first four settings of the standard table are the
/// H/V product basis and resolve the identity.
inline double estimate_total(const CountRecord& counts) {
  return static_cast<double>(counts.counts[0] + counts.counts[1] + counts.counts[2] +
                             counts.counts[3]);
}

enum class ReconstructionMethod { linear, mle };
enum class LikelihoodModel { gaussian, poisson };

struct ReconstructionResult {
  Matrix4c rho = Matrix4c::Identity() / 4.0;
  ReconstructionMethod method = ReconstructionMethod::linear;
  /// Minimized cost: the Gaussian chi-square form or the Poisson deviance,
  /// both of which vanish for a perfect fit.
  double likelihood = 0.0;
  long iterations = 0;
  std::optional<DensityMatrix> seed_rho;
  Vector4r eigenvalues = Vector4r::Zero();  // ascending
  bool physical = true;
  std::vector<double> cost_trace;

  /// The estimate as a validated density matrix. Throws ValidationError for
  /// an unphysical linear estimate.
  DensityMatrix density() const { return DensityMatrix(rho); }
};

/// The optimizer hit its iteration cap. Carries the best state reached.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, ReconstructionResult best)
      : Error(what), best_(std::move(best)) {}
  const ReconstructionResult& best_so_far() const noexcept { return best_; }

 private:
  ReconstructionResult best_;
};

namespace detail {

inline Eigen::Matrix<double, 16, 1> frequencies(const CountRecord& counts) {
  counts.validate();
  double total = estimate_total(counts);
  if (!(total > 0))
    throw DegenerateDataError("total counts n1+n2+n3+n4 are zero; nothing to reconstruct");
  Eigen::Matrix<double, 16, 1> f;
  for (int nu = 0; nu < kSettings; ++nu) f(nu) = static_cast<double>(counts.counts[nu]) / total;
  return f;
}

inline Vector4r sorted_eigenvalues(const Matrix4c& m) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// Lower-triangular T from 16 reals: four diagonal entries followed by the
/// real/imaginary parts of T10, T21, T32, T20, T31, T30.
inline Matrix4c triangular_from_params(const Eigen::VectorXd& t) {
  Matrix4c m = Matrix4c::Zero();
  for (int i = 0; i < 4; ++i) m(i, i) = t(i);
  static constexpr int kOff[6][2] = {{1, 0}, {2, 1}, {3, 2}, {2, 0}, {3, 1}, {3, 0}};
  for (int k = 0; k < 6; ++k) m(kOff[k][0], kOff[k][1]) = cplx(t(4 + 2 * k), t(5 + 2 * k));
  return m;
}

inline Eigen::VectorXd params_from_triangular(const Matrix4c& m) {
  Eigen::VectorXd t(16);
  for (int i = 0; i < 4; ++i) t(i) = m(i, i).real();
  static constexpr int kOff[6][2] = {{1, 0}, {2, 1}, {3, 2}, {2, 0}, {3, 1}, {3, 0}};
  for (int k = 0; k < 6; ++k) {
    t(4 + 2 * k) = m(kOff[k][0], kOff[k][1]).real();
    t(5 + 2 * k) = m(kOff[k][0], kOff[k][1]).imag();
  }
  return t;
}

/// rho(t) = T^dagger T / Tr[T^dagger T].
inline Matrix4c density_from_params(const Eigen::VectorXd& t) {
  Matrix4c tm = triangular_from_params(t);
  Matrix4c m = tm.adjoint() * tm;
  return hermitian_part(Matrix4c(m / m.trace().real()));
}

/// Lower-triangular T with T^dagger T = rho, for positive definite rho.
inline Matrix4c triangular_factor(const Matrix4c& rho) {
  // With P the index reversal, P rho P = L L^dagger gives rho = T^dagger T for
  // T = P L^dagger P, which is lower triangular.
  Matrix4c flipped = rho.reverse();
  Eigen::LLT<Matrix4c> llt(flipped);
  if (llt.info() != Eigen::Success) throw ValidationError("seed matrix is not positive definite");
  Matrix4c l = llt.matrixL();
  return Matrix4c(l.adjoint()).reverse();
}

/// Clamp eigenvalues below `floor` up to it, renormalize the trace.
inline Matrix4c repair_positivity(const Matrix4c& m, double floor = 1e-6) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(hermitian_part(m));
  Vector4r w = es.eigenvalues().cwiseMax(floor);
  w /= w.sum();
  return hermitian_part(Matrix4c(es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint()));
}

}  // namespace detail

/// Solves Tr[rho Pi_nu] = n_nu / N for a Hermitian unit-trace matrix. The
/// result may have negative eigenvalues; `physical` reports that.
inline ReconstructionResult linear_reconstruct(const CountRecord& counts,
                                               const ProjectorSet& projectors) {
  auto f = detail::frequencies(counts);
  Matrix4c m = detail::hermitian_part(projectors.invert(f));
  double tr = m.trace().real();
  if (std::abs(tr) > 0) m /= tr;
  ReconstructionResult r;
  r.rho = m;
  r.method = ReconstructionMethod::linear;
  r.eigenvalues = detail::sorted_eigenvalues(m);
  r.physical = r.eigenvalues(0) >= -Tolerances{}.positivity;
  return r;
}

struct MleOptions {
  LikelihoodModel likelihood = LikelihoodModel::gaussian;
  SimplexOptions simplex{};
  /// Lower bound on predicted counts inside the cost.
  double expected_floor = 1e-9;
  /// Eigenvalue floor applied to the linear estimate before factorization.
  double seed_floor = 1e-6;
};

/// Cost of a density matrix against counts under the chosen likelihood
/// model, with N = n1 + n2 + n3 + n4.
inline double mle_cost(const Matrix4c& rho, const CountRecord& counts,
                       const ProjectorSet& projectors, const MleOptions& opt = {}) {
  double total = estimate_total(counts);
  double cost = 0.0;
  for (int nu = 0; nu < kSettings; ++nu) {
    const Vector4c& v = projectors.state(nu);
    double e = std::max(total * v.dot(rho * v).real(), opt.expected_floor);
    double n = static_cast<double>(counts.counts[nu]);
    if (opt.likelihood == LikelihoodModel::gaussian) {
      cost += (e - n) * (e - n) / (2.0 * e);
    } else {
      cost += e - n;
      if (n > 0) cost += n * std::log(n / e);
    }
  }
  return cost;
}

/// Maximum-likelihood density matrix over rho = T^dagger T / Tr[T^dagger T]
/// with T lower triangular, minimized by Nelder-Mead from the
/// positivity-repaired linear estimate (or `seed_rho`).
inline ReconstructionResult mle_reconstruct(const CountRecord& counts,
                                            const ProjectorSet& projectors,
                                            std::optional<DensityMatrix> seed_rho = {},
                                            const MleOptions& opt = {}) {
  detail::frequencies(counts);  // validates and rejects empty data
  Matrix4c seed;
  if (seed_rho) {
    seed = detail::repair_positivity(seed_rho->matrix(), opt.seed_floor);
  } else {
    seed = detail::repair_positivity(linear_reconstruct(counts, projectors).rho, opt.seed_floor);
  }
  DensityMatrix seed_dm(seed);

  const double total = estimate_total(counts);
  std::array<double, kSettings> n{};
  for (int nu = 0; nu < kSettings; ++nu) n[nu] = static_cast<double>(counts.counts[nu]);

  auto cost = [&](const Eigen::VectorXd& t) {
    Matrix4c tm = detail::triangular_from_params(t);
    double norm = tm.squaredNorm();
    if (!(norm > 0)) return std::numeric_limits<double>::infinity();
    double c = 0.0;
    for (int nu = 0; nu < kSettings; ++nu) {
      double e = std::max(total * (tm * projectors.state(nu)).squaredNorm() / norm, opt.expected_floor);
      if (opt.likelihood == LikelihoodModel::gaussian) {
        c += (e - n[nu]) * (e - n[nu]) / (2.0 * e);
      } else {
        c += e - n[nu];
        if (n[nu] > 0) c += n[nu] * std::log(n[nu] / e);
      }
    }
    return c;
  };

  Eigen::VectorXd t0 = detail::params_from_triangular(detail::triangular_factor(seed));
  SimplexResult sr = nelder_mead(cost, t0, opt.simplex);

  ReconstructionResult r;
  r.method = ReconstructionMethod::mle;
  r.rho = detail::density_from_params(sr.x);
  r.likelihood = sr.value;
  r.iterations = sr.iterations;
  r.seed_rho = seed_dm;
  r.eigenvalues = detail::sorted_eigenvalues(r.rho);
  r.physical = true;
  r.cost_trace = sr.cost_trace;
  if (!sr.converged) {
    std::ostringstream os;
    os << "maximum-likelihood search did not converge within " << opt.simplex.max_iterations
       << " iterations (best cost " << sr.value << ")";
    throw ConvergenceError(os.str(), std::move(r));
  }
  return r;
}

/// Element-wise bootstrap standard deviations of the MLE estimate.
struct ErrorEstimate {
  Matrix4r delta_rho = Matrix4r::Zero();  // hypot(delta_re, delta_im)
  Matrix4r delta_re = Matrix4r::Zero();
  Matrix4r delta_im = Matrix4r::Zero();
  int resamples = 0;
  int excluded = 0;
  std::uint64_t master_seed = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Seed of bootstrap resample `index`; depends only on the master seed and
/// the index so resamples can run in any order.
inline std::uint64_t resample_seed(std::uint64_t master_seed, int index) {
  return detail::splitmix64(detail::splitmix64(master_seed) + static_cast<std::uint64_t>(index));
}

/// Parametric bootstrap: each n_nu is redrawn as Poisson(n_nu) and the MLE
/// repeated. A resample that fails to converge is retried once from a
/// perturbed seed and then dropped; more than 10% dropped is an
/// EstimationError. `threads` > 1 splits the work without changing the result.
inline ErrorEstimate error_monte_carlo(const CountRecord& counts, const ProjectorSet& projectors,
                                       int resamples, std::uint64_t master_seed,
                                       const MleOptions& opt = {}, int threads = 1) {
  if (resamples < 50) throw ValidationError("bootstrap needs at least 50 resamples");
  counts.validate();

  std::vector<std::optional<Matrix4c>> results(resamples);
  auto run_one = [&](int k) {
    std::mt19937_64 rng(resample_seed(master_seed, k));
    CountRecord rec = counts;
    for (int nu = 0; nu < kSettings; ++nu) {
      rec.counts[nu] = 0;
      if (counts.counts[nu] > 0) {
        std::poisson_distribution<std::int64_t> dist(static_cast<double>(counts.counts[nu]));
        rec.counts[nu] = dist(rng);
      }
    }
    rec.origin = CountOrigin::simulated;
    rec.seed = resample_seed(master_seed, k);
    try {
      results[k] = mle_reconstruct(rec, projectors, {}, opt).rho;
      return;
    } catch (const ConvergenceError&) {
    } catch (const DegenerateDataError&) {
      return;
    }
    try {
      Matrix4c lin = detail::repair_positivity(linear_reconstruct(rec, projectors).rho);
      Matrix4c perturbed = 0.9 * lin + 0.1 * Matrix4c::Identity() / 4.0;
      results[k] = mle_reconstruct(rec, projectors, DensityMatrix(perturbed), opt).rho;
    } catch (const ConvergenceError&) {
    }
  };

  threads = std::max(1, std::min(threads, resamples));
  if (threads == 1) {
    for (int k = 0; k < resamples; ++k) run_one(k);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&, w] {
        for (int k = w; k < resamples; k += threads) run_one(k);
      });
    for (auto& t : pool) t.join();
  }

  ErrorEstimate est;
  est.resamples = resamples;
  est.master_seed = master_seed;
  std::vector<const Matrix4c*> ok;
  for (const auto& r : results)
    if (r) ok.push_back(&*r);
  est.excluded = resamples - static_cast<int>(ok.size());
  if (est.excluded * 10 > resamples || ok.size() < 2) {
    std::ostringstream os;
    os << est.excluded << " of " << resamples << " bootstrap resamples failed to converge";
    throw EstimationError(os.str());
  }
  Matrix4c mean = Matrix4c::Zero();
  for (const auto* m : ok) mean += *m;
  mean /= static_cast<double>(ok.size());
  Matrix4r var_re = Matrix4r::Zero(), var_im = Matrix4r::Zero();
  for (const auto* m : ok) {
    Matrix4c d = *m - mean;
    var_re += d.real().cwiseAbs2();
    var_im += d.imag().cwiseAbs2();
  }
  double denom = static_cast<double>(ok.size() - 1);
  est.delta_re = (var_re / denom).cwiseSqrt();
  est.delta_im = (var_im / denom).cwiseSqrt();
  est.delta_rho = (est.delta_re.cwiseAbs2() + est.delta_im.cwiseAbs2()).cwiseSqrt();
  return est;
}

/// Side-by-side figures of merit for two states.
struct StateComparison {
  double fidelity = 0.0;
  double trace_distance = 0.0;
  double max_abs_difference = 0.0;
  double purity_a = 0.0, purity_b = 0.0;
  double entropy_a = 0.0, entropy_b = 0.0;
  double concurrence_a = 0.0, concurrence_b = 0.0;
};

inline StateComparison compare_states(const DensityMatrix& a, const DensityMatrix& b) {
  StateComparison c;
  c.fidelity = fidelity(a, b);
  c.trace_distance = trace_distance(a, b);
  c.max_abs_difference = (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
  c.purity_a = purity(a);
  c.purity_b = purity(b);
  c.entropy_a = entropy_base4(a);
  c.entropy_b = entropy_base4(b);
  c.concurrence_a = concurrence_mixed(a);
  c.concurrence_b = concurrence_mixed(b);
  return c;
}

}  // namespace ququart

#endif  // QUQUART_TOMO_HPP
