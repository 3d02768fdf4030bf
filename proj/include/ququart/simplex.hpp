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

#ifndef QUQUART_SIMPLEX_HPP
#define QUQUART_SIMPLEX_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Core>

namespace ququart {

struct SimplexOptions {
  double initial_step = 0.1;
  /// Absolute tolerance on the best cost: a restart that improves on the
  /// previous best by less than this ends the search.
  double cost_tolerance = 1e-10;
  /// Iteration cap summed over all restarts.
  long max_iterations = 50000;
  int max_restarts = 50;
};

struct SimplexResult {
  Eigen::VectorXd x;
  double value = std::numeric_limits<double>::infinity();
  long iterations = 0;
  long evaluations = 0;
  bool converged = false;
  std::vector<double> cost_trace;  // best cost at the end of each restart
};

/// Nelder-Mead downhill simplex with dimension-adaptive coefficients
/// (Gao & Han) and restarts around the incumbent.
///
/// A restart ends once the spread of cost values across the simplex falls to
/// `cost_tolerance` (relative to max(1, |f|)), or the simplex collapses. The
/// search is converged when a full restart improves the best cost by less
/// than `cost_tolerance`. The returned cost never exceeds f(x0).
template <typename F>
SimplexResult nelder_mead(F&& f, const Eigen::VectorXd& x0, const SimplexOptions& opt = {}) {
  const int n = static_cast<int>(x0.size());
  SimplexResult res;
  res.x = x0;
  res.value = f(x0);
  res.evaluations = 1;
  if (n == 0) {
    res.converged = true;
    return res;
  }

  const double alpha = 1.0;
  const double beta = 1.0 + 2.0 / n;
  const double gamma = 0.75 - 1.0 / (2.0 * n);
  const double delta = 1.0 - 1.0 / n;

  std::vector<Eigen::VectorXd> pts(n + 1);
  std::vector<double> vals(n + 1);
  std::vector<int> order(n + 1);
  double step = opt.initial_step;

  auto eval = [&](const Eigen::VectorXd& x) {
    ++res.evaluations;
    double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    const double start_value = res.value;
    pts[0] = res.x;
    vals[0] = res.value;
    for (int i = 0; i < n; ++i) {
      pts[i + 1] = res.x;
      double h = step * std::max(1.0, std::abs(res.x(i)));
      pts[i + 1](i) += h;
      vals[i + 1] = eval(pts[i + 1]);
    }

    bool budget_left = true;
    while (true) {
      if (res.iterations >= opt.max_iterations) {
        budget_left = false;
        break;
      }
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] < vals[b]; });
      const int best = order.front(), worst = order.back(), second = order[n - 1];

      double spread = vals[worst] - vals[best];
      double diameter = 0.0;
      for (int i = 0; i <= n; ++i)
        diameter = std::max(diameter, (pts[i] - pts[best]).cwiseAbs().maxCoeff());
      if (spread <= opt.cost_tolerance * std::max(1.0, std::abs(vals[best])) ||
          diameter <= 1e-14 * std::max(1.0, pts[best].cwiseAbs().maxCoeff()))
        break;

      ++res.iterations;
      Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
      for (int i = 0; i <= n; ++i)
        if (i != worst) centroid += pts[i];
      centroid /= n;

      Eigen::VectorXd xr = centroid + alpha * (centroid - pts[worst]);
      double fr = eval(xr);
      if (fr < vals[best]) {
        Eigen::VectorXd xe = centroid + beta * (xr - centroid);
        double fe = eval(xe);
        if (fe < fr) {
          pts[worst] = xe;
          vals[worst] = fe;
        } else {
          pts[worst] = xr;
          vals[worst] = fr;
        }
        continue;
      }
      if (fr < vals[second]) {
        pts[worst] = xr;
        vals[worst] = fr;
        continue;
      }
      bool outside = fr < vals[worst];
      Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + gamma * (xr - centroid))
                                   : Eigen::VectorXd(centroid - gamma * (centroid - pts[worst]));
      double fc = eval(xc);
      if (fc < (outside ? fr : vals[worst])) {
        pts[worst] = xc;
        vals[worst] = fc;
        continue;
      }
      for (int i = 0; i <= n; ++i) {
        if (i == best) continue;
        pts[i] = pts[best] + delta * (pts[i] - pts[best]);
        vals[i] = eval(pts[i]);
      }
    }

    int best = static_cast<int>(std::min_element(vals.begin(), vals.end()) - vals.begin());
    if (vals[best] < res.value) {
      res.value = vals[best];
      res.x = pts[best];
    }
    res.cost_trace.push_back(res.value);
    if (!budget_left) return res;
    if (restart > 0 && start_value - res.value < opt.cost_tolerance) {
      res.converged = true;
      return res;
    }
    step = std::max(step * 0.5, opt.initial_step * 1e-4);
  }
  return res;
}

}  // namespace ququart

#endif  // QUQUART_SIMPLEX_HPP
