// Derivative-free Nelder-Mead simplex descent with deterministic restarts.
// Out-of-domain points are handled by the objective returning a large finite
// penalty value, which the reflection steps move away from.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace dicke {

struct SimplexOptions {
  double f_tol = 1e-12;       // simplex spread in function value
  double x_tol = 1e-9;        // simplex diameter
  int max_iter = 20000;       // per restart
  int restarts = 2;           // rebuilds around the incumbent best
  double initial_step = 0.2;  // first simplex edge length (per coordinate)
};

struct SimplexResult {
  Eigen::VectorXd x;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
};

inline SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                                 Eigen::VectorXd x0, const SimplexOptions& opts = {}) {
  const int n = static_cast<int>(x0.size());
  SimplexResult result;
  result.x = x0;
  result.f = f(x0);

  double step = opts.initial_step;
  for (int attempt = 0; attempt <= opts.restarts; ++attempt) {
    std::vector<Eigen::VectorXd> xs(n + 1, result.x);
    std::vector<double> fs(n + 1);
    for (int i = 0; i < n; ++i) xs[i + 1](i) += step;
    for (int i = 0; i <= n; ++i) fs[i] = f(xs[i]);

    std::vector<int> order(n + 1);
    for (int it = 0; it < opts.max_iter; ++it) {
      ++result.iterations;
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int b) { return fs[a] < fs[b]; });
      const int best = order[0], worst = order[n], second = order[n - 1];

      double diam = 0.0;
      for (int i = 1; i <= n; ++i) diam = std::max(diam, (xs[order[i]] - xs[best]).norm());
      if (std::abs(fs[worst] - fs[best]) <= opts.f_tol && diam <= opts.x_tol) {
        result.converged = true;
        break;
      }

      Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
      for (int i = 0; i <= n; ++i)
        if (i != worst) centroid += xs[i];
      centroid /= n;

      Eigen::VectorXd xr = centroid + (centroid - xs[worst]);
      const double fr = f(xr);
      if (fr < fs[order[0]]) {
        Eigen::VectorXd xe = centroid + 2.0 * (centroid - xs[worst]);
        const double fe = f(xe);
        if (fe < fr) {
          xs[worst] = xe;
          fs[worst] = fe;
        } else {
          xs[worst] = xr;
          fs[worst] = fr;
        }
      } else if (fr < fs[second]) {
        xs[worst] = xr;
        fs[worst] = fr;
      } else {
        const bool outside = fr < fs[worst];
        Eigen::VectorXd xc;
        if (outside)
          xc = centroid + 0.5 * (xr - centroid);
        else
          xc = centroid - 0.5 * (centroid - xs[worst]);
        const double fc = f(xc);
        if (fc < std::min(fr, fs[worst])) {
          xs[worst] = xc;
          fs[worst] = fc;
        } else {
          for (int i = 0; i <= n; ++i) {  // shrink toward the best vertex
            if (i == best) continue;
            xs[i] = xs[best] + 0.5 * (xs[i] - xs[best]);
            fs[i] = f(xs[i]);
          }
        }
      }
    }

    int best = 0;
    for (int i = 1; i <= n; ++i)
      if (fs[i] < fs[best]) best = i;
    if (fs[best] < result.f) {
      result.f = fs[best];
      result.x = xs[best];
    }
    step *= 0.1;  // restart with a tighter simplex around the incumbent
  }
  return result;
}

}  // namespace dicke
