// Symmetry-adapted states: even/odd parity projections of the coherent
// product state. Their energy surfaces contain overlap ratios of the form
// exp(p^2+q^2) (cos theta)^-N which overflow double precision by hundreds of
// orders at large N, so everything is evaluated through
//
//   L = (p^2 + q^2) - N ln(cos theta) >= 0,   S = exp(-L) in (0, 1],
//
// and expm1 of related exponents; exp(L) itself never appears.
//
// Per-particle surfaces (validated against the explicitly projected state in
// the truncated basis):
//   E_pm = (q^2+p^2)/(2N) (1 -+ S)/(1 +- S)
//        - (omega_A/2) (cos th +- S/cos th)/(1 +- S)
//        + (gamma/sqrt j) (q sin th cos phi -+ p S tan th sin phi)/(1 +- S).

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "dicke/coherent.hpp"
#include "dicke/simplex.hpp"

namespace dicke {

/// Per-particle energy of the parity-projected coherent state. theta must lie
/// in [0, pi/2); cos theta <= 0 would make the projected norms ill-defined
/// (and the physical minima all satisfy cos theta_c > 0).
inline double sas_energy_surface(const ModelParams& params, const PhasePoint& pt,
                                 Parity parity) {
  if (!(pt.theta >= 0.0 && pt.theta < std::numbers::pi / 2))
    throw std::domain_error("sas_energy_surface: theta must lie in [0, pi/2)");
  if (!std::isfinite(pt.q) || !std::isfinite(pt.p))
    throw std::invalid_argument("sas_energy_surface: q, p must be finite");

  const int N = params.n_atoms;
  const double r2 = pt.q * pt.q + pt.p * pt.p;
  const double c = std::cos(pt.theta);
  const double s = std::sin(pt.theta);
  const double lc = std::log(c);
  const double L = r2 - N * lc;
  const double S = std::exp(-L);
  const double S_over_c = std::exp(-r2 + (N - 1) * lc);  // S / cos th, stable at th -> pi/2
  const double g_over_sqrt_j = params.gamma / std::sqrt(params.j());
  const double cphi = std::cos(pt.phi), sphi = std::sin(pt.phi);

  if (parity == Parity::Even) {
    const double den = 1.0 + S;
    const double t1 = r2 / (2.0 * N) * (-std::expm1(-L)) / den;
    const double t2 = -0.5 * params.omega_a * (c + S_over_c) / den;
    const double t3 = g_over_sqrt_j * (pt.q * s * cphi - pt.p * S_over_c * s * sphi) / den;
    return t1 + t2 + t3;
  }

  // odd sector; the projection annihilates the origin state, where the value
  // below is the q -> 0 limit along theta = 0 (one photon on top of the
  // all-down state)
  if (L == 0.0) return 1.0 / N - 0.5 * params.omega_a;
  const double one_minus_S = -std::expm1(-L);
  const double M = r2 - (N - 2) * lc;  // S / cos^2 th = exp(-M)
  const double t1 = r2 / (2.0 * N) * (1.0 + S) / one_minus_S;
  const double t2 = -0.5 * params.omega_a * c * (-std::expm1(-M)) / one_minus_S;
  const double t3 =
      g_over_sqrt_j * (pt.q * s * cphi + pt.p * S_over_c * s * sphi) / one_minus_S;
  return t1 + t2 + t3;
}

struct SASMinimum {
  Parity parity = Parity::Even;
  PhasePoint point;                    // global minimum; p = 0, phi = 0 plane
  double energy_per_particle = 0.0;
  std::vector<std::pair<PhasePoint, double>> local_minima;  // ascending energy
};

struct SASTransition {
  double gamma_c_sc = 0.0;  // even global minimum swap location
  double jump_size = 0.0;   // |q_displaced - q_origin| across the swap
  double bracket_lo = 0.0, bracket_hi = 0.0;
};

namespace detail {

// Penalty-wrapped surface over scaled coordinates z = (q/sqrt(N), theta).
inline double sas_objective(const ModelParams& params, Parity parity,
                            const Eigen::VectorXd& z) {
  const double theta_max = std::numbers::pi / 2 - 1e-9;
  if (!(z(1) >= 0.0 && z(1) <= theta_max) || std::abs(z(0)) > 64.0) return 1e100;
  return sas_energy_surface(
      params, PhasePoint{z(0) * std::sqrt(double(params.n_atoms)), 0.0, z(1), 0.0}, parity);
}

// Finite-difference Newton polish; position accuracy ~1e-9 where the simplex
// alone bottoms out around 1e-6.
inline void sas_polish(const ModelParams& params, Parity parity, Eigen::VectorXd& z,
                       double& f) {
  const double h = 1e-5;
  for (int it = 0; it < 4; ++it) {
    auto at = [&](double du, double dt) {
      Eigen::VectorXd zz = z;
      zz(0) += du;
      zz(1) += dt;
      return sas_objective(params, parity, zz);
    };
    const double fpu = at(h, 0), fmu = at(-h, 0), fpt = at(0, h), fmt = at(0, -h);
    const double fpp = at(h, h), fpm = at(h, -h), fmp = at(-h, h), fmm = at(-h, -h);
    if (std::max({fpu, fmu, fpt, fmt, fpp, fpm, fmp, fmm}) >= 1e99) return;
    Eigen::Vector2d grad((fpu - fmu) / (2 * h), (fpt - fmt) / (2 * h));
    Eigen::Matrix2d hess;
    hess(0, 0) = (fpu - 2 * f + fmu) / (h * h);
    hess(1, 1) = (fpt - 2 * f + fmt) / (h * h);
    hess(0, 1) = hess(1, 0) = (fpp - fpm - fmp + fmm) / (4 * h * h);
    if (hess(0, 0) <= 0.0 || hess.determinant() <= 0.0) return;  // not a strict minimum
    Eigen::Vector2d step = hess.ldlt().solve(grad);
    Eigen::VectorXd z_new = z - step;
    const double f_new = sas_objective(params, parity, z_new);
    if (!(f_new <= f + 1e-13)) return;
    z = z_new;
    f = f_new;
    if (step.norm() < 1e-12) return;
  }
}

}  // namespace detail

/// Minimize the projected surface over (q, theta) at p = 0, phi = 0 (the
/// phi = pi image is the mirror q -> -q). Multi-start: the near-origin seed,
/// the coherent-state super-radiant point, a fixed coarse grid, and any
/// caller-provided seeds (all deterministic). Returns every distinct local
/// minimum (separated by > 1e-4 in q or theta) plus the global one.
inline SASMinimum sas_minimize(const ModelParams& params, Parity parity,
                               const std::vector<std::pair<double, double>>& extra_seeds = {}) {
  const double sqrt_n = std::sqrt(double(params.n_atoms));
  std::vector<std::pair<double, double>> seeds;  // (q/sqrt N, theta)
  if (parity == Parity::Even)
    seeds.emplace_back(1e-3, 1e-3);
  else
    seeds.emplace_back(0.1 / sqrt_n, 0.1);

  const auto cs = cs_critical_points(params);
  if (cs.branch == CSBranch::SuperRadiant)
    seeds.emplace_back(cs.phi0.point.q / sqrt_n, cs.phi0.point.theta);

  const double side = params.gamma >= 0.0 ? -1.0 : 1.0;
  for (double u : {0.01, 0.02, 0.03, 0.05, 0.08, 0.12, 0.17, 0.23, 0.30, 0.38, 0.47, 0.57})
    for (double th : {0.03, 0.10, 0.25, 0.45, 0.70, 0.95, 1.20, 1.40})
      seeds.emplace_back(side * u, th);
  seeds.insert(seeds.end(), extra_seeds.begin(), extra_seeds.end());

  SimplexOptions nm;
  nm.initial_step = 0.05;
  nm.f_tol = 1e-13;
  nm.x_tol = 1e-10;
  nm.max_iter = 4000;

  std::vector<std::pair<PhasePoint, double>> minima;
  bool any_converged = false;
  for (const auto& [u0, th0] : seeds) {
    Eigen::VectorXd z(2);
    z << u0, th0;
    auto r = nelder_mead([&](const Eigen::VectorXd& zz) {
      return detail::sas_objective(params, parity, zz);
    }, z, nm);
    if (r.f >= 1e99) continue;
    any_converged = any_converged || r.converged;
    detail::sas_polish(params, parity, r.x, r.f);
    const double q = r.x(0) * sqrt_n, th = r.x(1);
    bool known = false;
    for (auto& [pt, e] : minima)
      if (std::abs(pt.q - q) <= 1e-4 && std::abs(pt.theta - th) <= 1e-4) {
        known = true;
        if (r.f < e) {
          e = r.f;
          pt = PhasePoint{q, 0.0, th, 0.0};
        }
        break;
      }
    if (!known) minima.emplace_back(PhasePoint{q, 0.0, th, 0.0}, r.f);
  }
  if (!any_converged || minima.empty())
    throw std::runtime_error("sas_minimize: optimizer did not converge (N=" +
                             std::to_string(params.n_atoms) +
                             ", gamma=" + std::to_string(params.gamma) + ", " +
                             to_string(parity) + ")");
  std::sort(minima.begin(), minima.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });
  return {parity, minima.front().first, minima.front().second, minima};
}

namespace detail {

// The near-origin and displaced wells separate cleanly in theta relative to
// the coherent-state critical angle.
inline bool is_origin_well(double theta, const ModelParams& params) {
  const double gc = gamma_critical(params.omega_a);
  if (std::abs(params.gamma) <= gc) return true;
  const double c = gc * gc / (params.gamma * params.gamma);
  return theta < 0.75 * std::acos(c);
}

}  // namespace detail

/// Locate the even-sector global-minimum swap by bisection on the energy
/// difference between the displaced and near-origin wells. The bracket must
/// contain exactly one swap: the global minimum must be origin-like at
/// `gamma_lo` and displaced at `gamma_hi`.
inline SASTransition sas_transition(double omega_a, int n_atoms, double gamma_lo,
                                    double gamma_hi, double tol = 1e-6) {
  if (!(gamma_lo < gamma_hi)) throw std::invalid_argument("sas_transition: bad bracket");
  if (!(tol > 0.0)) throw std::invalid_argument("sas_transition: tol must be positive");

  std::vector<std::pair<double, double>> seeds;  // continuation across gamma steps
  double jump = 0.0;

  auto classify = [&](double gamma) {
    const ModelParams params(omega_a, gamma, n_atoms);
    const auto res = sas_minimize(params, Parity::Even, seeds);
    if (res.local_minima.size() > 2)
      throw std::runtime_error("sas_transition: more than two candidate wells at gamma=" +
                               std::to_string(gamma));
    const std::pair<PhasePoint, double>* origin = nullptr;
    const std::pair<PhasePoint, double>* displaced = nullptr;
    for (const auto& m : res.local_minima) {
      auto& slot = detail::is_origin_well(m.first.theta, params) ? origin : displaced;
      if (!slot) slot = &m;
    }
    const double sqrt_n = std::sqrt(double(n_atoms));
    seeds.clear();
    if (origin) seeds.emplace_back(origin->first.q / sqrt_n, origin->first.theta);
    if (displaced) seeds.emplace_back(displaced->first.q / sqrt_n, displaced->first.theta);
    if (origin && displaced) jump = std::abs(displaced->first.q - origin->first.q);
    if (!origin) return -1.0;  // only the displaced well survives
    if (!displaced) return +1.0;
    return displaced->second - origin->second;
  };

  if (!(classify(gamma_lo) > 0.0 && classify(gamma_hi) < 0.0))
    throw std::invalid_argument("sas_transition: no swap in bracket [" +
                                std::to_string(gamma_lo) + ", " + std::to_string(gamma_hi) + "]");
  double lo = gamma_lo, hi = gamma_hi;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (classify(mid) > 0.0 ? lo : hi) = mid;
  }
  return {0.5 * (lo + hi), jump, lo, hi};
}

}  // namespace dicke
