// Transition detection on the exact solution (fidelity and fidelity
// susceptibility of neighbouring ground states), the quantum -> phase-space
// correspondence map, gamma_c tabulation over atom-number ladders for the
// exact and SAS routes, and the power-law fits of gamma_c(j) - 1/2.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "dicke/detail/parallel.hpp"
#include "dicke/detail/student_t.hpp"
#include "dicke/eigensolver.hpp"
#include "dicke/sas.hpp"

namespace dicke {

/// Squared absolute overlap of two states in the same basis. The absolute
/// value neutralizes phase conventions, so eigenvector sign flips are
/// irrelevant.
template <typename DerivedA, typename DerivedB>
double fidelity(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("fidelity: dimension mismatch (" + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()) + ")");
  const double overlap = a.dot(b);
  return std::min(1.0, overlap * overlap);
}

struct FidelityScan {
  std::vector<double> gamma_grid;
  std::vector<double> fidelity;        // F(gamma_i, gamma_i + delta_gamma)
  std::vector<double> susceptibility;  // 2 (1 - F) / delta_gamma^2
  double gamma_peak = 0.0;             // refined argmax of the susceptibility
  double gamma_peak_parabolic = 0.0;   // three-point parabola vertex at the grid argmax
  double delta_gamma = 0.0;
  int nu_max_used = 0;                 // common truncation across the scan
};

struct ScanSettings {
  double delta_gamma = 1e-4;
  double refine_tol = 1e-5;   // golden-section width in gamma
  double ground_tol = 1e-10;  // truncation-loop energy tolerance
  int threads = 1;
  GroundOptions ground;
};

/// Fidelity-susceptibility scan of one parity sector over a gamma grid.
///
/// All states are solved at one common truncation (converged at the most
/// photon-rich end of the grid) so that overlaps are taken within a single
/// basis. The grid argmax is refined by a three-point parabola and then
/// golden-section maximization of chi(gamma) to `refine_tol`.
inline FidelityScan susceptibility_scan(double omega_a, int n_atoms, Parity sector,
                                        const std::vector<double>& grid, double delta_gamma,
                                        const ScanSettings& settings = {}) {
  if (grid.size() < 5) throw std::invalid_argument("susceptibility_scan: need >= 5 grid points");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw std::invalid_argument("susceptibility_scan: grid must ascend");
  if (!(delta_gamma > 0.0) || delta_gamma > 0.5 * (grid[1] - grid[0]))
    throw std::invalid_argument("susceptibility_scan: delta_gamma must be small vs grid spacing");

  const int nu_max = converged_ground(ModelParams(omega_a, grid.back() + delta_gamma, n_atoms),
                                      sector, settings.ground_tol, settings.ground)
                         .second.nu_max_used;

  auto solve = [&](double gamma) {
    return ground_state(ModelParams(omega_a, gamma, n_atoms), sector, nu_max, settings.ground)
        .vector;
  };
  auto chi_at = [&](double gamma) {
    const double f = fidelity(solve(gamma), solve(gamma + delta_gamma));
    return 2.0 * (1.0 - f) / (delta_gamma * delta_gamma);
  };

  FidelityScan scan;
  scan.gamma_grid = grid;
  scan.delta_gamma = delta_gamma;
  scan.nu_max_used = nu_max;
  scan.fidelity.resize(grid.size());
  scan.susceptibility.resize(grid.size());
  detail::parallel_for(static_cast<int>(grid.size()), settings.threads, [&](int i) {
    const double f = fidelity(solve(grid[i]), solve(grid[i] + delta_gamma));
    scan.fidelity[i] = f;
    scan.susceptibility[i] = 2.0 * (1.0 - f) / (delta_gamma * delta_gamma);
  });

  std::size_t imax = 0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (scan.susceptibility[i] > scan.susceptibility[imax]) imax = i;
  if (imax == 0 || imax == grid.size() - 1)
    throw std::runtime_error(
        "susceptibility_scan: peak at grid boundary (gamma=" + std::to_string(grid[imax]) +
        "); widen the gamma grid");

  // parabolic vertex through the three points around the argmax
  const double x0 = grid[imax - 1], x1 = grid[imax], x2 = grid[imax + 1];
  const double y0 = scan.susceptibility[imax - 1], y1 = scan.susceptibility[imax],
               y2 = scan.susceptibility[imax + 1];
  double peak = x1;
  if (y0 - 2.0 * y1 + y2 < 0.0) {
    peak = x1 - 0.5 * ((x1 - x0) * (x1 - x0) * (y1 - y2) - (x1 - x2) * (x1 - x2) * (y1 - y0)) /
                    ((x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0));
    peak = std::clamp(peak, x0, x2);
  }
  scan.gamma_peak_parabolic = peak;

  // golden-section maximization on the bracketing interval
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = x0, b = x2;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = chi_at(c), fd = chi_at(d);
  while (b - a > settings.refine_tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = chi_at(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = chi_at(d);
    }
  }
  scan.gamma_peak = 0.5 * (a + b);
  return scan;
}

/// Map exact-solution expectation values onto the variational coordinates:
/// q = -+ sqrt(2 <a^dag a>), theta = arccos(-<J_z>/j); the sign follows the
/// phi_c = 0 / pi branch choice.
inline PhasePoint correspondence_map(double n_photons_mean, double jz_mean, double j,
                                     double phi_branch = 0.0) {
  if (n_photons_mean < -1e-12)
    throw std::invalid_argument("correspondence_map: <a^dag a> must be nonnegative");
  if (std::abs(jz_mean) > j + 1e-12)
    throw std::invalid_argument("correspondence_map: |<J_z>| exceeds j");
  const double n = std::max(0.0, n_photons_mean);
  const double ratio = std::clamp(-jz_mean / j, -1.0, 1.0);
  const double sign = std::cos(phi_branch) >= 0.0 ? -1.0 : 1.0;
  return PhasePoint{sign * std::sqrt(2.0 * n), 0.0, std::acos(ratio), phi_branch};
}

enum class CriticalMethod { ExactEven, ExactOdd, SAS };

inline const char* to_string(CriticalMethod m) {
  switch (m) {
    case CriticalMethod::ExactEven: return "exact-even";
    case CriticalMethod::ExactOdd: return "exact-odd";
    default: return "sas";
  }
}

/// Deterministic per-j scan windows. Both routes approach gamma_c = 1/2 from
/// above, so the windows contract with j; the exponents here only set the
/// search window, never the measured value.
struct TableSettings {
  double omega_a = 1.0;
  // exact route: susceptibility window 0.5 + [lo, hi] * j^exponent
  double exact_window_lo = 0.03;
  double exact_window_hi = 1.2;
  double exact_window_exponent = -2.0 / 3.0;
  int exact_grid_points = 21;
  // SAS route: swap bracket 0.5 + [lo, hi] * j^exponent
  double sas_bracket_lo = 0.08;
  double sas_bracket_hi = 0.28;
  double sas_window_exponent = -11.0 / 21.0;
  double sas_bisect_tol = 1e-6;
  ScanSettings scan;
};

/// Critical coupling versus j for one detection method.
inline std::vector<std::pair<double, double>> gamma_c_table(const std::vector<double>& j_list,
                                                            CriticalMethod method,
                                                            const TableSettings& settings = {}) {
  for (std::size_t i = 0; i + 1 < j_list.size(); ++i)
    if (!(j_list[i] < j_list[i + 1]))
      throw std::invalid_argument("gamma_c_table: j_list must ascend");
  std::vector<std::pair<double, double>> table(j_list.size());
  detail::parallel_for(static_cast<int>(j_list.size()), settings.scan.threads, [&](int i) {
    const double j = j_list[i];
    const int n_atoms = static_cast<int>(std::lround(2.0 * j));
    if (std::abs(2.0 * j - n_atoms) > 1e-12 || n_atoms < 1)
      throw std::invalid_argument("gamma_c_table: j must be a positive half-integer");
    double gamma_c = 0.0;
    if (method == CriticalMethod::SAS) {
      const double s = std::pow(j, settings.sas_window_exponent);
      gamma_c = sas_transition(settings.omega_a, n_atoms, 0.5 + settings.sas_bracket_lo * s,
                               0.5 + settings.sas_bracket_hi * s, settings.sas_bisect_tol)
                    .gamma_c_sc;
    } else {
      const double s = std::pow(j, settings.exact_window_exponent);
      std::vector<double> grid(settings.exact_grid_points);
      for (int g = 0; g < settings.exact_grid_points; ++g)
        grid[g] = 0.5 + (settings.exact_window_lo +
                         (settings.exact_window_hi - settings.exact_window_lo) * g /
                             (settings.exact_grid_points - 1)) *
                            s;
      ScanSettings inner = settings.scan;
      inner.threads = 1;  // the outer loop owns the parallelism
      const Parity sector =
          method == CriticalMethod::ExactEven ? Parity::Even : Parity::Odd;
      gamma_c = susceptibility_scan(settings.omega_a, n_atoms, sector, grid,
                                    inner.delta_gamma, inner)
                    .gamma_peak;
    }
    table[i] = {j, gamma_c};
  });
  return table;
}

struct FitResult {
  double exponent = 0.0;   // slope of ln(gamma_c - 1/2) vs ln j
  double amplitude = 0.0;  // exp(intercept)
  double sigma = 0.0;      // residual standard deviation, sqrt(SSR / (n - 2))
  double ci95_lo = 0.0, ci95_hi = 0.0;  // two-sided t interval for the slope
  int n_used = 0;
  int n_excluded = 0;  // points within 1e-9 of gamma_c = 1/2, dropped from the log fit
};

/// Ordinary least squares of ln(gamma_c - 1/2) against ln j.
inline FitResult fit_power_law(const std::vector<std::pair<double, double>>& table) {
  std::vector<double> x, y;
  FitResult fit;
  for (const auto& [j, gc] : table) {
    if (!(gc > 0.5))
      throw std::invalid_argument("fit_power_law: every gamma_c must exceed 1/2 (got " +
                                  std::to_string(gc) + ")");
    if (gc - 0.5 < 1e-9) {  // log singularity; excluded with a warning flag
      ++fit.n_excluded;
      continue;
    }
    x.push_back(std::log(j));
    y.push_back(std::log(gc - 0.5));
  }
  const int n = static_cast<int>(x.size());
  if (n < 3) throw std::invalid_argument("fit_power_law: need at least 3 usable points");

  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_power_law: degenerate j values");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ssr = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = y[i] - slope * x[i] - intercept;
    ssr += r * r;
  }
  fit.exponent = slope;
  fit.amplitude = std::exp(intercept);
  fit.sigma = std::sqrt(ssr / (n - 2));
  const double se = fit.sigma / std::sqrt(sxx);
  const double t = detail::student_t_quantile(0.975, n - 2);
  fit.ci95_lo = slope - t * se;
  fit.ci95_hi = slope + t * se;
  fit.n_used = n;
  return fit;
}

}  // namespace dicke
