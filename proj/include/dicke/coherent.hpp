// Coherent-state (Glauber (x) Bloch product) variational analysis in closed
// form: the energy surface, its critical points and separatrix, the universal
// q(theta) curve, and the excitation-number statistics at the minima.
//
// A truncated-basis oracle (coherent_state_vector / cs_expectation_oracle)
// rebuilds the trial state explicitly and contracts operator matrices against
// it; every closed form here is testable against that independent route.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "dicke/eigensolver.hpp"
#include "dicke/hamiltonian.hpp"

namespace dicke {

/// Variational coordinates: field quadratures (q, p) with
/// alpha = (q + i p)/sqrt(2), Bloch angles (theta, phi) with
/// zeta = tan(theta/2) e^{i phi}.
struct PhasePoint {
  double q = 0.0;
  double p = 0.0;
  double theta = 0.0;  // [0, pi]; theta = pi itself is not representable by zeta
  double phi = 0.0;    // [0, 2 pi)

  std::complex<double> alpha() const { return {q / std::numbers::sqrt2, p / std::numbers::sqrt2}; }
  std::complex<double> zeta() const { return std::polar(std::tan(0.5 * theta), phi); }
};

enum class CSBranch { Normal, SuperRadiant };

struct CriticalPoint {
  CSBranch branch = CSBranch::Normal;
  PhasePoint point;
  double energy_per_particle = 0.0;
};

/// Both phi_c branches of the global minimum. For |gamma| <= gamma_c the two
/// coincide at the origin; beyond, phi0 carries q_c < 0 and phi_pi its mirror.
struct CSCriticalPoints {
  CSBranch branch = CSBranch::Normal;
  CriticalPoint phi0;
  CriticalPoint phi_pi;
};

struct CSObservables {
  double lambda_mean = 0.0;
  double lambda_fluct = 0.0;
  double energy_extensive = 0.0;  // N * (per-particle minimum energy)
};

/// Per-particle energy surface (p^2+q^2)/2N - (omega_A/2) cos th
/// + (gamma/sqrt j) q sin th cos phi.
inline double cs_energy_surface(const ModelParams& params, const PhasePoint& pt) {
  const double kinetic = (pt.p * pt.p + pt.q * pt.q) / (2.0 * params.n_atoms);
  return kinetic - 0.5 * params.omega_a * std::cos(pt.theta) +
         params.gamma / std::sqrt(params.j()) * pt.q * std::sin(pt.theta) * std::cos(pt.phi);
}

/// Closed-form global minima of the surface. Independent of N in the scaled
/// coordinate q_c/sqrt(N).
inline CSCriticalPoints cs_critical_points(const ModelParams& params) {
  const double gc = gamma_critical(params.omega_a);
  CSCriticalPoints out;
  if (std::abs(params.gamma) <= gc) {
    out.branch = CSBranch::Normal;
    out.phi0 = {CSBranch::Normal, PhasePoint{0.0, 0.0, 0.0, 0.0}, -0.5 * params.omega_a};
    out.phi_pi = {CSBranch::Normal, PhasePoint{0.0, 0.0, 0.0, std::numbers::pi},
                  -0.5 * params.omega_a};
    return out;
  }
  const double c = (gc / params.gamma) * (gc / params.gamma);  // cos theta_c
  const double theta_c = std::acos(c);
  const double q_mag = 2.0 * std::sqrt(params.j()) * std::abs(params.gamma) *
                       std::sqrt(1.0 - c * c);
  const double x = params.gamma / gc;
  const double energy = -gc * gc * x * x * (1.0 + std::pow(x, -4.0));
  out.branch = CSBranch::SuperRadiant;
  out.phi0 = {CSBranch::SuperRadiant, PhasePoint{-q_mag, 0.0, theta_c, 0.0}, energy};
  out.phi_pi = {CSBranch::SuperRadiant, PhasePoint{+q_mag, 0.0, theta_c, std::numbers::pi},
                energy};
  return out;
}

/// The N- and gamma-independent super-radiant branch relation
/// q_c/sqrt(N) = -sqrt(omega_A) sin(th) / sqrt(2 cos th) * cos(phi).
inline double universal_curve(double theta, double omega_a, double phi = 0.0) {
  if (!(omega_a > 0.0)) throw std::invalid_argument("universal_curve: omega_a must be positive");
  if (!(theta >= 0.0 && theta < std::numbers::pi / 2))
    throw std::domain_error("universal_curve: theta must lie in [0, pi/2)");
  return -std::sqrt(omega_a) * std::sin(theta) / std::sqrt(2.0 * std::cos(theta)) * std::cos(phi);
}

/// Extensive minimum energy: -2 N gamma_c^2 below the transition,
/// -N gamma_c^2 x^2 (1 + x^-4) above; the two agree at x = 1.
inline double cs_minimum_energy(const ModelParams& params) {
  const double gc = gamma_critical(params.omega_a);
  const double x = std::abs(params.gamma) / gc;
  if (x <= 1.0) return -2.0 * params.n_atoms * gc * gc;
  return -params.n_atoms * gc * gc * x * x * (1.0 + std::pow(x, -4.0));
}

/// Excitation number <Lambda> and its fluctuation at the minimum.
inline std::pair<double, double> cs_lambda_and_fluctuation(const ModelParams& params) {
  const double gc = gamma_critical(params.omega_a);
  const double x = std::abs(params.gamma) / gc;
  if (x <= 1.0) return {0.0, 0.0};
  const double xm2 = 1.0 / (x * x);
  const double xm4 = xm2 * xm2;
  const double n = params.n_atoms;
  const double lambda = 0.5 * n * (1.0 - xm2 + 2.0 * gc * gc * x * x * (1.0 - xm4));
  const double fluct =
      std::sqrt(0.5 * n * (0.5 + 2.0 * gc * gc * x * x) * (1.0 - xm4));
  return {lambda, fluct};
}

// ---- truncated-basis oracle ----

/// Coefficients of |alpha> (x) |zeta> over the basis ordering of `spec`
/// (unfiltered). The expansion is evaluated with running recurrences, so the
/// factorials and binomials never appear explicitly.
inline Eigen::VectorXcd coherent_state_vector(std::complex<double> alpha,
                                              std::complex<double> zeta,
                                              const HilbertSpec& spec) {
  if (spec.sector)
    throw std::invalid_argument("coherent_state_vector: needs the unfiltered basis");
  const int tj = spec.twice_j;
  const double a2 = std::norm(alpha);
  const double z2 = std::norm(zeta);

  // spin part: sqrt(binom(2j,k)) zeta^k / (1+|zeta|^2)^j
  Eigen::VectorXcd spin(tj + 1);
  spin(0) = std::pow(1.0 + z2, -0.5 * tj);
  for (int k = 0; k < tj; ++k)
    spin(k + 1) = spin(k) * zeta * std::sqrt(double(tj - k) / (k + 1));

  Eigen::VectorXcd v(static_cast<Eigen::Index>(spec.nu_max + 1) * (tj + 1));
  std::complex<double> fock = std::exp(-0.5 * a2);  // alpha^nu / sqrt(nu!) prefactor chain
  for (int nu = 0; nu <= spec.nu_max; ++nu) {
    v.segment(static_cast<Eigen::Index>(nu) * (tj + 1), tj + 1) = fock * spin;
    fock *= alpha / std::sqrt(double(nu + 1));
  }
  return v;
}

enum class CSOperator { Energy, Lambda, LambdaSquared, PhotonNumber, Jz };

/// Brute-force expectation value in the truncated coherent state by direct
/// matrix contraction. Errors out when the Fock truncation cannot hold the
/// state (norm deficit above 1e-12).
inline double cs_expectation_oracle(const ModelParams& params, std::complex<double> alpha,
                                    std::complex<double> zeta, CSOperator op,
                                    const HilbertSpec& spec) {
  Eigen::VectorXcd v = coherent_state_vector(alpha, zeta, spec);
  const double norm2 = v.squaredNorm();
  if (1.0 - norm2 > 1e-12)
    throw std::runtime_error("cs_expectation_oracle: truncation too small for |alpha|^2 = " +
                             std::to_string(std::norm(alpha)));
  v /= std::sqrt(norm2);

  if (op == CSOperator::Energy) {
    const auto H = build_hamiltonian(params, spec).to_sparse();
    return (v.adjoint() * (H * v)).value().real();
  }
  const auto labels = enumerate_basis(spec);
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double w = std::norm(v(i));
    const double lam = double(lambda_eigenvalue(labels[i], spec.twice_j));
    switch (op) {
      case CSOperator::Lambda: s += w * lam; break;
      case CSOperator::LambdaSquared: s += w * lam * lam; break;
      case CSOperator::PhotonNumber: s += w * labels[i].nu; break;
      case CSOperator::Jz: s += w * 0.5 * labels[i].twice_m; break;
      case CSOperator::Energy: break;
    }
  }
  return s;
}

}  // namespace dicke
