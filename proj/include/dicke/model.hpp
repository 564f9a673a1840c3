// Parameter records and the excitation-number / parity algebra of the
// finite-N Dicke model.
//
// Conventions used throughout the library:
//   - frequencies are measured in units of the field frequency (omega_F = 1),
//   - the Hamiltonian is intensive (divided by N), so energies are reported
//     per particle unless a function name says otherwise,
//   - j = N/2 is kept as the integer 2j so that the parity classification
//     lambda = nu + m + j stays exact integer arithmetic.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace dicke {

/// Parity sector of the C2 symmetry generated by exp(i*pi*Lambda),
/// Lambda = a^dag a + J_z + j.
enum class Parity { Even, Odd };

inline const char* to_string(Parity p) {
  return p == Parity::Even ? "even" : "odd";
}

inline Parity parity_from_lambda(long lambda) {
  return lambda % 2 == 0 ? Parity::Even : Parity::Odd;
}

/// Physical inputs of the model. The field frequency is fixed to 1 by
/// convention and is not a parameter.
struct ModelParams {
  double omega_a;  // atomic frequency ratio omega_A / omega_F, > 0
  double gamma;    // atom-field coupling, finite real
  int n_atoms;     // N >= 1

  ModelParams(double omega_a_, double gamma_, int n_atoms_)
      : omega_a(omega_a_), gamma(gamma_), n_atoms(n_atoms_) {
    if (!(omega_a > 0.0) || !std::isfinite(omega_a))
      throw std::invalid_argument("ModelParams: omega_a must be positive");
    if (!std::isfinite(gamma))
      throw std::invalid_argument("ModelParams: gamma must be finite");
    if (n_atoms < 1)
      throw std::invalid_argument("ModelParams: n_atoms must be >= 1");
  }

  int twice_j() const { return n_atoms; }
  double j() const { return 0.5 * n_atoms; }
};

/// One Fock (x) spin basis state |nu> (x) |j, m>. m is stored as 2m so that
/// half-integer values stay exact.
struct BasisLabel {
  int nu;       // photon number, >= 0
  int twice_m;  // 2m, same parity as 2j

  double m() const { return 0.5 * twice_m; }

  friend bool operator==(const BasisLabel&, const BasisLabel&) = default;
};

namespace detail {

inline void check_label(const BasisLabel& label, int twice_j) {
  if (twice_j < 1) throw std::invalid_argument("twice_j must be >= 1");
  if (label.nu < 0) throw std::invalid_argument("photon number nu must be >= 0");
  if (std::abs(label.twice_m) > twice_j)
    throw std::invalid_argument("|m| must not exceed j");
  if ((label.twice_m - twice_j) % 2 != 0)
    throw std::invalid_argument("m and j must both be integer or half-integer");
}

}  // namespace detail

/// Eigenvalue of the excitation number operator Lambda = a^dag a + J_z + j
/// on a basis state: lambda = nu + m + j, a nonnegative integer.
inline long lambda_eigenvalue(const BasisLabel& label, int twice_j) {
  detail::check_label(label, twice_j);
  return label.nu + (label.twice_m + twice_j) / 2;
}

/// Parity of a basis state: even iff lambda = nu + m + j is even.
inline Parity parity_of(const BasisLabel& label, int twice_j) {
  return parity_from_lambda(lambda_eigenvalue(label, twice_j));
}

/// Critical coupling gamma_c = sqrt(omega_a) / 2.
inline double gamma_critical(double omega_a) {
  if (!(omega_a > 0.0))
    throw std::invalid_argument("gamma_critical: omega_a must be positive");
  return 0.5 * std::sqrt(omega_a);
}

/// The natural coupling variable x = gamma / gamma_c.
inline double coupling_ratio(double gamma, double gamma_c) {
  if (!(gamma_c > 0.0))
    throw std::invalid_argument("coupling_ratio: gamma_c must be positive");
  return gamma / gamma_c;
}

}  // namespace dicke
