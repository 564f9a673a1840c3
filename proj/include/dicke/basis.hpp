// Truncated Fock (x) spin basis enumeration, optionally restricted to one
// parity sector. Ordering is nu-major, m ascending; the ordering is part of
// the contract because eigenvector amplitudes are reported against it.

#pragma once

#include <optional>
#include <vector>

#include "dicke/model.hpp"

namespace dicke {

/// Description of a truncated, optionally parity-filtered Hilbert space.
struct HilbertSpec {
  int twice_j;                    // 2j = N
  int nu_max;                     // hard Fock truncation, photon numbers 0..nu_max
  std::optional<Parity> sector;   // parity filter, nullopt = full space

  HilbertSpec(int twice_j_, int nu_max_, std::optional<Parity> sector_ = std::nullopt)
      : twice_j(twice_j_), nu_max(nu_max_), sector(sector_) {
    if (twice_j < 1) throw std::invalid_argument("HilbertSpec: twice_j must be >= 1");
    if (nu_max < 0) throw std::invalid_argument("HilbertSpec: nu_max must be >= 0");
  }
};

/// Basis labels in deterministic order (nu-major, then m ascending), keeping
/// only the requested parity sector when one is set.
inline std::vector<BasisLabel> enumerate_basis(const HilbertSpec& spec) {
  std::vector<BasisLabel> labels;
  labels.reserve(static_cast<std::size_t>(spec.nu_max + 1) * (spec.twice_j + 1));
  for (int nu = 0; nu <= spec.nu_max; ++nu) {
    for (int k = 0; k <= spec.twice_j; ++k) {  // k = j + m, lambda = nu + k
      if (spec.sector && parity_from_lambda(nu + k) != *spec.sector) continue;
      labels.push_back(BasisLabel{nu, 2 * k - spec.twice_j});
    }
  }
  return labels;
}

inline int basis_dimension(const HilbertSpec& spec) {
  if (!spec.sector) return (spec.nu_max + 1) * (spec.twice_j + 1);
  return static_cast<int>(enumerate_basis(spec).size());
}

}  // namespace dicke
