// Assembly of the Dicke Hamiltonian
//
//   H = (1/N) a^dag a + (omega_A/N) J_z + gamma/(N sqrt(N)) (a^dag + a)(J+ + J-)
//
// in the truncated |nu> (x) |j,m> basis. All matrix elements are real; the
// matrix is stored as its upper triangle. Couplings out of the truncated
// space (nu = nu_max -> nu_max + 1) are dropped; the `truncated` flag records
// that this happened so the convergence loop can own correctness.

#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "dicke/basis.hpp"
#include "dicke/model.hpp"

namespace dicke {

/// Real symmetric matrix stored as upper-triangle coordinates (row <= col).
/// Hermiticity is exact by construction since every stored element is real.
struct SparseSymmetricMatrix {
  struct Entry {
    int row, col;
    double value;
  };

  int dim = 0;
  std::vector<Entry> entries;  // row <= col, no duplicates
  bool truncated = false;      // interaction rows at nu = nu_max were cut

  /// Full (both triangles) Eigen sparse view for matrix-vector products.
  Eigen::SparseMatrix<double> to_sparse() const {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(2 * entries.size());
    for (const auto& e : entries) {
      trip.emplace_back(e.row, e.col, e.value);
      if (e.row != e.col) trip.emplace_back(e.col, e.row, e.value);
    }
    Eigen::SparseMatrix<double> m(dim, dim);
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
  }

  Eigen::MatrixXd to_dense() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto& e : entries) {
      m(e.row, e.col) = e.value;
      m(e.col, e.row) = e.value;
    }
    return m;
  }

  double max_abs_entry() const {
    double m = 0.0;
    for (const auto& e : entries) m = std::max(m, std::abs(e.value));
    return m;
  }
};

namespace detail {

// Shared assembler for the full and rotating-wave interactions. The RWA keeps
// only a^dag J- + a J+ (lambda-conserving); the full model adds a^dag J+ + a J-.
inline SparseSymmetricMatrix assemble_hamiltonian(const ModelParams& params,
                                                  const HilbertSpec& spec,
                                                  bool rwa) {
  if (spec.twice_j != params.twice_j())
    throw std::invalid_argument("build_hamiltonian: spec.j must equal params.j");

  const int N = params.n_atoms;
  const int tj = spec.twice_j;
  const auto labels = enumerate_basis(spec);
  const int dim = static_cast<int>(labels.size());

  // index lookup over the unfiltered (nu, k) grid; -1 marks filtered-out states
  std::vector<int> index(static_cast<std::size_t>(spec.nu_max + 1) * (tj + 1), -1);
  auto slot = [tj](int nu, int k) { return static_cast<std::size_t>(nu) * (tj + 1) + k; };
  for (int i = 0; i < dim; ++i)
    index[slot(labels[i].nu, (labels[i].twice_m + tj) / 2)] = i;

  const double coupling = params.gamma / (N * std::sqrt(double(N)));

  SparseSymmetricMatrix H;
  H.dim = dim;
  H.entries.reserve(static_cast<std::size_t>(dim) * 3);

  for (int i = 0; i < dim; ++i) {
    const int nu = labels[i].nu;
    const int k = (labels[i].twice_m + tj) / 2;
    const int twice_m = labels[i].twice_m;

    H.entries.push_back({i, i, double(nu) / N + params.omega_a * twice_m / (2.0 * N)});

    if (params.gamma == 0.0) continue;

    // ladder element <j,m'|J+-|j,m> = sqrt(j(j+1) - m m'), integer-exact argument
    for (int dk : {-1, +1}) {
      if (rwa && dk == +1) continue;  // counter-rotating a^dag J+ dropped
      const int k2 = k + dk;
      if (k2 < 0 || k2 > tj) continue;
      const int twice_m2 = 2 * k2 - tj;
      const double spin = 0.5 * std::sqrt(double(tj) * (tj + 2) - double(twice_m) * twice_m2);
      if (nu + 1 > spec.nu_max) {
        H.truncated = true;  // the a^dag coupling out of the box is cut here
        continue;
      }
      const int i2 = index[slot(nu + 1, k2)];
      if (i2 < 0) continue;  // cannot happen: the interaction conserves parity
      H.entries.push_back({i, i2, coupling * std::sqrt(double(nu + 1)) * spin});
    }
  }
  return H;
}

}  // namespace detail

/// Sparse symmetric matrix of the full Dicke Hamiltonian on `spec`.
inline SparseSymmetricMatrix build_hamiltonian(const ModelParams& params,
                                               const HilbertSpec& spec) {
  return detail::assemble_hamiltonian(params, spec, /*rwa=*/false);
}

/// Max-norm of Pi H - H Pi with Pi the diagonal parity-sign matrix. The
/// symmetry is exact, so anything above ~1e-15 * max|H| means broken assembly.
inline double parity_commutator_check(const ModelParams& params, const HilbertSpec& spec) {
  if (spec.sector)
    throw std::invalid_argument("parity_commutator_check: needs the unfiltered space");
  const auto H = detail::assemble_hamiltonian(params, spec, false);
  const auto labels = enumerate_basis(spec);
  std::vector<double> sign(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i)
    sign[i] = parity_of(labels[i], spec.twice_j) == Parity::Even ? 1.0 : -1.0;
  double worst = 0.0;
  for (const auto& e : H.entries)
    worst = std::max(worst, std::abs((sign[e.row] - sign[e.col]) * e.value));
  return worst;
}

/// Plain-text coordinate dump for external cross-checks.
/// Header line: dim nnz; then one "row col value" line per stored entry
/// (upper triangle, 0-based indices).
inline void write_coordinate(const SparseSymmetricMatrix& m, std::ostream& os);
inline SparseSymmetricMatrix read_coordinate(std::istream& is);

}  // namespace dicke

#include "dicke/detail/coordinate_io.hpp"
