// Lowest eigenpairs of the (parity-resolved) Dicke Hamiltonian.
//
// Two routes are kept deliberately independent so they can cross-check each
// other: a dense solve (Eigen's SelfAdjointEigenSolver, LAPACK-grade) for
// moderate dimensions, and a thick-restart Lanczos iteration with full
// reorthogonalization for the large parity blocks that scans need.
// converged_ground wraps either in an adaptive Fock-truncation loop.

#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dicke/hamiltonian.hpp"

namespace dicke {

struct EigenPair {
  double energy = 0.0;            // per-particle eigenvalue of the intensive H
  Eigen::VectorXd vector;         // amplitudes over the basis ordering
  std::optional<Parity> sector;   // set when the block is parity-resolved
};

/// Diagnostics of the adaptive truncation loop.
struct ConvergenceReport {
  int nu_max_used = 0;
  double tail_weight = 0.0;   // probability on the top 10% of Fock levels
  double energy_delta = 0.0;  // |E(nu_max) - E(nu_max/2)|
  int iterations = 0;         // truncation-loop solves
};

struct SolverOptions {
  double residual_tol = 1e-10;  // ||Hv - Ev|| per returned pair
  int max_basis = 300;          // Lanczos basis size between restarts
  int max_restarts = 80;
  int dense_ceiling = 4000;     // dense_lowest refuses above this
};

namespace detail {

inline void sort_pairs(std::vector<EigenPair>& pairs) {
  std::sort(pairs.begin(), pairs.end(),
            [](const EigenPair& a, const EigenPair& b) { return a.energy < b.energy; });
}

}  // namespace detail

/// k lowest eigenpairs by full dense diagonalization, ascending.
inline std::vector<EigenPair> dense_lowest(const SparseSymmetricMatrix& matrix, int k,
                                           const SolverOptions& opts = {}) {
  if (matrix.dim > opts.dense_ceiling)
    throw std::invalid_argument("dense_lowest: dim " + std::to_string(matrix.dim) +
                                " exceeds dense ceiling " + std::to_string(opts.dense_ceiling));
  if (k < 1 || k > matrix.dim)
    throw std::invalid_argument("dense_lowest: need 1 <= k <= dim");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix.to_dense());
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("dense_lowest: eigensolver failed");
  std::vector<EigenPair> pairs;
  pairs.reserve(k);
  for (int i = 0; i < k; ++i)
    pairs.push_back({solver.eigenvalues()(i), solver.eigenvectors().col(i), std::nullopt});
  return pairs;
}

/// k lowest eigenpairs by thick-restart Lanczos with full reorthogonalization.
///
/// The starting vector is the normalized all-ones vector (deterministic by
/// design; scans must be bitwise reproducible). Breakdown injects canonical
/// basis vectors in index order, so the whole iteration is RNG-free.
/// Residuals of the returned pairs are verified explicitly against `tol`.
inline std::vector<EigenPair> iterative_lowest(const SparseSymmetricMatrix& matrix, int k,
                                               double tol = 1e-10,
                                               const SolverOptions& opts = {}) {
  const int dim = matrix.dim;
  if (k < 1) throw std::invalid_argument("iterative_lowest: k must be >= 1");
  if (dim < 1) throw std::invalid_argument("iterative_lowest: empty matrix");
  k = std::min(k, dim);

  const Eigen::SparseMatrix<double> A = matrix.to_sparse();
  const int m_max = std::min(std::max(opts.max_basis, 3 * k + 12), dim);

  Eigen::MatrixXd V(dim, m_max);            // orthonormal basis
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m_max, m_max);  // V^T A V
  V.col(0) = Eigen::VectorXd::Ones(dim) / std::sqrt(double(dim));

  int cur = 0;             // next column of V to process
  int inject = 0;          // deterministic breakdown-recovery counter
  double beta = 0.0;       // coupling of the last processed column
  Eigen::VectorXd w(dim);
  bool space_exhausted = false;

  auto ritz = [&](int m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T.topLeftCorner(m, m));
    return es;
  };

  auto extract = [&](const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>& es, int m) {
    std::vector<EigenPair> pairs;
    const int kk = std::min(k, m);
    for (int i = 0; i < kk; ++i) {
      Eigen::VectorXd y = V.leftCols(m) * es.eigenvectors().col(i);
      y.normalize();
      pairs.push_back({es.eigenvalues()(i), std::move(y), std::nullopt});
    }
    detail::sort_pairs(pairs);
    return pairs;
  };

  for (int restart = 0; restart <= opts.max_restarts; ++restart) {
    // grow the basis until full (or the space runs out)
    while (cur < m_max) {
      w.noalias() = A * V.col(cur);
      Eigen::VectorXd c = V.leftCols(cur + 1).transpose() * w;
      w.noalias() -= V.leftCols(cur + 1) * c;
      Eigen::VectorXd c2 = V.leftCols(cur + 1).transpose() * w;  // second pass
      w.noalias() -= V.leftCols(cur + 1) * c2;
      c += c2;
      T.block(0, cur, cur + 1, 1) = c;
      T.block(cur, 0, 1, cur + 1) = c.transpose();
      beta = w.norm();

      if (cur + 1 == m_max) {
        ++cur;
        break;
      }
      if (beta > 1e-13) {
        T(cur + 1, cur) = T(cur, cur + 1) = beta;
        V.col(cur + 1) = w / beta;
        ++cur;
      } else {
        // invariant subspace: bring in a fresh deterministic direction
        beta = 0.0;
        bool found = false;
        while (inject < dim && !found) {
          w.setZero();
          w(inject++) = 1.0;
          w -= V.leftCols(cur + 1) * (V.leftCols(cur + 1).transpose() * w);
          const double n = w.norm();
          if (n > 1e-8) {
            T(cur + 1, cur) = T(cur, cur + 1) = 0.0;
            V.col(cur + 1) = w / n;
            found = true;
          }
        }
        ++cur;
        if (!found) {
          space_exhausted = true;
          break;
        }
      }

      // periodic convergence probe
      if (cur % 8 == 0 && cur >= k) {
        auto es = ritz(cur);
        bool all_ok = true;
        for (int i = 0; i < k; ++i)
          all_ok = all_ok && std::abs(beta * es.eigenvectors()(cur - 1, i)) <= 0.2 * tol;
        if (all_ok) {
          auto pairs = extract(es, cur);
          bool verified = true;
          for (const auto& p : pairs)
            verified = verified && (A * p.vector - p.energy * p.vector).norm() <= tol;
          if (verified) return pairs;
        }
      }
    }

    const int m = std::min(cur, m_max);
    auto es = ritz(m);
    auto pairs = extract(es, m);
    bool verified = true;
    for (const auto& p : pairs)
      verified = verified && (A * p.vector - p.energy * p.vector).norm() <= tol;
    if (verified || space_exhausted) {
      if (!verified)
        throw std::runtime_error("iterative_lowest: invariant subspace without convergence");
      return pairs;
    }

    // thick restart: lock the lowest Ritz vectors plus the current residual
    const int keep = std::min(std::min(k + 8, m - 1), dim - 1);
    Eigen::MatrixXd Y = V.leftCols(m) * es.eigenvectors().leftCols(keep);
    Eigen::VectorXd border = beta * es.eigenvectors().row(m - 1).head(keep).transpose();
    V.leftCols(keep) = Y;
    T.setZero();
    T.topLeftCorner(keep, keep) = es.eigenvalues().head(keep).asDiagonal();
    if (beta > 1e-13) {
      V.col(keep) = w / beta;
      T.block(0, keep, keep, 1) = border;
      T.block(keep, 0, 1, keep) = border.transpose();
    } else {
      bool found = false;
      while (inject < dim && !found) {
        w.setZero();
        w(inject++) = 1.0;
        w -= V.leftCols(keep) * (V.leftCols(keep).transpose() * w);
        if (w.norm() > 1e-8) {
          V.col(keep) = w / w.norm();
          found = true;
        }
      }
      if (!found) return pairs;  // space exhausted and verified above
    }
    cur = keep;
  }
  throw std::runtime_error("iterative_lowest: no convergence after " +
                           std::to_string(opts.max_restarts) + " restarts (dim " +
                           std::to_string(dim) + ", tol " + std::to_string(tol) + ")");
}

/// Route to the dense or iterative solver by size.
inline std::vector<EigenPair> lowest_eigenpairs(const SparseSymmetricMatrix& matrix, int k,
                                                double tol = 1e-10,
                                                const SolverOptions& opts = {},
                                                int dense_threshold = 600) {
  if (matrix.dim <= dense_threshold) return dense_lowest(matrix, k, opts);
  return iterative_lowest(matrix, k, tol, opts);
}

// ---- expectation helpers over the basis ordering ----

inline double photon_number_mean(const Eigen::VectorXd& v, const std::vector<BasisLabel>& labels) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += v(i) * v(i) * labels[i].nu;
  return s;
}

inline double jz_mean(const Eigen::VectorXd& v, const std::vector<BasisLabel>& labels) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += v(i) * v(i) * 0.5 * labels[i].twice_m;
  return s;
}

/// Summed probability on the top 10% of Fock levels of the truncated space.
inline double fock_tail_weight(const Eigen::VectorXd& v, const std::vector<BasisLabel>& labels,
                               int nu_max) {
  const int cutoff = nu_max + 1 - std::max(1, (nu_max + 1) / 10);
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (labels[i].nu >= cutoff) s += v(i) * v(i);
  return s;
}

struct GroundOptions {
  double residual_tol = 1e-10;
  double tail_tol = 1e-10;
  int nu_max_cap = 20000;
  int dense_threshold = 600;
  SolverOptions solver;
};

/// Ground state of one parity sector at a fixed truncation.
inline EigenPair ground_state(const ModelParams& params, Parity sector, int nu_max,
                              const GroundOptions& opts = {}) {
  const HilbertSpec spec(params.twice_j(), nu_max, sector);
  auto pairs = lowest_eigenpairs(build_hamiltonian(params, spec), 1, opts.residual_tol,
                                 opts.solver, opts.dense_threshold);
  pairs[0].sector = sector;
  return pairs[0];
}

/// Fock-space estimate for the starting truncation: four times the coherent
/// state photon number at the variational minimum, plus head room.
inline int initial_nu_max(const ModelParams& params) {
  const double x = params.gamma / gamma_critical(params.omega_a);
  const double frac = x > 1.0 ? 1.0 - std::pow(x, -4.0) : 0.0;
  const double est = 4.0 * params.n_atoms * params.gamma * params.gamma * frac;
  return std::max(20, static_cast<int>(std::ceil(est)) + 20);
}

/// Sector ground state with the truncation doubled until the energy change
/// and the Fock tail weight both fall below tolerance.
inline std::pair<EigenPair, ConvergenceReport> converged_ground(const ModelParams& params,
                                                                Parity sector, double tol = 1e-10,
                                                                const GroundOptions& opts = {}) {
  if (!(tol > 0.0)) throw std::invalid_argument("converged_ground: tol must be positive");
  int nu_max = initial_nu_max(params);
  ConvergenceReport report;
  EigenPair pair;
  double prev_energy = 0.0;
  bool have_prev = false;
  while (true) {
    if (nu_max > opts.nu_max_cap)
      throw std::runtime_error(
          "converged_ground: nu_max cap " + std::to_string(opts.nu_max_cap) +
          " exceeded (N=" + std::to_string(params.n_atoms) +
          ", gamma=" + std::to_string(params.gamma) +
          ", last energy_delta=" + std::to_string(report.energy_delta) + ")");
    pair = ground_state(params, sector, nu_max, opts);
    ++report.iterations;
    const auto labels = enumerate_basis(HilbertSpec(params.twice_j(), nu_max, sector));
    report.nu_max_used = nu_max;
    report.tail_weight = fock_tail_weight(pair.vector, labels, nu_max);
    if (have_prev) {
      report.energy_delta = std::abs(pair.energy - prev_energy);
      if (report.energy_delta <= tol && report.tail_weight <= opts.tail_tol) break;
    }
    prev_energy = pair.energy;
    have_prev = true;
    nu_max *= 2;
  }
  return {pair, report};
}

}  // namespace dicke
