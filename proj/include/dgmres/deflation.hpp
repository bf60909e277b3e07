#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "dgmres/gmres.hpp"
#include "dgmres/parallel.hpp"
#include "dgmres/sparse.hpp"

namespace dgmres {

struct DeflationConfig {
  std::uint32_t r_max = 20;  // basis size cap; exceeding it triggers truncation
  std::uint32_t drop = 1;    // directions removed per truncation
  double accept_tol = 1e-8;  // candidate norm after orthogonalization
  std::uint32_t inv_power_maxit = 500;
  double inv_power_tol = 1e-10;
  std::uint32_t power_maxit = 200;
};

struct DeflationRecord {
  std::uint32_t restart;
  std::uint32_t r;
  double mu;
  double smallest_ritz;
};

/// Right preconditioner M^{-1} = I + U (|mu| T^{-1} - I) U^T built from
/// Ritz vectors harvested at GMRES restarts. U holds r orthonormal
/// length-n columns, AU caches A U, and T = U^T A U so the deflated
/// directions of A M^{-1} move near |mu|, the largest Ritz value seen.
class Deflator {
 public:
  explicit Deflator(DeflationConfig cfg = {});

  std::uint32_t rank() const { return r_; }
  double mu() const { return mu_; }
  std::uint32_t skipped_updates() const { return skipped_; }
  void reset();

  /// w = v + U (|mu| T^{-1} - I) U^T v; identity while the basis is empty.
  void apply(const DenseVector& v, DenseVector& w, Executor& ex) const;

  /// Harvest the restart that just completed: inverse power iteration on
  /// the cycle's (unrotated) Hessenberg block finds the smallest-magnitude
  /// Ritz pair, the eigenvector is lifted through the Arnoldi basis,
  /// orthonormalized against U and appended; T gains its row/column, a
  /// power iteration refreshes the running |mu| maximum, and the basis is
  /// truncated if it overflows r_max. Returns true if a vector entered
  /// the basis. Non-converging eigeniterations skip the update.
  bool update_from_restart(const RestartContext& ctx, const LinearOp& opA,
                           Executor& ex);

  /// Append a known candidate directly (orthonormalized against the
  /// current basis first); used by synthetic studies and tests.
  bool push_vector(const DenseVector& candidate, const LinearOp& opA, Executor& ex);

  /// Feed a Ritz value into the running |mu| maximum.
  void observe_ritz(double value);

  /// Remove the `drop` directions belonging to the largest-magnitude
  /// eigenvalues of T by rotating U (and AU) onto the orthogonal
  /// complement of the dominant eigenvectors.
  void truncate();

  const std::vector<DeflationRecord>& history() const { return history_; }
  /// restart,r,mu,smallest_ritz
  void write_csv(std::ostream& os) const;

  /// Active r x r block of T (test introspection).
  Eigen::MatrixXd T_block() const { return T_.topLeftCorner(r_, r_); }
  const Eigen::MatrixXd& basis_matrix() const { return U_; }

 private:
  void refresh_lu();
  std::vector<const double*> u_cols(std::uint32_t count) const;

  DeflationConfig cfg_;
  std::uint32_t r_ = 0;
  double mu_ = 0.0;
  std::uint32_t skipped_ = 0;
  Eigen::MatrixXd U_, AU_;  // n x (r_max + 1), first r_ columns active
  Eigen::MatrixXd T_;       // (r_max + 1)^2, top-left r_ block active
  Eigen::PartialPivLU<Eigen::MatrixXd> T_lu_;
  std::vector<DeflationRecord> history_;
};

/// Hook wiring a deflator into gmres_restarted.
RestartHook deflation_hook(Deflator& d, LinearOp opA, Executor& ex);

/// Deflated GMRES on a CSR matrix: opA is the executor's spmv, the
/// deflator supplies the right preconditioner and refreshes itself at
/// every restart.
GmresReport deflated_gmres(const CsrMatrix& A, const DenseVector& b, DenseVector& x,
                           const GmresConfig& cfg, Deflator& d, Executor& ex);

}  // namespace dgmres
