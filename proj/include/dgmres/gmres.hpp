#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "dgmres/parallel.hpp"
#include "dgmres/sparse.hpp"

namespace dgmres {

/// y = Op(x); x and y are distinct, sized n.
using LinearOp = std::function<void(const DenseVector&, DenseVector&)>;

struct GmresConfig {
  std::uint32_t m = 50;             // Krylov dimension per cycle
  std::uint32_t max_restarts = 100;
  double rel_tol = 1e-8;            // on ||b - Ax|| / ||b - Ax0||
  bool fixed_iterations = false;    // benchmark mode: run every restart, no test
  double breakdown_scale = 1e-14;   // h_{k+1,k} < scale * beta ends the cycle
};

struct InnerRecord {
  std::uint32_t restart;
  std::uint32_t inner;
  double monitored;  // |gamma_{k+1}| from the rotated least-squares rhs
};

struct GmresReport {
  double beta0 = 0.0;                     // ||b - A x0||
  std::vector<InnerRecord> inner;
  std::vector<double> explicit_residual;  // recomputed ||b - Ax|| per restart
  std::uint32_t restarts = 0;
  std::uint64_t total_inner = 0;
  bool converged = false;
  bool breakdown = false;                 // cycle ended on a tiny h (lucky)
  double final_relative = 0.0;

  /// restart,inner_step,monitored_residual,explicit_residual; the explicit
  /// column is filled on the closing row of each restart cycle.
  void write_csv(std::ostream& os) const;
};

/// One restart cycle of right-preconditioned GMRES, exposed step by step
/// so studies can inspect the basis, the Hessenberg matrix, and partial
/// iterates. Holds m+1 basis vectors of length n.
class GmresWorkspace {
 public:
  GmresWorkspace(index_t n, std::uint32_t m);

  index_t n() const { return n_; }
  std::uint32_t m() const { return m_; }

  /// v_0 = r / beta, reset rotations; beta must equal ||r||.
  void begin_cycle(const DenseVector& r, double beta, Executor& ex);

  /// w = A M^{-1} v_k orthogonalized against v_0..v_k (modified
  /// Gram-Schmidt); returns h_{k+1,k} = ||w||. Forms v_{k+1} when the
  /// norm is nonzero. Pass a null opM for an unpreconditioned step.
  double arnoldi_step(const LinearOp& opA, const LinearOp& opM, std::uint32_t k,
                      Executor& ex);

  /// Apply the accumulated Givens rotations to column k, compute the new
  /// rotation annihilating h_{k+1,k}, update the least-squares rhs, and
  /// return the monitored residual |gamma_{k+1}| = ||b - A x_k||.
  double apply_rotations_and_update(std::uint32_t k);

  /// Back-substitute the rotated k x k triangular system for y. Throws
  /// std::runtime_error on a zero diagonal (singular projection).
  std::vector<double> solve_least_squares(std::uint32_t k) const;

  /// z = sum_{j<k} y[j] v_j (the cycle's correction before preconditioning).
  void correction(std::span<const double> y, DenseVector& z, Executor& ex) const;

  const DenseVector& basis(std::uint32_t j) const { return v_[j]; }
  /// Unrotated Hessenberg entry, i <= j+1.
  double hess(std::uint32_t i, std::uint32_t j) const {
    return h_orig_[i + j * (m_ + 1)];
  }

 private:
  index_t n_;
  std::uint32_t m_;
  std::vector<DenseVector> v_;     // m+1 basis vectors
  std::vector<double> h_rot_;      // (m+1) x m column-major, Givens applied
  std::vector<double> h_orig_;     // same layout, untouched copy
  std::vector<double> g_;          // rotated rhs, size m+1
  std::vector<double> cs_, sn_;
  DenseVector w_, t_;              // scratch
};

struct RestartContext {
  const GmresWorkspace& ws;
  std::uint32_t steps;    // Arnoldi steps completed this cycle
  std::uint32_t restart;  // 0-based cycle index
};

/// Called at the end of each restart cycle, after the iterate update and
/// before the basis is discarded (the deflation preconditioner refreshes
/// itself here).
using RestartHook = std::function<void(const RestartContext&)>;

/// Restarted GMRES on op A with optional right preconditioner M (solve
/// A M^{-1} z = b, x = x0 + M^{-1} V y). x holds x0 on entry and the
/// iterate on return. The monitored residual tracks ||b - A x_k|| exactly
/// in exact arithmetic; every restart recomputes the residual explicitly.
/// Throws std::runtime_error when non-finite values enter the recurrence.
GmresReport gmres_restarted(const LinearOp& opA, const LinearOp& opM,
                            const DenseVector& b, DenseVector& x,
                            const GmresConfig& cfg, Executor& ex,
                            const RestartHook& hook = {});

}  // namespace dgmres
