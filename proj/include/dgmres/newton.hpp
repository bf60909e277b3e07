#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "dgmres/deflation.hpp"
#include "dgmres/gmres.hpp"
#include "dgmres/mesh.hpp"
#include "dgmres/parallel.hpp"
#include "dgmres/sparse.hpp"

namespace dgmres {

struct NewtonConfig {
  std::uint32_t max_iters = 30;
  double update_tol = 1e-8;  // infinity norm of the Newton update
  GmresConfig gmres{.m = 50, .max_restarts = 100, .rel_tol = 1e-10};
  DeflationConfig deflation{};
  bool use_deflation = true;
  bool continuation = false;          // ramp lambda up instead of jumping
  std::uint32_t continuation_steps = 4;
};

struct NewtonIterRecord {
  std::uint32_t iter;          // global 1-based Newton iteration
  double lambda;               // parameter value this iteration solved at
  double update_inf;           // ||delta||_inf
  double residual_norm;        // ||R(u)||_2 before the update
  std::uint32_t gmres_restarts;
  std::uint64_t gmres_inner;
};

struct NewtonReport {
  std::vector<NewtonIterRecord> iters;
  bool converged = false;
  double final_residual = 0.0;
  double final_update = 0.0;
  std::uint64_t total_inner = 0;

  /// iter,update_inf_norm,residual_2norm,gmres_restarts
  void write_csv(std::ostream& os) const;
};

/// Newton's method for the lambda-exponential reaction-diffusion problem on
/// `mesh`: assemble R(u) and J(u), solve J delta = -R with restarted GMRES
/// (deflated by default, fresh deflation basis every iteration), update
/// u += delta, stop when ||delta||_inf <= update_tol. With continuation
/// enabled lambda ramps linearly to its target over continuation_steps
/// stages, warm-starting each stage from the previous solution. u is the
/// initial guess on entry (Dirichlet entries should be zero) and the
/// solution on return.
NewtonReport newton_solve(const StructuredMesh& mesh, double lambda, DenseVector& u,
                          const NewtonConfig& cfg, Executor& ex);

}  // namespace dgmres
