#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "dgmres/mesh.hpp"
#include "dgmres/parallel.hpp"
#include "dgmres/sparse.hpp"

namespace dgmres {

/// Tri-quadratic Lagrange shape functions on the reference cube [-1,1]^3,
/// local node a = ax + 3*ay + 9*az over the per-axis nodes {-1, 0, +1}.
/// Writes all 27 values and reference-space gradients at (xi, eta, zeta).
void shape_eval(double xi, double eta, double zeta, std::span<double, 27> phi,
                std::span<std::array<double, 3>, 27> grad);

/// 3x3x3 tensor Gauss-Legendre rule, exact through degree 5 per axis.
struct QuadraturePoint {
  double xi, eta, zeta, weight;
};
std::span<const QuadraturePoint, 27> quadrature();

/// Stored-entry count of the Jacobian pattern: the quadratic stencil spans
/// 3 node lines around odd (mid-edge) indices and 5 around even interior
/// ones; Dirichlet rows hold a single unit diagonal.
std::uint64_t pattern_nnz(const StructuredMesh& mesh);

/// Materialized sparsity pattern with zeroed values and unit Dirichlet
/// diagonals. Column indices come out sorted per row.
CsrMatrix symbolic_pattern(const StructuredMesh& mesh);

/// Galerkin residual of the nonlinear reaction-diffusion problem
///   lap(u) + lambda * exp(u) = 0
/// in weak form: R_i = -sum_j u_j (grad phi_j, grad phi_i)
///                     + lambda (exp(u_h), phi_i)
/// for free rows; R_i = u_i on Dirichlet rows. R is sized n_nodes.
void assemble_residual(const StructuredMesh& mesh, double lambda,
                       const DenseVector& u, DenseVector& R, Executor& ex);

/// Jacobian J_ij = dR_i/du_j into a matrix holding the symbolic pattern
/// (an empty J is built on the fly). Dirichlet rows keep their unit
/// diagonal; Dirichlet columns stay in free rows. Assembly is row-owned:
/// each worker accumulates only the rows it owns, walking elements in
/// ascending index order, so values are bit-identical for any worker
/// count at the cost of re-evaluating boundary-layer elements.
void assemble_jacobian(const StructuredMesh& mesh, double lambda,
                       const DenseVector& u, CsrMatrix& J, Executor& ex);

}  // namespace dgmres
