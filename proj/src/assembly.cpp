#include "dgmres/assembly.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

namespace dgmres {

namespace {

// 1-D quadratic Lagrange basis on {-1, 0, +1}
inline void lag3(double x, double* v) {
  v[0] = 0.5 * x * (x - 1.0);
  v[1] = 1.0 - x * x;
  v[2] = 0.5 * x * (x + 1.0);
}
inline void dlag3(double x, double* v) {
  v[0] = x - 0.5;
  v[1] = -2.0 * x;
  v[2] = x + 0.5;
}

struct BasisTable {
  std::array<QuadraturePoint, 27> qp;
  double phi[27][27];      // [quadrature point][local node]
  double grad[27][27][3];  // reference-space gradients
  double sref[27][27];     // sum_q w grad_a . grad_b (reference stiffness)
};

BasisTable build_table() {
  BasisTable t{};
  const double g = std::sqrt(0.6);
  const double pts[3] = {-g, 0.0, g};
  const double wts[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  int q = 0;
  for (int qz = 0; qz < 3; ++qz)
    for (int qy = 0; qy < 3; ++qy)
      for (int qx = 0; qx < 3; ++qx) {
        t.qp[q] = {pts[qx], pts[qy], pts[qz], wts[qx] * wts[qy] * wts[qz]};
        shape_eval(pts[qx], pts[qy], pts[qz], std::span<double, 27>(t.phi[q], 27),
                   std::span<std::array<double, 3>, 27>(
                       reinterpret_cast<std::array<double, 3>*>(t.grad[q]), 27));
        ++q;
      }
  for (int a = 0; a < 27; ++a)
    for (int b = 0; b < 27; ++b) {
      double s = 0.0;
      for (int k = 0; k < 27; ++k)
        s += t.qp[k].weight * (t.grad[k][a][0] * t.grad[k][b][0] +
                               t.grad[k][a][1] * t.grad[k][b][1] +
                               t.grad[k][a][2] * t.grad[k][b][2]);
      t.sref[a][b] = s;
    }
  return t;
}

const BasisTable& table() {
  static const BasisTable t = build_table();
  return t;
}

// Per-axis stencil reach of a node line: odd (mid-edge) indices touch one
// element, even (vertex) indices touch the elements on both sides.
inline std::uint32_t axis_reach(std::uint32_t i, std::uint32_t last,
                                std::uint32_t* lo) {
  std::uint32_t a, b;
  if (i % 2 == 1) {
    a = i - 1;
    b = i + 1;
  } else {
    a = i >= 2 ? i - 2 : 0;
    b = std::min(i + 2, last);
  }
  *lo = a;
  return b - a + 1;
}

struct ElementRangeZ {
  std::uint32_t lo, hi;  // inclusive range of element z-layers, empty if lo > hi
};

// Element layers whose nodes intersect node planes [zb, ze).
ElementRangeZ element_layers(std::uint32_t zb, std::uint32_t ze, std::uint32_t n_e) {
  ElementRangeZ r;
  r.lo = zb <= 1 ? 0 : (zb - 1) / 2;
  r.hi = std::min(n_e - 1, (ze - 1) / 2);
  return r;
}

struct ElementWork {
  std::array<index_t, 27> gid;
  double ue[27];
  double fq[27];  // lambda * volume * w_q * exp(u_q)
};

void element_load(const StructuredMesh& mesh, double lambda, const DenseVector& u,
                  std::uint64_t e, ElementWork& ew) {
  const BasisTable& t = table();
  ew.gid = element_nodes(mesh, e);
  for (int a = 0; a < 27; ++a) ew.ue[a] = u[ew.gid[a]];
  const double vol = std::pow(mesh.h_e / 2.0, 3);
  for (int q = 0; q < 27; ++q) {
    double uq = 0.0;
    for (int a = 0; a < 27; ++a) uq += ew.ue[a] * t.phi[q][a];
    ew.fq[q] = lambda * vol * t.qp[q].weight * std::exp(uq);
  }
}

}  // namespace

void shape_eval(double xi, double eta, double zeta, std::span<double, 27> phi,
                std::span<std::array<double, 3>, 27> grad) {
  double lx[3], ly[3], lz[3], dx[3], dy[3], dz[3];
  lag3(xi, lx);
  lag3(eta, ly);
  lag3(zeta, lz);
  dlag3(xi, dx);
  dlag3(eta, dy);
  dlag3(zeta, dz);
  int a = 0;
  for (int az = 0; az < 3; ++az)
    for (int ay = 0; ay < 3; ++ay)
      for (int ax = 0; ax < 3; ++ax) {
        phi[a] = lx[ax] * ly[ay] * lz[az];
        grad[a][0] = dx[ax] * ly[ay] * lz[az];
        grad[a][1] = lx[ax] * dy[ay] * lz[az];
        grad[a][2] = lx[ax] * ly[ay] * dz[az];
        ++a;
      }
}

std::span<const QuadraturePoint, 27> quadrature() {
  return std::span<const QuadraturePoint, 27>(table().qp);
}

std::uint64_t pattern_nnz(const StructuredMesh& mesh) {
  const std::uint32_t na = mesh.n_axis, last = na - 1;
  std::uint32_t lo;
  std::uint64_t sum_x = 0, sum_z = 0;
  for (std::uint32_t i = 1; i < last; ++i) sum_x += axis_reach(i, last, &lo);
  for (std::uint32_t i = 0; i < na; ++i) sum_z += axis_reach(i, last, &lo);
  const std::uint64_t free_rows = sum_x * sum_x * sum_z;
  const std::uint64_t n_dirichlet =
      std::uint64_t(mesh.n_nodes) - std::uint64_t(na - 2) * (na - 2) * na;
  return free_rows + n_dirichlet;
}

CsrMatrix symbolic_pattern(const StructuredMesh& mesh) {
  const std::uint32_t na = mesh.n_axis, last = na - 1;
  CsrMatrix J;
  J.n = mesh.n_nodes;
  J.row_ptr.resize(J.n + 1);
  J.row_ptr[0] = 0;
  std::uint64_t total = 0;
  for (index_t v = 0; v < J.n; ++v) {
    if (classify_node(mesh, v) == NodeClass::DirichletXY) {
      total += 1;
    } else {
      const auto [ix, iy, iz] = mesh.node_coords(v);
      std::uint32_t lo;
      std::uint64_t row = axis_reach(ix, last, &lo);
      row *= axis_reach(iy, last, &lo);
      row *= axis_reach(iz, last, &lo);
      total += row;
    }
    if (total > std::numeric_limits<index_t>::max()) {
      throw std::length_error("symbolic_pattern: nnz exceeds 32-bit offsets");
    }
    J.row_ptr[v + 1] = static_cast<index_t>(total);
  }
  J.col_idx.resize(total);
  J.values.assign(total, 0.0);
  for (index_t v = 0; v < J.n; ++v) {
    index_t k = J.row_ptr[v];
    if (classify_node(mesh, v) == NodeClass::DirichletXY) {
      J.col_idx[k] = v;
      J.values[k] = 1.0;
      continue;
    }
    const auto [ix, iy, iz] = mesh.node_coords(v);
    std::uint32_t xlo, ylo, zlo;
    const std::uint32_t xn = axis_reach(ix, last, &xlo);
    const std::uint32_t yn = axis_reach(iy, last, &ylo);
    const std::uint32_t zn = axis_reach(iz, last, &zlo);
    for (std::uint32_t cz = zlo; cz < zlo + zn; ++cz)
      for (std::uint32_t cy = ylo; cy < ylo + yn; ++cy)
        for (std::uint32_t cx = xlo; cx < xlo + xn; ++cx)
          J.col_idx[k++] = mesh.node_id(cx, cy, cz);
  }
  return J;
}

void assemble_residual(const StructuredMesh& mesh, double lambda,
                       const DenseVector& u, DenseVector& R, Executor& ex) {
  if (u.size() != mesh.n_nodes) {
    throw std::invalid_argument("assemble_residual: u has wrong length");
  }
  R.resize(mesh.n_nodes);
  const BasisTable& t = table();
  const double stiff_sc = mesh.h_e / 2.0;
  const bool sequential = ex.partition().workers() == 0;

  auto element_residual = [&](const ElementWork& ew, double* re) {
    for (int a = 0; a < 27; ++a) {
      double s = 0.0;
      for (int b = 0; b < 27; ++b) s += t.sref[a][b] * ew.ue[b];
      double load = 0.0;
      for (int q = 0; q < 27; ++q) load += ew.fq[q] * t.phi[q][a];
      re[a] = -stiff_sc * s + load;
    }
  };

  // Row-owner scheme: every worker walks the element layers touching its
  // node planes in ascending element order and accumulates only into rows
  // it owns. Boundary-layer elements are evaluated by both neighbors, in
  // exchange each row sees its contributions in the sequential order, so
  // results are bit-identical for any worker count.
  ex.run([&](unsigned w) {
    const RowRange rng =
        sequential ? RowRange{0, mesh.n_nodes} : ex.partition().ranges[w];
    ElementWork ew;
    double re[27];
    std::memset(R.data() + rng.begin, 0, sizeof(double) * rng.size());
    const std::uint32_t plane = mesh.n_axis * mesh.n_axis;
    const auto layers =
        element_layers(rng.begin / plane, rng.end / plane, mesh.n_e);
    const std::uint64_t per_layer = std::uint64_t(mesh.n_e) * mesh.n_e;
    for (std::uint32_t ez = layers.lo; ez <= layers.hi; ++ez) {
      for (std::uint64_t e = ez * per_layer; e < (ez + 1) * per_layer; ++e) {
        element_load(mesh, lambda, u, e, ew);
        element_residual(ew, re);
        for (int a = 0; a < 27; ++a) {
          const index_t i = ew.gid[a];
          if (i >= rng.begin && i < rng.end) R[i] += re[a];
        }
      }
    }
    // Dirichlet rows carry the constraint residual instead
    for (index_t i = rng.begin; i < rng.end; ++i) {
      if (classify_node(mesh, i) == NodeClass::DirichletXY) R[i] = u[i];
    }
  });
}

void assemble_jacobian(const StructuredMesh& mesh, double lambda,
                       const DenseVector& u, CsrMatrix& J, Executor& ex) {
  if (u.size() != mesh.n_nodes) {
    throw std::invalid_argument("assemble_jacobian: u has wrong length");
  }
  if (J.n != mesh.n_nodes || J.nnz() == 0) J = symbolic_pattern(mesh);
  const BasisTable& t = table();
  const double stiff_sc = mesh.h_e / 2.0;
  const bool sequential = ex.partition().workers() == 0;

  auto element_block = [&](const ElementWork& ew, double* eb) {
    // eb[a*27+b] = -stiff * sref + sum_q fq * phi_a * phi_b
    for (int a = 0; a < 27; ++a)
      for (int b = 0; b < 27; ++b) eb[a * 27 + b] = -stiff_sc * t.sref[a][b];
    for (int q = 0; q < 27; ++q) {
      const double* ph = t.phi[q];
      const double f = ew.fq[q];
      for (int a = 0; a < 27; ++a) {
        const double fa = f * ph[a];
        double* row = eb + a * 27;
        for (int b = 0; b < 27; ++b) row[b] += fa * ph[b];
      }
    }
  };

  auto scatter_row = [&](index_t i, const std::array<index_t, 27>& gid,
                         const double* eb_row) {
    const index_t kb = J.row_ptr[i], ke = J.row_ptr[i + 1];
    const index_t* cb = J.col_idx.data();
    for (int b = 0; b < 27; ++b) {
      const index_t j = gid[b];
      const index_t* pos = std::lower_bound(cb + kb, cb + ke, j);
      assert(pos != cb + ke && *pos == j);
      J.values[pos - cb] += eb_row[b];
    }
  };

  ex.run([&](unsigned w) {
    const RowRange rng =
        sequential ? RowRange{0, mesh.n_nodes} : ex.partition().ranges[w];
    std::memset(J.values.data() + J.row_ptr[rng.begin], 0,
                sizeof(double) * (J.row_ptr[rng.end] - J.row_ptr[rng.begin]));
    ElementWork ew;
    double eb[27 * 27];
    const std::uint32_t plane = mesh.n_axis * mesh.n_axis;
    const auto layers =
        element_layers(rng.begin / plane, rng.end / plane, mesh.n_e);
    const std::uint64_t per_layer = std::uint64_t(mesh.n_e) * mesh.n_e;
    for (std::uint32_t ez = layers.lo; ez <= layers.hi; ++ez) {
      for (std::uint64_t e = ez * per_layer; e < (ez + 1) * per_layer; ++e) {
        element_load(mesh, lambda, u, e, ew);
        element_block(ew, eb);
        for (int a = 0; a < 27; ++a) {
          const index_t i = ew.gid[a];
          if (i < rng.begin || i >= rng.end) continue;
          if (classify_node(mesh, i) == NodeClass::DirichletXY) continue;
          scatter_row(i, ew.gid, eb + a * 27);
        }
      }
    }
    for (index_t i = rng.begin; i < rng.end; ++i) {
      if (classify_node(mesh, i) == NodeClass::DirichletXY) {
        J.values[J.row_ptr[i]] = 1.0;
      }
    }
  });
}

}  // namespace dgmres
