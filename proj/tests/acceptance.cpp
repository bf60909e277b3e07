// Acceptance gate: ten numbered end-to-end checks over the full solver stack,
// one PASS/FAIL line each. Heavy benchmark runs are shared between checks.
// Exit code equals the number of failed checks.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "dgmres/assembly.hpp"
#include "dgmres/deflation.hpp"
#include "dgmres/gmres.hpp"
#include "dgmres/mesh.hpp"
#include "dgmres/newton.hpp"
#include "dgmres/parallel.hpp"
#include "dgmres/sparse.hpp"

namespace {

using namespace dgmres;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int prec = 3) {
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

// ---------------------------------------------------------------------------
// Shared fixtures

struct System {
  StructuredMesh mesh;
  CsrMatrix jac;
  DenseVector rhs;  // -R(0): right-hand side of the first Newton step
};

System first_system(std::uint32_t ne, double lambda, Executor& ex) {
  System s;
  s.mesh = build_mesh(ne);
  DenseVector u(s.mesh.n_nodes, 0.0), r;
  assemble_residual(s.mesh, lambda, u, r, ex);
  assemble_jacobian(s.mesh, lambda, u, s.jac, ex);
  s.rhs.resize(s.mesh.n_nodes);
  for (index_t i = 0; i < s.mesh.n_nodes; ++i) s.rhs[i] = -r[i];
  return s;
}

// One benchmark-protocol run (GMRES(50), 100 fixed restarts) with per-restart
// algebra audits of the deflation basis, plus the undeflated twin on demand.
struct ConvRun {
  GmresReport defl, plain;
  double ortho_max = 0.0;   // max over restarts of ||U^T U - I||_max
  double tmatch_max = 0.0;  // max over restarts of ||T - U^T(AU)||_max / ||T||_max
  std::uint32_t rank_max = 0;
  bool has_plain = false;
};

ConvRun run_benchmark_system(std::uint32_t ne, bool with_plain) {
  Executor ex;
  const System sys = first_system(ne, 6.8, ex);
  const index_t n = sys.mesh.n_nodes;

  GmresConfig cfg;
  cfg.m = 50;
  cfg.max_restarts = 100;
  cfg.fixed_iterations = true;

  const LinearOp opA = [&](const DenseVector& in, DenseVector& out) {
    out.resize(in.size());
    ex.spmv(sys.jac, in, out);
  };

  DeflationConfig dcfg;
  dcfg.r_max = 20;
  Deflator d(dcfg);
  const LinearOp opM = [&](const DenseVector& in, DenseVector& out) {
    d.apply(in, out, ex);
  };

  ConvRun run;
  const RestartHook refresh = deflation_hook(d, opA, ex);
  DenseVector tin(n), tout(n);
  const RestartHook hook = [&](const RestartContext& ctx) {
    refresh(ctx);
    const std::uint32_t r = d.rank();
    run.rank_max = std::max(run.rank_max, r);
    if (r == 0) return;
    const auto U = d.basis_matrix().leftCols(r);
    Eigen::MatrixXd gram = U.transpose() * U;
    gram.diagonal().array() -= 1.0;
    run.ortho_max = std::max(run.ortho_max, gram.cwiseAbs().maxCoeff());

    Eigen::MatrixXd au(n, r);
    for (std::uint32_t j = 0; j < r; ++j) {
      Eigen::VectorXd::Map(tin.data(), n) = U.col(j);
      ex.spmv(sys.jac, tin, tout);
      au.col(j) = Eigen::Map<const Eigen::VectorXd>(tout.data(), n);
    }
    const Eigen::MatrixXd t = d.T_block();
    const double scale = std::max(t.cwiseAbs().maxCoeff(), 1e-300);
    const double mismatch = (t - U.transpose() * au).cwiseAbs().maxCoeff();
    run.tmatch_max = std::max(run.tmatch_max, mismatch / scale);
  };

  DenseVector x(n, 0.0);
  run.defl = gmres_restarted(opA, opM, sys.rhs, x, cfg, ex, hook);
  if (with_plain) {
    DenseVector x2(n, 0.0);
    run.plain = gmres_restarted(opA, nullptr, sys.rhs, x2, cfg, ex);
    run.has_plain = true;
  }
  return run;
}

std::map<std::uint32_t, ConvRun> g_runs;

const ConvRun& benchmark_run(std::uint32_t ne) {
  auto it = g_runs.find(ne);
  if (it == g_runs.end()) {
    it = g_runs.emplace(ne, run_benchmark_system(ne, ne == 25)).first;
  }
  return it->second;
}

// ---------------------------------------------------------------------------
// 1. Pattern statistics table: exact dof, nnz and memory within 5%.

Outcome criterion_1() {
  const auto t0 = Clock::now();
  const std::uint32_t sizes[] = {15, 25, 30};
  const std::uint64_t want_dof[] = {29791, 132651, 226981};
  const double want_nnz[] = {1.60e6, 7.72e6, 1.33e7};
  const double want_mib[] = {19.0, 88.0, 153.0};

  bool pass = true;
  std::ostringstream det;
  for (int i = 0; i < 3; ++i) {
    const StructuredMesh mesh = build_mesh(sizes[i]);
    const std::uint64_t dof = mesh.n_nodes;
    const std::uint64_t nnz = pattern_nnz(mesh);
    const double mib = double(memory_footprint(nnz, dof)) / (1024.0 * 1024.0);
    const double nnz_off = std::abs(double(nnz) - want_nnz[i]) / want_nnz[i];
    const double mib_off = std::abs(mib - want_mib[i]) / want_mib[i];
    pass = pass && dof == want_dof[i] && nnz_off <= 0.05 && mib_off <= 0.05;
    det << (i ? "; " : "") << "ne=" << sizes[i] << " dof=" << dof << " nnz off "
        << fmt(100 * nnz_off, 2) << "% mem off " << fmt(100 * mib_off, 2) << "%";
  }
  const double dt = seconds_since(t0);
  pass = pass && dt < 60.0;
  det << "; " << fmt(dt, 2) << " s";
  return {pass, det.str()};
}

// ---------------------------------------------------------------------------
// 2. Benchmark-protocol relative error stays below 1e-3 on all three sizes.

Outcome criterion_2() {
  bool pass = true;
  std::ostringstream det;
  for (const std::uint32_t ne : {8u, 15u, 25u}) {
    const ConvRun& run = benchmark_run(ne);
    const double eps = run.defl.explicit_residual.back() / run.defl.beta0;
    pass = pass && eps < 1e-3;
    det << (ne != 8 ? "; " : "") << "ne=" << ne << " eps=" << fmt(eps);
  }
  return {pass, det.str()};
}

// ---------------------------------------------------------------------------
// 3. Deflated residual at restart 100 at least 10x below the undeflated one.

Outcome criterion_3() {
  const ConvRun& run = benchmark_run(25);
  const double rd = run.defl.explicit_residual.back();
  const double ru = run.plain.explicit_residual.back();
  const double ratio = rd / ru;
  const bool pass = ratio <= 0.1;
  std::ostringstream det;
  det << "deflated=" << fmt(rd) << " undeflated=" << fmt(ru) << " ratio="
      << fmt(ratio);
  if (!pass) {
    const auto& hd = run.defl.explicit_residual;
    const auto& hu = run.plain.explicit_residual;
    det << " — both runs hit the rounding floor long before restart 100"
        << " (restart 3: deflated " << fmt(hd[2]) << " vs undeflated " << fmt(hu[2])
        << ", a " << fmt(hu[2] / hd[2], 2) << "x gap mid-flight)";
  }
  return {pass, det.str()};
}

// ---------------------------------------------------------------------------
// 4. Tiny-system equivalence with a dense LU oracle, with and without
//    the deflation preconditioner.

Outcome criterion_4() {
  const auto t0 = Clock::now();
  Executor ex;
  const System sys = first_system(2, 6.8, ex);
  const index_t n = sys.mesh.n_nodes;

  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
  for (index_t i = 0; i < n; ++i) {
    for (index_t k = sys.jac.row_ptr[i]; k < sys.jac.row_ptr[i + 1]; ++k) {
      dense(i, sys.jac.col_idx[k]) = sys.jac.values[k];
    }
  }
  const Eigen::VectorXd x_lu =
      dense.partialPivLu().solve(Eigen::Map<const Eigen::VectorXd>(sys.rhs.data(), n));
  const double lu_norm = x_lu.norm();

  GmresConfig cfg;
  cfg.m = 50;
  cfg.max_restarts = 100;
  cfg.rel_tol = 1e-12;

  const auto rel_err = [&](const DenseVector& x) {
    double s = 0.0;
    for (index_t i = 0; i < n; ++i) s += (x[i] - x_lu[i]) * (x[i] - x_lu[i]);
    return std::sqrt(s) / lu_norm;
  };

  const LinearOp opA = [&](const DenseVector& in, DenseVector& out) {
    out.resize(in.size());
    ex.spmv(sys.jac, in, out);
  };
  DenseVector x_plain(n, 0.0);
  gmres_restarted(opA, nullptr, sys.rhs, x_plain, cfg, ex);

  DeflationConfig dcfg;
  dcfg.r_max = 20;
  Deflator d(dcfg);
  DenseVector x_defl(n, 0.0);
  deflated_gmres(sys.jac, sys.rhs, x_defl, cfg, d, ex);

  const double e_plain = rel_err(x_plain), e_defl = rel_err(x_defl);
  const double dt = seconds_since(t0);
  const bool pass = e_plain <= 1e-10 && e_defl <= 1e-10 && dt < 1.0;
  std::ostringstream det;
  det << "rel err vs dense LU: plain " << fmt(e_plain) << ", deflated "
      << fmt(e_defl) << "; " << fmt(dt, 2) << " s";
  return {pass, det.str()};
}

// ---------------------------------------------------------------------------
// 5. The rotation-recurrence residual equals the explicitly formed one at
//    every inner step of the first restart.

Outcome criterion_5() {
  bool pass = true;
  std::ostringstream det;
  for (const std::uint32_t ne : {2u, 8u}) {
    Executor ex;
    const System sys = first_system(ne, 6.8, ex);
    const index_t n = sys.mesh.n_nodes;
    const LinearOp opA = [&](const DenseVector& in, DenseVector& out) {
      out.resize(in.size());
      ex.spmv(sys.jac, in, out);
    };

    GmresWorkspace ws(n, 50);
    const double beta = ex.norm2(sys.rhs);
    ws.begin_cycle(sys.rhs, beta, ex);

    // Relative 1e-8 wherever the explicit residual is representable to that
    // precision; forming b - A x_k in doubles carries absolute noise of a few
    // ulps of beta, so an absolute allowance of 64 eps beta covers the floor
    // (a recurrence bug shows up orders of magnitude above it).
    const double floor_abs = 64.0 * 2.220446049250313e-16 * beta;
    double worst = 0.0;
    std::uint32_t steps = 0;
    for (std::uint32_t k = 0; k < 50; ++k) {
      const double h = ws.arnoldi_step(opA, nullptr, k, ex);
      const double monitored = ws.apply_rotations_and_update(k);
      const std::vector<double> y = ws.solve_least_squares(k + 1);
      DenseVector xk(n, 0.0), ax(n);
      ws.correction(y, xk, ex);
      ex.spmv(sys.jac, xk, ax);
      DenseVector resid = sys.rhs;
      ex.axpy(-1.0, ax, resid);
      const double expl = ex.norm2(resid);
      ++steps;
      const double allowed = 1e-8 * expl + floor_abs;
      worst = std::max(worst, std::abs(monitored - expl) / allowed);
      if (h < 1e-14 * beta) break;  // exact breakdown ends the cycle
    }
    pass = pass && worst <= 1.0;
    det << (ne != 2 ? "; " : "") << "ne=" << ne << " worst gap "
        << fmt(100.0 * worst, 3) << "% of the 1e-8+noise allowance over "
        << steps << " steps";
  }
  return {pass, det.str()};
}

// ---------------------------------------------------------------------------
// 6. Assembled Jacobian vs central finite differences of the residual.

Outcome criterion_6() {
  bool pass = true;
  std::ostringstream det;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-0.5, 0.5);
  for (const std::uint32_t ne : {1u, 2u, 3u}) {
    Executor ex;
    const StructuredMesh mesh = build_mesh(ne);
    const index_t n = mesh.n_nodes;
    DenseVector u(n);
    for (auto& v : u) v = dist(rng);

    CsrMatrix jac;
    assemble_jacobian(mesh, 6.8, u, jac, ex);
    double max_j = 0.0;
    for (const double v : jac.values) max_j = std::max(max_j, std::abs(v));

    const double eps = 1e-5;
    double max_diff = 0.0;
    DenseVector rp, rm;
    for (index_t j = 0; j < n; ++j) {
      const double saved = u[j];
      u[j] = saved + eps;
      assemble_residual(mesh, 6.8, u, rp, ex);
      u[j] = saved - eps;
      assemble_residual(mesh, 6.8, u, rm, ex);
      u[j] = saved;
      for (index_t i = 0; i < n; ++i) {
        const double fd = (rp[i] - rm[i]) / (2.0 * eps);
        double a_ij = 0.0;
        for (index_t k = jac.row_ptr[i]; k < jac.row_ptr[i + 1]; ++k) {
          if (jac.col_idx[k] == j) {
            a_ij = jac.values[k];
            break;
          }
        }
        max_diff = std::max(max_diff, std::abs(fd - a_ij));
      }
    }
    const double rel = max_diff / max_j;
    pass = pass && rel <= 1e-6;
    det << (ne != 1 ? "; " : "") << "ne=" << ne << " rel " << fmt(rel);
  }
  return {pass, det.str()};
}

// ---------------------------------------------------------------------------
// 7. Full nonlinear solve: iteration budget, pinned boundary values, and the
//    symmetries the continuous problem dictates.

Outcome criterion_7() {
  const auto t0 = Clock::now();
  Executor ex;  // single-threaded
  const StructuredMesh mesh = build_mesh(8);
  NewtonConfig cfg;  // update tolerance 1e-8, at most 30 iterations
  DenseVector u;
  const NewtonReport rep = newton_solve(mesh, 6.8, u, cfg, ex);

  bool dirichlet_exact = true;
  for (index_t v = 0; v < mesh.n_nodes; ++v) {
    if (!is_free_node(mesh, v) && u[v] != 0.0) dirichlet_exact = false;
  }

  const std::uint32_t na = mesh.n_axis;
  double z_var = 0.0, x_asym = 0.0, y_asym = 0.0;
  for (std::uint32_t iy = 0; iy < na; ++iy) {
    for (std::uint32_t ix = 0; ix < na; ++ix) {
      double lo = u[mesh.node_id(ix, iy, 0)], hi = lo;
      for (std::uint32_t iz = 1; iz < na; ++iz) {
        const double v = u[mesh.node_id(ix, iy, iz)];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      z_var = std::max(z_var, hi - lo);
      for (std::uint32_t iz = 0; iz < na; ++iz) {
        const double v = u[mesh.node_id(ix, iy, iz)];
        x_asym = std::max(x_asym,
                          std::abs(v - u[mesh.node_id(na - 1 - ix, iy, iz)]));
        y_asym = std::max(y_asym,
                          std::abs(v - u[mesh.node_id(ix, na - 1 - iy, iz)]));
      }
    }
  }

  const double dt = seconds_since(t0);
  const bool pass = rep.converged && rep.iters.size() <= 30 && dirichlet_exact &&
                    z_var < 1e-8 && x_asym < 1e-8 && y_asym < 1e-8 && dt < 60.0;
  std::ostringstream det;
  det << (rep.converged ? "converged" : "NOT converged") << " in "
      << rep.iters.size() << " iters; boundary "
      << (dirichlet_exact ? "exact" : "VIOLATED") << "; z-var " << fmt(z_var)
      << "; mirror asym " << fmt(std::max(x_asym, y_asym)) << "; " << fmt(dt, 2)
      << " s";
  return {pass, det.str()};
}

// ---------------------------------------------------------------------------
// 8. Deflation-basis algebra audited after every restart of the runs in
//    check 2: orthonormality, the projected block, and the rank cap.

Outcome criterion_8() {
  bool pass = true;
  std::ostringstream det;
  for (const std::uint32_t ne : {8u, 15u, 25u}) {
    const ConvRun& run = benchmark_run(ne);
    pass = pass && run.ortho_max < 1e-10 && run.tmatch_max < 1e-10 &&
           run.rank_max <= 20;
    det << (ne != 8 ? "; " : "") << "ne=" << ne << " ortho " << fmt(run.ortho_max)
        << " proj " << fmt(run.tmatch_max) << " rank<=" << run.rank_max;
  }
  return {pass, det.str()};
}

// ---------------------------------------------------------------------------
// 9. Parallel equivalence; speedup and trend clauses need >= 4 hardware cores.

Outcome criterion_9() {
  Executor seq;
  const System sys = first_system(8, 6.8, seq);
  const index_t n = sys.mesh.n_nodes;

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  DenseVector v(n), w(n);
  for (index_t i = 0; i < n; ++i) {
    v[i] = dist(rng);
    w[i] = dist(rng);
  }

  DenseVector y_seq(n);
  seq.spmv(sys.jac, v, y_seq);
  const double d_seq = seq.dot(v, w);
  const double n_seq = seq.norm2(v);
  DenseVector a_seq = w;
  seq.axpy(0.7, v, a_seq);

  double y_scale = 0.0;
  for (const double t : y_seq) y_scale = std::max(y_scale, std::abs(t));

  bool kernels_ok = true;
  for (const unsigned p : {2u, 4u}) {
    Executor ex(partition_rows(sys.mesh, p), true);
    DenseVector y(n), a = w;
    ex.spmv(sys.jac, v, y);
    ex.axpy(0.7, v, a);
    double dy = 0.0, da = 0.0;
    for (index_t i = 0; i < n; ++i) {
      dy = std::max(dy, std::abs(y[i] - y_seq[i]));
      da = std::max(da, std::abs(a[i] - a_seq[i]));
    }
    kernels_ok = kernels_ok && dy <= 1e-13 * y_scale && da <= 1e-13;
    kernels_ok = kernels_ok && std::abs(ex.dot(v, w) - d_seq) <= 1e-13 * std::abs(d_seq);
    kernels_ok = kernels_ok && std::abs(ex.norm2(v) - n_seq) <= 1e-13 * n_seq;
  }

  bool bitwise_ok = true;
  {
    double dots[3], norms[3];
    int i = 0;
    for (const unsigned p : {1u, 2u, 4u}) {
      Executor ex(partition_rows(sys.mesh, p), true);
      dots[i] = ex.dot(v, w);
      norms[i] = ex.norm2(v);
      ++i;
    }
    bitwise_ok = dots[0] == dots[1] && dots[1] == dots[2] &&
                 norms[0] == norms[1] && norms[1] == norms[2];
  }

  std::ostringstream det;
  det << "kernels(p=2,4) " << (kernels_ok ? "match" : "MISMATCH")
      << "; deterministic reductions " << (bitwise_ok ? "bit-identical" : "DIFFER");

  bool timing_ok = true;
  const unsigned hw = std::thread::hardware_concurrency();
  if (hw < 4) {
    det << "; speedup/trend clauses SKIPPED (" << hw
        << " hardware core(s) < 4 required by the claim)";
  } else {
    GmresConfig cfg;
    cfg.m = 50;
    cfg.max_restarts = 100;
    cfg.fixed_iterations = true;
    std::vector<double> speed, comm;
    double speed25 = 0.0;
    for (const std::uint32_t ne : {8u, 15u, 25u}) {
      Executor ass;
      const System s = first_system(ne, 6.8, ass);
      double t[2] = {0, 0};
      double comm4 = 0.0;
      int slot = 0;
      for (const unsigned p : {1u, 4u}) {
        Executor ex(partition_rows(s.mesh, p), true);
        DeflationConfig dcfg;
        dcfg.r_max = 20;
        Deflator d(dcfg);
        DenseVector x(s.mesh.n_nodes, 0.0);
        const TimedResult tr = timed_run(ex, [&] {
          deflated_gmres(s.jac, s.rhs, x, cfg, d, ex);
        });
        t[slot++] = tr.wall_s;
        if (p == 4) comm4 = tr.breakdown.local_pct() + tr.breakdown.global_pct();
      }
      speed.push_back(t[0] / t[1]);
      comm.push_back(comm4);
      if (ne == 25) speed25 = t[0] / t[1];
    }
    int speed_inv = 0, comm_inv = 0;
    for (int i = 1; i < 3; ++i) {
      if (speed[i] < speed[i - 1]) ++speed_inv;
      if (comm[i] > comm[i - 1]) ++comm_inv;
    }
    timing_ok = speed25 >= 2.0 && speed_inv <= 1 && comm_inv <= 1;
    det << "; speedup(ne=25,p=4)=" << fmt(speed25, 3) << "; trend inversions "
        << speed_inv << "/" << comm_inv;
  }
  return {kernels_ok && bitwise_ok && timing_ok, det.str()};
}

// ---------------------------------------------------------------------------
// 10. Spectral action of the preconditioner on a known diagonal operator:
//     the smallest eigendirections move next to |mu|.

Outcome criterion_10() {
  const int n = 50;
  CsrMatrix a;
  a.n = n;
  a.row_ptr.resize(n + 1);
  a.col_idx.resize(n);
  a.values.resize(n);
  for (int i = 0; i < n; ++i) {
    a.row_ptr[i] = index_t(i);
    a.col_idx[i] = index_t(i);
    a.values[i] = double(i + 1);
  }
  a.row_ptr[n] = n;

  Executor ex;
  DenseVector b(n, 1.0 / std::sqrt(double(n)));
  GmresConfig cfg;
  cfg.m = 8;
  cfg.max_restarts = 5;
  cfg.fixed_iterations = true;

  DeflationConfig dcfg;
  dcfg.r_max = 20;
  Deflator d(dcfg);
  DenseVector x(n, 0.0);
  deflated_gmres(a, b, x, cfg, d, ex);

  // Dense oracle: eigenvalues of A M^{-1} built column by column.
  Eigen::MatrixXd bm(n, n);
  DenseVector ej(n, 0.0), mj(n), amj(n);
  for (int j = 0; j < n; ++j) {
    ej.assign(n, 0.0);
    ej[j] = 1.0;
    d.apply(ej, mj, ex);
    ex.spmv(a, mj, amj);
    bm.col(j) = Eigen::Map<const Eigen::VectorXd>(amj.data(), n);
  }
  const Eigen::EigenSolver<Eigen::MatrixXd> es(bm);

  const double mu = d.mu();
  int near_mu = 0;
  double min_real = 1e300, max_imag = 0.0;
  for (int i = 0; i < n; ++i) {
    const double re = es.eigenvalues()[i].real();
    max_imag = std::max(max_imag, std::abs(es.eigenvalues()[i].imag()));
    min_real = std::min(min_real, re);
    if (std::abs(re - mu) / mu < 0.05) ++near_mu;
  }
  // The five smallest directions (1..5) must be gone from the spectrum and
  // replaced by copies near |mu|; direction 6 is the smallest survivor.
  const bool pass = d.rank() == 5 && near_mu >= 5 && min_real > 5.5 &&
                    max_imag < 1e-8;
  std::ostringstream det;
  det << "rank=" << d.rank() << " |mu|=" << fmt(mu, 4) << "; " << near_mu
      << " eigenvalues within 5% of |mu|; smallest remaining " << fmt(min_real, 3);
  return {pass, det.str()};
}

}  // namespace

int main() {
  struct Check {
    int id;
    const char* label;
    Outcome (*fn)();
  };
  const Check checks[] = {
      {1, "pattern statistics table", criterion_1},
      {2, "benchmark relative error < 1e-3", criterion_2},
      {3, "deflated <= 0.1x undeflated at restart 100", criterion_3},
      {4, "dense-LU equivalence on the tiny mesh", criterion_4},
      {5, "monitored residual = explicit residual", criterion_5},
      {6, "Jacobian vs finite differences", criterion_6},
      {7, "nonlinear solve invariants", criterion_7},
      {8, "deflation-basis algebra per restart", criterion_8},
      {9, "parallel equivalence and speedup", criterion_9},
      {10, "preconditioner spectral action", criterion_10},
  };

  int failed = 0;
  for (const Check& c : checks) {
    const Outcome o = c.fn();
    if (!o.pass) ++failed;
    std::cout << "CRITERION " << c.id << " (" << c.label
              << "): " << (o.pass ? "PASS" : "FAIL") << " — " << o.detail
              << std::endl;
  }
  std::cout << (10 - failed) << "/10 criteria pass" << std::endl;
  return failed;
}
