#include "dgmres/newton.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "dgmres/assembly.hpp"

namespace dgmres {

void NewtonReport::write_csv(std::ostream& os) const {
  os << "iter,update_inf_norm,residual_2norm,gmres_restarts\n";
  os.precision(17);
  for (const auto& rec : iters) {
    os << rec.iter << ',' << rec.update_inf << ',' << rec.residual_norm << ','
       << rec.gmres_restarts << '\n';
  }
}

namespace {

double inf_norm(const DenseVector& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

NewtonReport newton_solve(const StructuredMesh& mesh, double lambda, DenseVector& u,
                          const NewtonConfig& cfg, Executor& ex) {
  if (cfg.max_iters == 0) throw std::invalid_argument("newton: max_iters must be positive");
  if (u.size() != mesh.n_nodes) u.assign(mesh.n_nodes, 0.0);

  std::vector<double> stages;
  if (cfg.continuation && cfg.continuation_steps > 1) {
    for (std::uint32_t s = 1; s <= cfg.continuation_steps; ++s)
      stages.push_back(lambda * double(s) / double(cfg.continuation_steps));
  } else {
    stages.push_back(lambda);
  }

  NewtonReport report;
  CsrMatrix jac;  // sparsity built on first assembly, values rewritten after
  DenseVector residual(mesh.n_nodes), rhs(mesh.n_nodes), delta(mesh.n_nodes);
  Deflator deflator(cfg.deflation);
  std::uint32_t iter = 0;

  for (double stage_lambda : stages) {
    bool stage_done = false;
    for (std::uint32_t it = 0; it < cfg.max_iters; ++it) {
      assemble_residual(mesh, stage_lambda, u, residual, ex);
      const double res_norm = ex.norm2(residual);
      for (index_t i = 0; i < mesh.n_nodes; ++i) rhs[i] = -residual[i];

      assemble_jacobian(mesh, stage_lambda, u, jac, ex);
      std::fill(delta.begin(), delta.end(), 0.0);

      GmresReport lin;
      if (cfg.use_deflation) {
        deflator.reset();
        lin = deflated_gmres(jac, rhs, delta, cfg.gmres, deflator, ex);
      } else {
        LinearOp opA = [&jac, &ex](const DenseVector& in, DenseVector& out) {
          out.resize(in.size());
          ex.spmv(jac, in, out);
        };
        lin = gmres_restarted(opA, nullptr, rhs, delta, cfg.gmres, ex);
      }

      ex.axpy(1.0, delta, u);
      const double step = inf_norm(delta);

      ++iter;
      report.iters.push_back({iter, stage_lambda, step, res_norm, lin.restarts,
                              lin.total_inner});
      report.total_inner += lin.total_inner;
      report.final_update = step;
      report.final_residual = res_norm;

      if (step <= cfg.update_tol) {
        stage_done = true;
        break;
      }
    }
    if (!stage_done) {
      report.converged = false;
      return report;
    }
  }

  assemble_residual(mesh, stages.back(), u, residual, ex);
  report.final_residual = ex.norm2(residual);
  report.converged = true;
  return report;
}

}  // namespace dgmres
