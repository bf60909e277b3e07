#include "dgmres/gmres.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace dgmres {

GmresWorkspace::GmresWorkspace(index_t n, std::uint32_t m) : n_(n), m_(m) {
  if (m == 0) throw std::invalid_argument("GmresWorkspace: m must be positive");
  v_.assign(m + 1, DenseVector(n, 0.0));
  h_rot_.assign(std::size_t(m + 1) * m, 0.0);
  h_orig_.assign(std::size_t(m + 1) * m, 0.0);
  g_.assign(m + 1, 0.0);
  cs_.assign(m, 0.0);
  sn_.assign(m, 0.0);
  w_.assign(n, 0.0);
  t_.assign(n, 0.0);
}

void GmresWorkspace::begin_cycle(const DenseVector& r, double beta, Executor& ex) {
  ex.copy(r, v_[0]);
  if (beta > 0.0) ex.scal(1.0 / beta, v_[0]);
  std::fill(g_.begin(), g_.end(), 0.0);
  g_[0] = beta;
}

double GmresWorkspace::arnoldi_step(const LinearOp& opA, const LinearOp& opM,
                                    std::uint32_t k, Executor& ex) {
  if (opM) {
    opM(v_[k], t_);
    opA(t_, w_);
  } else {
    opA(v_[k], w_);
  }
  const std::size_t col = std::size_t(k) * (m_ + 1);
  for (std::uint32_t i = 0; i <= k; ++i) {
    const double h = ex.dot(v_[i], w_);
    h_rot_[col + i] = h;
    h_orig_[col + i] = h;
    ex.axpy(-h, v_[i], w_);
  }
  double hnext = ex.norm2(w_);
  // Heavy cancellation in the sweep erodes orthogonality; when the
  // remainder lost more than half its mass (Pythagoras reconstructs the
  // pre-sweep norm from the coefficients), a second sweep restores it.
  double mass = hnext * hnext;
  for (std::uint32_t i = 0; i <= k; ++i) mass += h_orig_[col + i] * h_orig_[col + i];
  if (hnext > 0.0 && hnext * hnext < 0.5 * mass) {
    for (std::uint32_t i = 0; i <= k; ++i) {
      const double c = ex.dot(v_[i], w_);
      h_rot_[col + i] += c;
      h_orig_[col + i] += c;
      ex.axpy(-c, v_[i], w_);
    }
    hnext = ex.norm2(w_);
  }
  h_rot_[col + k + 1] = hnext;
  h_orig_[col + k + 1] = hnext;
  if (hnext > 0.0) {
    ex.copy(w_, v_[k + 1]);
    ex.scal(1.0 / hnext, v_[k + 1]);
  }
  return hnext;
}

double GmresWorkspace::apply_rotations_and_update(std::uint32_t k) {
  const std::size_t col = std::size_t(k) * (m_ + 1);
  for (std::uint32_t i = 0; i < k; ++i) {
    const double hi = h_rot_[col + i];
    const double hj = h_rot_[col + i + 1];
    h_rot_[col + i] = cs_[i] * hi + sn_[i] * hj;
    h_rot_[col + i + 1] = -sn_[i] * hi + cs_[i] * hj;
  }
  const double a = h_rot_[col + k];
  const double b = h_rot_[col + k + 1];
  const double r = std::hypot(a, b);
  if (r == 0.0) {
    cs_[k] = 1.0;
    sn_[k] = 0.0;
  } else {
    cs_[k] = a / r;
    sn_[k] = b / r;
  }
  h_rot_[col + k] = r;
  h_rot_[col + k + 1] = 0.0;
  g_[k + 1] = -sn_[k] * g_[k];
  g_[k] = cs_[k] * g_[k];
  return std::abs(g_[k + 1]);
}

std::vector<double> GmresWorkspace::solve_least_squares(std::uint32_t k) const {
  std::vector<double> y(g_.begin(), g_.begin() + k);
  for (std::uint32_t i = k; i-- > 0;) {
    const std::size_t col = std::size_t(i) * (m_ + 1);
    const double d = h_rot_[col + i];
    if (d == 0.0) {
      throw std::runtime_error("gmres: singular projection in least squares");
    }
    double s = y[i];
    for (std::uint32_t j = i + 1; j < k; ++j) {
      s -= h_rot_[std::size_t(j) * (m_ + 1) + i] * y[j];
    }
    y[i] = s / d;
  }
  return y;
}

void GmresWorkspace::correction(std::span<const double> y, DenseVector& z,
                                Executor& ex) const {
  z.assign(n_, 0.0);
  std::vector<const double*> cols(y.size());
  for (std::size_t j = 0; j < y.size(); ++j) cols[j] = v_[j].data();
  ex.panel_axpy(y, cols, z);
}

void GmresReport::write_csv(std::ostream& os) const {
  os << "restart,inner_step,monitored_residual,explicit_residual\n";
  os.precision(17);
  for (std::size_t i = 0; i < inner.size(); ++i) {
    const InnerRecord& rec = inner[i];
    const bool closes_cycle =
        i + 1 == inner.size() || inner[i + 1].restart != rec.restart;
    os << rec.restart << ',' << rec.inner << ',' << rec.monitored << ',';
    if (closes_cycle && rec.restart < explicit_residual.size()) {
      os << explicit_residual[rec.restart];
    }
    os << '\n';
  }
}

GmresReport gmres_restarted(const LinearOp& opA, const LinearOp& opM,
                            const DenseVector& b, DenseVector& x,
                            const GmresConfig& cfg, Executor& ex,
                            const RestartHook& hook) {
  const index_t n = static_cast<index_t>(b.size());
  GmresReport rep;
  GmresWorkspace ws(n, cfg.m);
  DenseVector r(n), tmp(n);

  // r = b - A x
  auto refresh_residual = [&] {
    opA(x, tmp);
    ex.copy(b, r);
    ex.axpy(-1.0, tmp, r);
    return ex.norm2(r);
  };

  double beta = refresh_residual();
  rep.beta0 = beta;
  if (!std::isfinite(beta)) {
    throw std::runtime_error("gmres: initial residual is not finite");
  }
  if (beta == 0.0) {
    rep.converged = true;
    return rep;
  }

  for (std::uint32_t restart = 0; restart < cfg.max_restarts; ++restart) {
    ws.begin_cycle(r, beta, ex);
    std::uint32_t steps = 0;
    bool lucky = false;
    for (std::uint32_t k = 0; k < cfg.m; ++k) {
      const double h = ws.arnoldi_step(opA, opM, k, ex);
      if (!std::isfinite(h)) {
        throw std::runtime_error("gmres: non-finite Arnoldi coefficient at restart " +
                                 std::to_string(restart) + ", step " +
                                 std::to_string(k));
      }
      const double monitored = ws.apply_rotations_and_update(k);
      rep.inner.push_back({restart, k, monitored});
      steps = k + 1;
      if (h < cfg.breakdown_scale * beta) {
        lucky = true;  // Krylov space exhausted; accept the cycle early
        break;
      }
      if (!cfg.fixed_iterations && monitored <= cfg.rel_tol * rep.beta0) {
        break;
      }
    }
    const std::vector<double> y = ws.solve_least_squares(steps);
    ws.correction(y, tmp, ex);  // tmp = V y
    if (opM) {
      opM(tmp, r);  // r is refreshed below, safe as scratch
      ex.axpy(1.0, r, x);
    } else {
      ex.axpy(1.0, tmp, x);
    }
    if (hook) hook(RestartContext{ws, steps, restart});

    beta = refresh_residual();
    rep.explicit_residual.push_back(beta);
    rep.restarts = restart + 1;
    rep.total_inner += steps;
    if (!std::isfinite(beta)) {
      throw std::runtime_error("gmres: non-finite residual after restart " +
                               std::to_string(restart));
    }
    if (lucky) {
      rep.breakdown = true;
      rep.converged = true;
      break;
    }
    if (!cfg.fixed_iterations && beta <= cfg.rel_tol * rep.beta0) {
      rep.converged = true;
      break;
    }
    if (beta == 0.0) {
      rep.converged = true;
      break;
    }
  }
  rep.final_relative = rep.beta0 > 0.0 ? beta / rep.beta0 : 0.0;
  if (!rep.converged && !cfg.fixed_iterations) {
    rep.converged = beta <= cfg.rel_tol * rep.beta0;
  }
  return rep;
}

}  // namespace dgmres
