#include "dgmres/deflation.hpp"

#include <cmath>
#include <cstddef>
#include <iostream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace dgmres {
namespace {

/// Square k x k head of the cycle's unrotated Hessenberg matrix.
Eigen::MatrixXd hessenberg_block(const GmresWorkspace& ws, std::uint32_t k) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(k, k);
  for (std::uint32_t j = 0; j < k; ++j) {
    const std::uint32_t top = std::min(k - 1, j + 1);
    for (std::uint32_t i = 0; i <= top; ++i) h(i, j) = ws.hess(i, j);
  }
  return h;
}

struct RitzEstimate {
  bool converged = false;
  double value = 0.0;
  Eigen::VectorXd vec;
};

/// Inverse power iteration: the eigenvalue of smallest magnitude.
RitzEstimate smallest_ritz_pair(const Eigen::MatrixXd& h, std::uint32_t maxit,
                                double tol) {
  RitzEstimate est;
  const auto k = h.rows();
  const double scale = h.norm();
  if (!(scale > 0.0) || !std::isfinite(scale)) return est;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(h);
  Eigen::VectorXd z = Eigen::VectorXd::Constant(k, 1.0 / std::sqrt(double(k)));
  for (std::uint32_t it = 0; it < maxit; ++it) {
    Eigen::VectorXd next = lu.solve(z);
    const double nz = next.norm();
    if (!std::isfinite(nz) || nz == 0.0) return est;  // singular block
    z = next / nz;
    const double theta = z.dot(h * z);
    const double resid = (h * z - theta * z).norm();
    est.value = theta;
    est.vec = z;
    if (resid <= tol * scale) {
      est.converged = true;
      return est;
    }
  }
  return est;
}

/// Power iteration: the eigenvalue of largest magnitude.
RitzEstimate largest_ritz_value(const Eigen::MatrixXd& h, std::uint32_t maxit,
                                double tol) {
  RitzEstimate est;
  const auto k = h.rows();
  const double scale = h.norm();
  if (!(scale > 0.0) || !std::isfinite(scale)) return est;
  Eigen::VectorXd z = Eigen::VectorXd::Constant(k, 1.0 / std::sqrt(double(k)));
  for (std::uint32_t it = 0; it < maxit; ++it) {
    Eigen::VectorXd next = h * z;
    const double nz = next.norm();
    if (!std::isfinite(nz) || nz == 0.0) return est;
    z = next / nz;
    const double theta = z.dot(h * z);
    const double resid = (h * z - theta * z).norm();
    est.value = theta;
    est.vec = z;
    if (resid <= tol * scale) {
      est.converged = true;
      return est;
    }
  }
  // A power iterate that has not met the tolerance is still a usable
  // magnitude estimate for the running maximum.
  est.converged = est.vec.size() > 0;
  return est;
}

}  // namespace

Deflator::Deflator(DeflationConfig cfg) : cfg_(cfg) {
  if (cfg_.r_max == 0) throw std::invalid_argument("deflation: r_max must be positive");
  if (cfg_.drop == 0) throw std::invalid_argument("deflation: drop must be positive");
}

void Deflator::reset() {
  r_ = 0;
  mu_ = 0.0;
  skipped_ = 0;
  history_.clear();
}

std::vector<const double*> Deflator::u_cols(std::uint32_t count) const {
  std::vector<const double*> cols(count);
  for (std::uint32_t j = 0; j < count; ++j) cols[j] = U_.col(j).data();
  return cols;
}

void Deflator::apply(const DenseVector& v, DenseVector& w, Executor& ex) const {
  w.resize(v.size());
  ex.copy(v, w);
  if (r_ == 0) return;
  const auto cols = u_cols(r_);
  std::vector<double> t(r_);
  ex.panel_dot(cols, v, t);
  Eigen::Map<const Eigen::VectorXd> tm(t.data(), r_);
  Eigen::VectorXd s = T_lu_.solve(tm);
  std::vector<double> coeff(r_);
  const double amu = std::abs(mu_);
  for (std::uint32_t j = 0; j < r_; ++j) coeff[j] = amu * s[j] - t[j];
  ex.panel_axpy(coeff, cols, w);
}

void Deflator::observe_ritz(double value) {
  if (std::isfinite(value) && std::abs(value) > std::abs(mu_)) mu_ = value;
}

bool Deflator::push_vector(const DenseVector& candidate, const LinearOp& opA,
                           Executor& ex) {
  const index_t n = static_cast<index_t>(candidate.size());
  if (U_.rows() != static_cast<Eigen::Index>(n)) {
    U_.resize(n, cfg_.r_max + 1);
    AU_.resize(n, cfg_.r_max + 1);
    T_ = Eigen::MatrixXd::Zero(cfg_.r_max + 1, cfg_.r_max + 1);
    r_ = 0;
  }
  if (r_ >= static_cast<std::uint32_t>(U_.cols())) {
    ++skipped_;  // a failed truncation left the basis full
    return false;
  }

  DenseVector u = candidate;
  const double norm_in = ex.norm2(u);
  if (!(norm_in > 0.0) || !std::isfinite(norm_in)) {
    ++skipped_;
    return false;
  }

  // Two-pass modified Gram-Schmidt against the current basis.
  if (r_ > 0) {
    const auto cols = u_cols(r_);
    std::vector<double> proj(r_), neg(r_);
    for (int pass = 0; pass < 2; ++pass) {
      ex.panel_dot(cols, u, proj);
      for (std::uint32_t j = 0; j < r_; ++j) neg[j] = -proj[j];
      ex.panel_axpy(neg, cols, u);
    }
  }
  const double norm_left = ex.norm2(u);
  if (!(norm_left >= cfg_.accept_tol * norm_in)) {
    ++skipped_;  // candidate already lives in span(U)
    return false;
  }
  ex.scal(1.0 / norm_left, u);

  const std::uint32_t j = r_;
  Eigen::Map<Eigen::VectorXd>(U_.col(j).data(), n) =
      Eigen::Map<const Eigen::VectorXd>(u.data(), n);

  DenseVector au(n);
  opA(u, au);
  Eigen::Map<Eigen::VectorXd>(AU_.col(j).data(), n) =
      Eigen::Map<const Eigen::VectorXd>(au.data(), n);

  if (j > 0) {
    T_.block(0, j, j, 1).noalias() = U_.leftCols(j).transpose() * AU_.col(j);
    T_.block(j, 0, 1, j).noalias() = U_.col(j).transpose() * AU_.leftCols(j);
  }
  T_(j, j) = U_.col(j).dot(AU_.col(j));
  ++r_;

  while (r_ > cfg_.r_max) {
    const std::uint32_t before = r_;
    truncate();
    if (r_ == before) break;  // truncation declined; stop rather than loop
  }
  refresh_lu();
  return true;
}

void Deflator::truncate() {
  for (std::uint32_t dropped = 0; dropped < cfg_.drop && r_ > 1; ++dropped) {
    const std::uint32_t r = r_;
    Eigen::MatrixXd tb = T_.topLeftCorner(r, r);
    Eigen::EigenSolver<Eigen::MatrixXd> es(tb);
    if (es.info() != Eigen::Success) {
      std::cerr << "deflation: eigen decomposition of T failed; truncation skipped\n";
      return;
    }
    Eigen::Index dominant = 0;
    es.eigenvalues().cwiseAbs().maxCoeff(&dominant);
    Eigen::VectorXd v = es.eigenvectors().col(dominant).real();
    if (v.norm() <= 1e-12) v = es.eigenvectors().col(dominant).imag();
    const double vn = v.norm();
    if (!(vn > 0.0) || !std::isfinite(vn)) {
      std::cerr << "deflation: degenerate dominant eigenvector; truncation skipped\n";
      return;
    }
    v /= vn;

    // Householder reflection mapping v onto the last coordinate axis; its
    // first r-1 columns form an orthonormal basis of the complement of v.
    Eigen::VectorXd hv = v;
    const double sigma = v[r - 1] >= 0.0 ? 1.0 : -1.0;
    hv[r - 1] += sigma;
    const double denom = hv.squaredNorm();
    Eigen::MatrixXd p = Eigen::MatrixXd::Identity(r, r);
    if (denom > 0.0) p -= (2.0 / denom) * (hv * hv.transpose());
    const Eigen::MatrixXd q = p.leftCols(r - 1);

    const Eigen::MatrixXd unew = U_.leftCols(r) * q;
    const Eigen::MatrixXd aunew = AU_.leftCols(r) * q;
    U_.leftCols(r - 1) = unew;
    AU_.leftCols(r - 1) = aunew;
    const Eigen::MatrixXd tnew = q.transpose() * tb * q;
    T_.topLeftCorner(r - 1, r - 1) = tnew;
    r_ = r - 1;
  }
  refresh_lu();
}

void Deflator::refresh_lu() {
  if (r_ == 0) return;
  T_lu_.compute(T_.topLeftCorner(r_, r_));
}

bool Deflator::update_from_restart(const RestartContext& ctx, const LinearOp& opA,
                                   Executor& ex) {
  const std::uint32_t k = ctx.steps;
  double theta = std::numeric_limits<double>::quiet_NaN();
  bool added = false;
  if (k > 0) {
    const Eigen::MatrixXd h = hessenberg_block(ctx.ws, k);

    const RitzEstimate big =
        largest_ritz_value(h, cfg_.power_maxit, cfg_.inv_power_tol);
    if (big.converged) observe_ritz(big.value);

    const RitzEstimate small =
        smallest_ritz_pair(h, cfg_.inv_power_maxit, cfg_.inv_power_tol);
    if (small.converged) {
      theta = small.value;
      // Lift the Ritz eigenvector through the Arnoldi basis: u = V z.
      const index_t n = ctx.ws.n();
      DenseVector u(n, 0.0);
      std::vector<const double*> vcols(k);
      for (std::uint32_t j = 0; j < k; ++j) vcols[j] = ctx.ws.basis(j).data();
      std::vector<double> z(small.vec.data(), small.vec.data() + k);
      ex.panel_axpy(z, vcols, u);
      added = push_vector(u, opA, ex);
    } else {
      ++skipped_;
    }
  } else {
    ++skipped_;
  }
  history_.push_back({ctx.restart, r_, mu_, theta});
  return added;
}

void Deflator::write_csv(std::ostream& os) const {
  os << "restart,r,mu,smallest_ritz\n";
  os.precision(17);
  for (const auto& rec : history_) {
    os << rec.restart << ',' << rec.r << ',' << rec.mu << ',' << rec.smallest_ritz
       << '\n';
  }
}

RestartHook deflation_hook(Deflator& d, LinearOp opA, Executor& ex) {
  return [&d, opA = std::move(opA), &ex](const RestartContext& ctx) {
    d.update_from_restart(ctx, opA, ex);
  };
}

GmresReport deflated_gmres(const CsrMatrix& A, const DenseVector& b, DenseVector& x,
                           const GmresConfig& cfg, Deflator& d, Executor& ex) {
  LinearOp opA = [&A, &ex](const DenseVector& in, DenseVector& out) {
    out.resize(in.size());
    ex.spmv(A, in, out);
  };
  LinearOp opM = [&d, &ex](const DenseVector& in, DenseVector& out) {
    d.apply(in, out, ex);
  };
  return gmres_restarted(opA, opM, b, x, cfg, ex, deflation_hook(d, opA, ex));
}

}  // namespace dgmres
