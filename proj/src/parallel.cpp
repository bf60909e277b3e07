#include "dgmres/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <barrier>
#include <cassert>
#include <cmath>
#include <cstring>
#include <exception>
#include <stdexcept>
#include <thread>

namespace dgmres {

namespace {

using clk = std::chrono::steady_clock;

inline std::uint64_t ns_between(clk::time_point a, clk::time_point b) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(b - a).count();
}

inline void cpu_relax() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_ia32_pause();
#else
  std::this_thread::yield();
#endif
}

// Fixed pairwise fold: adjacent pairs collapse, an odd tail passes through.
// Depends only on the number of summands, never on who computed them.
double pairwise_fold(std::span<double> s) {
  std::size_t n = s.size();
  if (n == 0) return 0.0;
  while (n > 1) {
    std::size_t m = n / 2;
    for (std::size_t i = 0; i < m; ++i) s[i] = s[2 * i] + s[2 * i + 1];
    if (n % 2) {
      s[m] = s[n - 1];
      ++m;
    }
    n = m;
  }
  return s[0];
}

}  // namespace

Partition partition_rows(const StructuredMesh& mesh, unsigned p) {
  const index_t plane = mesh.n_axis * mesh.n_axis;
  const unsigned planes = mesh.n_axis;
  if (p == 0 || p > planes) {
    throw std::invalid_argument("partition_rows: need 1 <= p <= n_axis");
  }
  Partition part;
  part.n = mesh.n_nodes;
  part.block = plane;
  const unsigned q = planes / p, rem = planes % p;
  unsigned zb = 0;
  for (unsigned w = 0; w < p; ++w) {
    const unsigned ze = zb + q + (w < rem ? 1 : 0);
    part.ranges.push_back({zb * plane, ze * plane});
    const unsigned lo = zb >= 2 ? zb - 2 : 0;
    const unsigned hi = std::min(planes, ze + 2);
    part.halo_lo.push_back({lo * plane, zb * plane});
    part.halo_hi.push_back({ze * plane, hi * plane});
    zb = ze;
  }
  return part;
}

Partition partition_range(index_t n, unsigned p, index_t block) {
  if (n == 0 || block == 0) throw std::invalid_argument("partition_range: empty");
  const index_t nb = (n + block - 1) / block;
  if (p == 0 || p > nb) {
    throw std::invalid_argument("partition_range: need 1 <= p <= block count");
  }
  Partition part;
  part.n = n;
  part.block = block;
  const index_t q = nb / p, rem = nb % p;
  index_t bb = 0;
  for (unsigned w = 0; w < p; ++w) {
    const index_t be = bb + q + (w < rem ? 1 : 0);
    const index_t rb = bb * block;
    const index_t re = std::min<std::uint64_t>(std::uint64_t(be) * block, n);
    part.ranges.push_back({rb, re});
    part.halo_lo.push_back({0, rb});
    part.halo_hi.push_back({re, n});
    bb = be;
  }
  return part;
}

// ---------------------------------------------------------------------------
// Worker team: p-1 persistent threads plus the calling thread as worker 0.
// Dispatch is a generation counter; intra-kernel synchronization is one
// barrier whose completion step runs the kernel's combine function.

struct Executor::Team {
  struct Done {
    Team* t;
    void operator()() noexcept {
      if (t->on_barrier) t->on_barrier();
    }
  };

  explicit Team(unsigned p)
      : bar(p, Done{this}) {
    threads.reserve(p - 1);
    for (unsigned w = 1; w < p; ++w) {
      threads.emplace_back([this, w] { loop(w); });
    }
  }

  ~Team() {
    quit.store(true, std::memory_order_release);
    gen.fetch_add(1, std::memory_order_acq_rel);
    gen.notify_all();
    for (auto& t : threads) t.join();
  }

  void loop(unsigned w) {
    std::uint64_t seen = 0;
    for (;;) {
      std::uint64_t g;
      int spins = 0;
      while ((g = gen.load(std::memory_order_acquire)) == seen) {
        if (++spins < 2048) {
          cpu_relax();
        } else {
          gen.wait(seen, std::memory_order_acquire);
        }
      }
      seen = g;
      if (quit.load(std::memory_order_acquire)) return;
      try {
        job(w);
      } catch (...) {
        bool expected = false;
        if (failed.compare_exchange_strong(expected, true)) err = std::current_exception();
      }
      pending.fetch_sub(1, std::memory_order_acq_rel);
      pending.notify_one();
    }
  }

  void run(const std::function<void(unsigned)>& f) {
    job = f;
    pending.store(static_cast<unsigned>(threads.size()), std::memory_order_release);
    gen.fetch_add(1, std::memory_order_acq_rel);
    gen.notify_all();
    try {
      f(0);
    } catch (...) {
      bool expected = false;
      if (failed.compare_exchange_strong(expected, true)) err = std::current_exception();
    }
    unsigned left;
    int spins = 0;
    while ((left = pending.load(std::memory_order_acquire)) != 0) {
      if (++spins < 2048) {
        cpu_relax();
      } else {
        pending.wait(left, std::memory_order_acquire);
      }
    }
    if (failed.load(std::memory_order_acquire)) {
      failed.store(false, std::memory_order_release);
      auto e = err;
      err = nullptr;
      std::rethrow_exception(e);
    }
  }

  std::vector<std::thread> threads;
  std::function<void(unsigned)> job;
  std::function<void()> on_barrier;
  std::atomic<std::uint64_t> gen{0};
  std::atomic<unsigned> pending{0};
  std::atomic<bool> quit{false};
  std::atomic<bool> failed{false};
  std::exception_ptr err;
  std::barrier<Done> bar;
};

Executor::Executor() : clocks_(1) {}

Executor::Executor(Partition part, bool deterministic)
    : part_(std::move(part)),
      p_(part_.workers()),
      deterministic_(deterministic),
      sequential_(false) {
  if (p_ == 0) throw std::invalid_argument("Executor: empty partition");
  clocks_.resize(p_);
  halo_buf_lo_.resize(p_);
  halo_buf_hi_.resize(p_);
  for (unsigned w = 0; w < p_; ++w) {
    halo_buf_lo_[w].resize(part_.halo_lo[w].size());
    halo_buf_hi_[w].resize(part_.halo_hi[w].size());
  }
  if (p_ > 1) team_ = std::make_unique<Team>(p_);
}

Executor::~Executor() = default;

void Executor::run(const std::function<void(unsigned)>& body) {
  if (team_) {
    team_->run(body);
  } else {
    body(0);
  }
}

void Executor::reset_timers() {
  for (auto& c : clocks_) c = WorkerClock{};
}

TimingBreakdown Executor::timers() const {
  TimingBreakdown t;
  for (const auto& c : clocks_) {
    t.compute_s += 1e-9 * c.compute_ns;
    t.local_s += 1e-9 * c.local_ns;
    t.global_s += 1e-9 * c.global_ns;
  }
  return t;
}

void Executor::spmv(const CsrMatrix& A, const DenseVector& x, DenseVector& y) {
  assert(x.size() == A.n && y.size() == A.n);
  if (sequential_) {
    const auto t0 = clk::now();
    dgmres::spmv(A, x, y);
    clocks_[0].compute_ns += ns_between(t0, clk::now());
    return;
  }
  const index_t* rp = A.row_ptr.data();
  const index_t* ci = A.col_idx.data();
  const double* va = A.values.data();
  const double* xp = x.data();
  double* yp = y.data();
  if (team_) team_->on_barrier = nullptr;
  run([&](unsigned w) {
    const RowRange r = part_.ranges[w];
    const RowRange hlo = part_.halo_lo[w];
    const RowRange hhi = part_.halo_hi[w];
    const auto t0 = clk::now();
    // explicit halo gather so neighbor traffic is measurable
    double* lo = halo_buf_lo_[w].data();
    double* hi = halo_buf_hi_[w].data();
    if (!hlo.empty()) std::memcpy(lo, xp + hlo.begin, sizeof(double) * hlo.size());
    if (!hhi.empty()) std::memcpy(hi, xp + hhi.begin, sizeof(double) * hhi.size());
    const auto t1 = clk::now();
    for (index_t i = r.begin; i < r.end; ++i) {
      const index_t kb = rp[i], ke = rp[i + 1];
      const index_t k1 =
          static_cast<index_t>(std::lower_bound(ci + kb, ci + ke, r.begin) - ci);
      const index_t k2 =
          static_cast<index_t>(std::lower_bound(ci + k1, ci + ke, r.end) - ci);
      assert(kb == k1 || ci[kb] >= hlo.begin);
      assert(k2 == ke || ci[ke - 1] < hhi.end);
      double acc = 0.0;
      index_t k = kb;
      for (; k < k1; ++k) acc += va[k] * lo[ci[k] - hlo.begin];
      for (; k < k2; ++k) acc += va[k] * xp[ci[k]];
      for (; k < ke; ++k) acc += va[k] * hi[ci[k] - hhi.begin];
      yp[i] = acc;
    }
    const auto t2 = clk::now();
    if (team_) team_->bar.arrive_and_wait();
    const auto t3 = clk::now();
    clocks_[w].local_ns += ns_between(t0, t1);
    clocks_[w].compute_ns += ns_between(t1, t2);
    clocks_[w].global_ns += ns_between(t2, t3);
  });
}

void Executor::dot_kernel(unsigned w, const double* a, const double* b, index_t n) {
  const RowRange r = part_.ranges[w];
  const auto t0 = clk::now();
  if (deterministic_) {
    // ranges are block-aligned, so rb always sits on a block boundary
    const index_t block = part_.block;
    for (index_t rb = r.begin; rb < r.end; rb += block) {
      const index_t be = std::min<index_t>(rb + block, r.end);
      double acc = 0.0;
      for (index_t i = rb; i < be; ++i) acc += a[i] * b[i];
      partials_[rb / block] = acc;
    }
  } else {
    double acc = 0.0;
    for (index_t i = r.begin; i < r.end; ++i) acc += a[i] * b[i];
    partials_[w] = acc;
  }
  const auto t1 = clk::now();
  if (team_) team_->bar.arrive_and_wait();
  const auto t2 = clk::now();
  clocks_[w].compute_ns += ns_between(t0, t1);
  clocks_[w].global_ns += ns_between(t1, t2);
  (void)n;
}

double Executor::combine_dot(index_t n) {
  if (deterministic_) {
    const index_t nblocks = (n + part_.block - 1) / part_.block;
    return pairwise_fold(std::span<double>(partials_.data(), nblocks));
  }
  double acc = 0.0;
  for (unsigned w = 0; w < p_; ++w) acc += partials_[w];
  return acc;
}

double Executor::dot(const DenseVector& a, const DenseVector& b) {
  assert(a.size() == b.size());
  const index_t n = static_cast<index_t>(a.size());
  if (sequential_) {
    const auto t0 = clk::now();
    const double r = dgmres::dot(a, b);
    clocks_[0].compute_ns += ns_between(t0, clk::now());
    return r;
  }
  assert(n == part_.n);
  const index_t nblocks = (n + part_.block - 1) / part_.block;
  partials_.assign(deterministic_ ? nblocks : p_, 0.0);
  const double* ap = a.data();
  const double* bp = b.data();
  if (team_) {
    team_->on_barrier = [this, n] { reduce_result_ = combine_dot(n); };
    run([&](unsigned w) { dot_kernel(w, ap, bp, n); });
    team_->on_barrier = nullptr;
  } else {
    dot_kernel(0, ap, bp, n);
    reduce_result_ = combine_dot(n);
  }
  return reduce_result_;
}

double Executor::norm2(const DenseVector& a) { return std::sqrt(dot(a, a)); }

void Executor::axpy(double alpha, const DenseVector& x, DenseVector& y) {
  assert(x.size() == y.size());
  if (sequential_) {
    const auto t0 = clk::now();
    dgmres::axpy(alpha, x, y);
    clocks_[0].compute_ns += ns_between(t0, clk::now());
    return;
  }
  const double* xp = x.data();
  double* yp = y.data();
  if (team_) team_->on_barrier = nullptr;
  run([&](unsigned w) {
    const RowRange r = part_.ranges[w];
    const auto t0 = clk::now();
    for (index_t i = r.begin; i < r.end; ++i) yp[i] += alpha * xp[i];
    const auto t1 = clk::now();
    if (team_) team_->bar.arrive_and_wait();
    const auto t2 = clk::now();
    clocks_[w].compute_ns += ns_between(t0, t1);
    clocks_[w].global_ns += ns_between(t1, t2);
  });
}

void Executor::scal(double alpha, DenseVector& x) {
  if (sequential_) {
    const auto t0 = clk::now();
    for (auto& v : x) v *= alpha;
    clocks_[0].compute_ns += ns_between(t0, clk::now());
    return;
  }
  double* xp = x.data();
  if (team_) team_->on_barrier = nullptr;
  run([&](unsigned w) {
    const RowRange r = part_.ranges[w];
    const auto t0 = clk::now();
    for (index_t i = r.begin; i < r.end; ++i) xp[i] *= alpha;
    const auto t1 = clk::now();
    if (team_) team_->bar.arrive_and_wait();
    const auto t2 = clk::now();
    clocks_[w].compute_ns += ns_between(t0, t1);
    clocks_[w].global_ns += ns_between(t1, t2);
  });
}

void Executor::copy(const DenseVector& src, DenseVector& dst) {
  assert(src.size() == dst.size());
  if (sequential_) {
    const auto t0 = clk::now();
    std::memcpy(dst.data(), src.data(), sizeof(double) * src.size());
    clocks_[0].compute_ns += ns_between(t0, clk::now());
    return;
  }
  const double* sp = src.data();
  double* dp = dst.data();
  if (team_) team_->on_barrier = nullptr;
  run([&](unsigned w) {
    const RowRange r = part_.ranges[w];
    const auto t0 = clk::now();
    std::memcpy(dp + r.begin, sp + r.begin, sizeof(double) * r.size());
    const auto t1 = clk::now();
    if (team_) team_->bar.arrive_and_wait();
    const auto t2 = clk::now();
    clocks_[w].compute_ns += ns_between(t0, t1);
    clocks_[w].global_ns += ns_between(t1, t2);
  });
}

void Executor::panel_dot(std::span<const double* const> cols, const DenseVector& v,
                         std::span<double> out) {
  const std::size_t r = cols.size();
  assert(out.size() == r);
  if (r == 0) return;
  const index_t n = static_cast<index_t>(v.size());
  if (sequential_) {
    const auto t0 = clk::now();
    for (std::size_t j = 0; j < r; ++j) {
      out[j] = dgmres::dot(std::span<const double>(cols[j], n), v);
    }
    clocks_[0].compute_ns += ns_between(t0, clk::now());
    return;
  }
  assert(n == part_.n);
  const index_t nblocks = (n + part_.block - 1) / part_.block;
  const std::size_t slots = (deterministic_ ? nblocks : p_) * r;
  partials_.assign(slots, 0.0);
  const double* vp = v.data();
  auto combine = [this, r, nblocks, out] {
    if (deterministic_) {
      std::vector<double> fold(nblocks);
      for (std::size_t j = 0; j < r; ++j) {
        for (index_t b = 0; b < nblocks; ++b) fold[b] = partials_[b * r + j];
        out[j] = pairwise_fold(fold);
      }
    } else {
      for (std::size_t j = 0; j < r; ++j) {
        double acc = 0.0;
        for (unsigned w = 0; w < p_; ++w) acc += partials_[w * r + j];
        out[j] = acc;
      }
    }
  };
  auto body = [&](unsigned w) {
    const RowRange rng = part_.ranges[w];
    const auto t0 = clk::now();
    if (deterministic_) {
      const index_t block = part_.block;
      for (index_t rb = rng.begin; rb < rng.end; rb += block) {
        const index_t be = std::min<index_t>(rb + block, rng.end);
        for (std::size_t j = 0; j < r; ++j) {
          const double* cj = cols[j];
          double acc = 0.0;
          for (index_t i = rb; i < be; ++i) acc += cj[i] * vp[i];
          partials_[(rb / block) * r + j] = acc;
        }
      }
    } else {
      for (std::size_t j = 0; j < r; ++j) {
        const double* cj = cols[j];
        double acc = 0.0;
        for (index_t i = rng.begin; i < rng.end; ++i) acc += cj[i] * vp[i];
        partials_[w * r + j] = acc;
      }
    }
    const auto t1 = clk::now();
    if (team_) team_->bar.arrive_and_wait();
    const auto t2 = clk::now();
    clocks_[w].compute_ns += ns_between(t0, t1);
    clocks_[w].global_ns += ns_between(t1, t2);
  };
  if (team_) {
    team_->on_barrier = combine;
    run(body);
    team_->on_barrier = nullptr;
  } else {
    body(0);
    combine();
  }
}

void Executor::panel_axpy(std::span<const double> coeff,
                          std::span<const double* const> cols, DenseVector& v) {
  const std::size_t r = cols.size();
  assert(coeff.size() == r);
  if (r == 0) return;
  const index_t n = static_cast<index_t>(v.size());
  if (sequential_) {
    const auto t0 = clk::now();
    for (std::size_t j = 0; j < r; ++j) {
      dgmres::axpy(coeff[j], std::span<const double>(cols[j], n), v);
    }
    clocks_[0].compute_ns += ns_between(t0, clk::now());
    return;
  }
  assert(n == part_.n);
  double* vp = v.data();
  if (team_) team_->on_barrier = nullptr;
  run([&](unsigned w) {
    const RowRange rng = part_.ranges[w];
    const auto t0 = clk::now();
    for (std::size_t j = 0; j < r; ++j) {
      const double a = coeff[j];
      const double* cj = cols[j];
      for (index_t i = rng.begin; i < rng.end; ++i) vp[i] += a * cj[i];
    }
    const auto t1 = clk::now();
    if (team_) team_->bar.arrive_and_wait();
    const auto t2 = clk::now();
    clocks_[w].compute_ns += ns_between(t0, t1);
    clocks_[w].global_ns += ns_between(t1, t2);
  });
}

}  // namespace dgmres
