#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "dgmres/mesh.hpp"
#include "dgmres/sparse.hpp"

namespace dgmres {

struct RowRange {
  index_t begin = 0;
  index_t end = 0;
  index_t size() const { return end - begin; }
  bool empty() const { return begin == end; }
};

/// Contiguous row ownership per worker plus the halo ranges each worker
/// reads during matrix-vector products. `block` is the reduction block
/// size: deterministic dot products accumulate per block and combine the
/// block partials in a fixed pairwise order, which makes the result
/// independent of the worker count. Ranges are always block-aligned.
struct Partition {
  index_t n = 0;
  index_t block = 0;
  std::vector<RowRange> ranges;
  std::vector<RowRange> halo_lo;
  std::vector<RowRange> halo_hi;

  unsigned workers() const { return static_cast<unsigned>(ranges.size()); }
};

/// Split the mesh rows into z-slabs of whole node planes, sizes differing
/// by at most one plane. The quadratic stencil reaches at most two node
/// planes past a slab boundary, so halos are two planes deep (clamped at
/// the domain ends). Requires 1 <= p <= n_axis.
Partition partition_rows(const StructuredMesh& mesh, unsigned p);

/// Generic contiguous partition of [0, n) for matrices without mesh
/// structure; halos cover the full complement of each range.
Partition partition_range(index_t n, unsigned p, index_t block);

struct TimingBreakdown {
  double compute_s = 0.0;
  double local_s = 0.0;   // halo gathers
  double global_s = 0.0;  // reductions and barrier waits

  double total_s() const { return compute_s + local_s + global_s; }
  double compute_pct() const { return pct(compute_s); }
  double local_pct() const { return pct(local_s); }
  double global_pct() const { return pct(global_s); }

 private:
  double pct(double v) const {
    const double t = total_s();
    return t > 0.0 ? 100.0 * v / t : 0.0;
  }
};

/// Shared-memory fork-join executor. A default-constructed executor runs
/// kernels inline with plain sequential semantics. One constructed from a
/// partition owns a persistent worker team; every kernel call fans out
/// over the row ranges and joins before returning. The control flow that
/// issues kernels stays single threaded.
///
/// In deterministic mode (the default) dot reductions are bit-identical
/// for any worker count over the same partition blocks; matrix-vector
/// products and elementwise kernels are bit-identical to the sequential
/// kernels regardless of mode because each row is owned by one worker.
class Executor {
 public:
  Executor();
  explicit Executor(Partition part, bool deterministic = true);
  ~Executor();
  Executor(const Executor&) = delete;
  Executor& operator=(const Executor&) = delete;

  unsigned workers() const { return p_; }
  bool deterministic() const { return deterministic_; }
  const Partition& partition() const { return part_; }

  void spmv(const CsrMatrix& A, const DenseVector& x, DenseVector& y);
  double dot(const DenseVector& a, const DenseVector& b);
  double norm2(const DenseVector& a);
  void axpy(double alpha, const DenseVector& x, DenseVector& y);
  void scal(double alpha, DenseVector& x);
  void copy(const DenseVector& src, DenseVector& dst);

  /// out[j] = cols[j] . v, all columns in one sweep.
  void panel_dot(std::span<const double* const> cols, const DenseVector& v,
                 std::span<double> out);
  /// v += sum_j coeff[j] * cols[j], one sweep.
  void panel_axpy(std::span<const double> coeff, std::span<const double* const> cols,
                  DenseVector& v);

  /// Run a custom body on every worker (used by assembly). The body sees
  /// the worker id; row ownership comes from partition().
  void run(const std::function<void(unsigned)>& body);

  void reset_timers();
  TimingBreakdown timers() const;

 private:
  struct Team;
  struct alignas(64) WorkerClock {
    std::uint64_t compute_ns = 0;
    std::uint64_t local_ns = 0;
    std::uint64_t global_ns = 0;
  };

  void dot_kernel(unsigned w, const double* a, const double* b, index_t n);
  double combine_dot(index_t n);

  Partition part_;
  unsigned p_ = 1;
  bool deterministic_ = true;
  bool sequential_ = true;  // default-constructed: no partition, plain loops
  std::unique_ptr<Team> team_;
  std::vector<WorkerClock> clocks_;
  std::vector<std::vector<double>> halo_buf_lo_, halo_buf_hi_;
  std::vector<double> partials_;
  double reduce_result_ = 0.0;
};

struct TimedResult {
  double wall_s = 0.0;
  TimingBreakdown breakdown;
};

/// Reset timers, run f (a void callable issuing kernels on ex), and return
/// wall time plus the accumulated compute / local / global split.
template <class F>
TimedResult timed_run(Executor& ex, F&& f) {
  ex.reset_timers();
  const auto t0 = std::chrono::steady_clock::now();
  std::forward<F>(f)();
  const auto t1 = std::chrono::steady_clock::now();
  TimedResult r;
  r.wall_s = std::chrono::duration<double>(t1 - t0).count();
  r.breakdown = ex.timers();
  return r;
}

}  // namespace dgmres
