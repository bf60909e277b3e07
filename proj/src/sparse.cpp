#include "dgmres/sparse.hpp"

#include <cassert>
#include <cmath>
#include <ostream>

namespace dgmres {

void spmv(const CsrMatrix& A, std::span<const double> x, std::span<double> y) {
  assert(x.size() >= A.n && y.size() >= A.n);
  const index_t* rp = A.row_ptr.data();
  const index_t* ci = A.col_idx.data();
  const double* va = A.values.data();
  for (index_t i = 0; i < A.n; ++i) {
    double acc = 0.0;
    for (index_t k = rp[i]; k < rp[i + 1]; ++k) acc += va[k] * x[ci[k]];
    y[i] = acc;
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

std::uint64_t memory_footprint(std::uint64_t nnz, std::uint64_t n) {
  return 12ull * nnz + 4ull * (n + 1);
}

void write_matrix_market(const CsrMatrix& A, std::ostream& os) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << A.n << ' ' << A.n << ' ' << A.nnz() << '\n';
  os.precision(17);
  for (index_t i = 0; i < A.n; ++i)
    for (index_t k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
      os << i + 1 << ' ' << A.col_idx[k] + 1 << ' ' << A.values[k] << '\n';
}

}  // namespace dgmres
