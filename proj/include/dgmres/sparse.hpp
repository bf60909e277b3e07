#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "dgmres/mesh.hpp"

namespace dgmres {

using DenseVector = std::vector<double>;

/// Compressed sparse row storage: 8-byte values, 4-byte column indices,
/// columns sorted ascending within each row (assembly relies on binary
/// search to locate scatter targets).
struct CsrMatrix {
  index_t n = 0;
  std::vector<index_t> row_ptr;  // size n+1
  std::vector<index_t> col_idx;  // size nnz, sorted per row
  std::vector<double> values;    // size nnz

  std::uint64_t nnz() const { return col_idx.size(); }
};

/// y = A x, rows accumulated in ascending column order.
void spmv(const CsrMatrix& A, std::span<const double> x, std::span<double> y);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

/// Bytes held by a CSR matrix of the given shape: 12 per stored entry
/// (value + column index) plus 4 per row offset.
std::uint64_t memory_footprint(std::uint64_t nnz, std::uint64_t n);

/// Coordinate-format Matrix Market export, 1-based indices.
void write_matrix_market(const CsrMatrix& A, std::ostream& os);

}  // namespace dgmres
