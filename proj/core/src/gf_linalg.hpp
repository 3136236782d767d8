#pragma once

// Dense linear algebra over GF(p) for the small matrices that arise from
// barcodes (tens of rows). Private to the library.

#include <cstddef>
#include <optional>
#include <vector>

#include "sheafbar/morphism.hpp"

namespace sheafbar::detail {

struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Scalar> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}
  Scalar& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  Scalar operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

DenseMatrix to_dense(const Morphism& f);
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b, const Field& field);
// Row reduction in place; returns the rank. Pivot columns are reported in order.
std::size_t row_reduce(DenseMatrix& m, const Field& field, std::vector<std::size_t>* pivots = nullptr);
std::size_t rank(DenseMatrix m, const Field& field);
std::optional<DenseMatrix> inverse(const DenseMatrix& m, const Field& field);
// One solution of A x = b, or nullopt.
std::optional<std::vector<Scalar>> solve(DenseMatrix a, std::vector<Scalar> b, const Field& field);
// Basis of the null space, as columns of the returned matrix.
DenseMatrix null_space(const DenseMatrix& m, const Field& field);

}  // namespace sheafbar::detail
