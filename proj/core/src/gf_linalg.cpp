#include "gf_linalg.hpp"

#include <utility>

namespace sheafbar::detail {

DenseMatrix to_dense(const Morphism& f) {
  DenseMatrix m(f.target().size(), f.source().size());
  for (const auto& [key, value] : f.entries()) m(key.first, key.second) = value;
  return m;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b, const Field& field) {
  DenseMatrix out(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t k = 0; k < a.cols; ++k) {
      const Scalar x = a(i, k);
      if (x == 0) continue;
      for (std::size_t j = 0; j < b.cols; ++j) {
        if (b(k, j) != 0) out(i, j) = field.add(out(i, j), field.mul(x, b(k, j)));
      }
    }
  }
  return out;
}

std::size_t row_reduce(DenseMatrix& m, const Field& field, std::vector<std::size_t>* pivots) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
    std::size_t pivot = r;
    while (pivot < m.rows && m(pivot, c) == 0) ++pivot;
    if (pivot == m.rows) continue;
    if (pivot != r) {
      for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(pivot, j), m(r, j));
    }
    const Scalar inv = field.inv(m(r, c));
    for (std::size_t j = 0; j < m.cols; ++j) m(r, j) = field.mul(m(r, j), inv);
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == r || m(i, c) == 0) continue;
      const Scalar factor = m(i, c);
      for (std::size_t j = 0; j < m.cols; ++j) {
        if (m(r, j) != 0) m(i, j) = field.sub(m(i, j), field.mul(factor, m(r, j)));
      }
    }
    if (pivots) pivots->push_back(c);
    ++r;
  }
  return r;
}

std::size_t rank(DenseMatrix m, const Field& field) { return row_reduce(m, field); }

std::optional<DenseMatrix> inverse(const DenseMatrix& m, const Field& field) {
  if (m.rows != m.cols) return std::nullopt;
  const std::size_t n = m.rows;
  DenseMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  std::vector<std::size_t> pivots;
  row_reduce(aug, field, &pivots);
  if (pivots.size() < n || (n > 0 && pivots[n - 1] != n - 1)) return std::nullopt;
  DenseMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out(i, j) = aug(i, n + j);
  }
  return out;
}

std::optional<std::vector<Scalar>> solve(DenseMatrix a, std::vector<Scalar> b, const Field& field) {
  DenseMatrix aug(a.rows, a.cols + 1);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < a.cols; ++j) aug(i, j) = a(i, j);
    aug(i, a.cols) = b[i];
  }
  std::vector<std::size_t> pivots;
  const std::size_t r = row_reduce(aug, field, &pivots);
  if (r > 0 && pivots[r - 1] == a.cols) return std::nullopt;
  std::vector<Scalar> x(a.cols, 0);
  for (std::size_t i = 0; i < r; ++i) x[pivots[i]] = aug(i, a.cols);
  return x;
}

DenseMatrix null_space(const DenseMatrix& m, const Field& field) {
  DenseMatrix red = m;
  std::vector<std::size_t> pivots;
  const std::size_t r = row_reduce(red, field, &pivots);
  std::vector<bool> is_pivot(m.cols, false);
  for (std::size_t c : pivots) is_pivot[c] = true;
  DenseMatrix basis(m.cols, m.cols - r);
  std::size_t k = 0;
  for (std::size_t free = 0; free < m.cols; ++free) {
    if (is_pivot[free]) continue;
    basis(free, k) = 1;
    for (std::size_t i = 0; i < r; ++i) basis(pivots[i], k) = field.neg(red(i, free));
    ++k;
  }
  return basis;
}

}  // namespace sheafbar::detail
