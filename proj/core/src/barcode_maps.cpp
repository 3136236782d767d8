#include "sheafbar/barcode_maps.hpp"

#include <algorithm>
#include <set>

#include "gf_linalg.hpp"
#include "sheafbar/errors.hpp"

namespace sheafbar {

bool is_diagonal(const Morphism& m) {
  std::vector<int> row_count(m.target().size(), 0);
  std::vector<int> col_count(m.source().size(), 0);
  for (const auto& [key, value] : m.entries()) {
    if (++row_count[key.first] > 1 || ++col_count[key.second] > 1) return false;
  }
  return true;
}

Barcode cone_diagonal(const Morphism& m) {
  if (!is_diagonal(m)) throw DomainError("cone_diagonal: morphism is not in diagonal form");
  std::vector<bool> src_matched(m.source().size(), false);
  std::vector<bool> tgt_matched(m.target().size(), false);
  std::vector<Bar> out;
  for (const auto& [key, value] : m.entries()) {
    const Bar& s = m.source()[key.second];
    const Bar& t = m.target()[key.first];
    src_matched[key.second] = true;
    tgt_matched[key.first] = true;
    if (s.interval.hi() < t.interval.hi()) {
      out.push_back(Bar{s.degree, Interval(s.interval.hi(), t.interval.hi())});
    }
    if (s.interval.lo() < t.interval.lo()) {
      out.push_back(Bar{s.degree + 1, Interval(s.interval.lo(), t.interval.lo())});
    }
  }
  for (std::size_t i = 0; i < src_matched.size(); ++i) {
    if (!src_matched[i]) out.push_back(Bar{m.source()[i].degree + 1, m.source()[i].interval});
  }
  for (std::size_t j = 0; j < tgt_matched.size(); ++j) {
    if (!tgt_matched[j]) out.push_back(m.target()[j]);
  }
  return Barcode(std::move(out));
}

namespace {

using detail::DenseMatrix;

// Cells of the refinement: cell 0 is (-inf, v_0); cell k >= 1 is [v_{k-1}, v_k).
struct Refinement {
  std::vector<Rational> cuts;

  std::size_t cell_count() const { return cuts.size() + 1; }
  bool contains(const Interval& iv, std::size_t cell) const {
    if (cell == 0) return iv.lo().is_neg_inf();
    const Endpoint at(cuts[cell - 1]);
    return iv.lo() <= at && at < iv.hi();
  }
  Interval cells_to_interval(std::size_t first, std::size_t last) const {
    Endpoint lo = first == 0 ? Endpoint::neg_inf() : Endpoint(cuts[first - 1]);
    Endpoint hi = last + 1 >= cell_count() ? Endpoint::pos_inf() : Endpoint(cuts[last]);
    return Interval(std::move(lo), std::move(hi));
  }
};

// Multiplicities of exact cell ranges from a rank function r(i, j), i <= j.
template <class RankFn>
void decompose(const Refinement& ref, RankFn&& r, int degree, std::vector<Bar>& out) {
  const std::size_t n = ref.cell_count();
  std::vector<std::vector<long long>> rk(n, std::vector<long long>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) rk[i][j] = r(i, j);
  }
  auto at = [&](long long i, long long j) -> long long {
    if (i < 0 || j >= static_cast<long long>(n)) return 0;
    return rk[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const auto ii = static_cast<long long>(i);
      const auto jj = static_cast<long long>(j);
      const long long mult = at(ii, jj) - at(ii - 1, jj) - at(ii, jj + 1) + at(ii - 1, jj + 1);
      if (mult < 0) throw std::logic_error("negative bar multiplicity in stalk decomposition");
      for (long long k = 0; k < mult; ++k) out.push_back(Bar{degree, ref.cells_to_interval(i, j)});
    }
  }
}

}  // namespace

Barcode cone(const Morphism& m) {
  const Field& field = m.field();
  std::set<int> degrees;
  for (int d : m.source().degrees()) degrees.insert(d);
  for (int d : m.target().degrees()) degrees.insert(d);
  std::vector<Bar> out;
  for (int degree : degrees) {
    const std::vector<std::size_t> src = m.source().indices_of_degree(degree);
    const std::vector<std::size_t> tgt = m.target().indices_of_degree(degree);
    Refinement ref;
    std::set<Rational> cut_set;
    for (std::size_t s : src) {
      for (const Endpoint* e : {&m.source()[s].interval.lo(), &m.source()[s].interval.hi()}) {
        if (e->is_finite()) cut_set.insert(e->value());
      }
    }
    for (std::size_t t : tgt) {
      for (const Endpoint* e : {&m.target()[t].interval.lo(), &m.target()[t].interval.hi()}) {
        if (e->is_finite()) cut_set.insert(e->value());
      }
    }
    ref.cuts.assign(cut_set.begin(), cut_set.end());
    const std::size_t n = ref.cell_count();

    // Stalk bases: indices (into src / tgt) of bars alive on each cell.
    std::vector<std::vector<std::size_t>> src_alive(n), tgt_alive(n);
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t k = 0; k < src.size(); ++k) {
        if (ref.contains(m.source()[src[k]].interval, c)) src_alive[c].push_back(k);
      }
      for (std::size_t k = 0; k < tgt.size(); ++k) {
        if (ref.contains(m.target()[tgt[k]].interval, c)) tgt_alive[c].push_back(k);
      }
    }
    std::vector<DenseMatrix> stalk_map(n), kernel(n);
    for (std::size_t c = 0; c < n; ++c) {
      DenseMatrix phi(tgt_alive[c].size(), src_alive[c].size());
      for (std::size_t r = 0; r < tgt_alive[c].size(); ++r) {
        for (std::size_t q = 0; q < src_alive[c].size(); ++q) {
          phi(r, q) = m.at(tgt[tgt_alive[c][r]], src[src_alive[c][q]]);
        }
      }
      kernel[c] = detail::null_space(phi, field);
      stalk_map[c] = std::move(phi);
    }
    // Structure map from cell j to cell i <= j: keeps the bars alive on cell i.
    auto restriction = [&](const std::vector<std::vector<std::size_t>>& alive, std::size_t i,
                           std::size_t j) {
      DenseMatrix r(alive[i].size(), alive[j].size());
      for (std::size_t q = 0; q < alive[j].size(); ++q) {
        const auto it = std::find(alive[i].begin(), alive[i].end(), alive[j][q]);
        if (it != alive[i].end()) r(static_cast<std::size_t>(it - alive[i].begin()), q) = 1;
      }
      return r;
    };
    auto kernel_rank = [&](std::size_t i, std::size_t j) -> long long {
      if (kernel[j].cols == 0) return 0;
      return static_cast<long long>(
          detail::rank(detail::multiply(restriction(src_alive, i, j), kernel[j], field), field));
    };
    std::vector<std::size_t> image_rank(n);
    for (std::size_t c = 0; c < n; ++c) image_rank[c] = detail::rank(stalk_map[c], field);
    auto cokernel_rank = [&](std::size_t i, std::size_t j) -> long long {
      const DenseMatrix r = restriction(tgt_alive, i, j);
      DenseMatrix joined(r.rows, r.cols + stalk_map[i].cols);
      for (std::size_t row = 0; row < r.rows; ++row) {
        for (std::size_t col = 0; col < r.cols; ++col) joined(row, col) = r(row, col);
        for (std::size_t col = 0; col < stalk_map[i].cols; ++col) {
          joined(row, r.cols + col) = stalk_map[i](row, col);
        }
      }
      return static_cast<long long>(detail::rank(joined, field)) -
             static_cast<long long>(image_rank[i]);
    };
    decompose(ref, kernel_rank, degree + 1, out);
    decompose(ref, cokernel_rank, degree, out);
  }
  return Barcode(std::move(out));
}

Endpoint cone_gamma(const Morphism& m) { return gamma_to_zero(cone(m)); }

}  // namespace sheafbar
