#include "sheafbar/canonical_form.hpp"

#include <algorithm>

#include "gf_linalg.hpp"
#include "sheafbar/barcode_maps.hpp"

namespace sheafbar {
namespace {

using detail::DenseMatrix;

// eps = 0 is admitted internally: stages of a tower may be joined by isomorphisms.
void check_preconditions(const Morphism& u, const Morphism& v, const Rational& eps) {
  if (eps < 0) throw DomainError("canonical_form needs eps >= 0, got " + to_string(eps));
  if (!(u.field() == v.field())) throw DomainError("canonical_form: u and v over different fields");
  if (!(v.source() == u.target())) throw DomainError("canonical_form: v must start at the target of u");
  if (!(v.target() == shift(u.source(), eps))) {
    throw DomainError("canonical_form: v must end at the eps-shift of the source of u");
  }
  std::vector<int> degrees = u.source().degrees();
  for (int d : u.target().degrees()) degrees.push_back(d);
  std::sort(degrees.begin(), degrees.end());
  degrees.erase(std::unique(degrees.begin(), degrees.end()), degrees.end());
  if (degrees.size() > 1) {
    throw DomainError("canonical_form: bars of degrees " + std::to_string(degrees.front()) +
                      " and " + std::to_string(degrees.back()) + " mixed");
  }
  for (std::size_t i = 0; i < u.source().size(); ++i) {
    if (!u.source()[i].interval.longer_than(eps)) {
      throw DomainError("canonical_form: source bar " + std::to_string(i) + " " +
                        u.source()[i].interval.to_string() + " is not longer than " +
                        to_string(eps));
    }
  }
  const Morphism vu = compose(u, v);
  const Morphism t = tau(u.source(), eps, u.field());
  if (vu.entries() != t.entries()) {
    for (std::size_t i = 0; i < u.source().size(); ++i) {
      for (std::size_t j = 0; j < u.source().size(); ++j) {
        if (vu.at(i, j) != t.at(i, j)) {
          throw DomainError("canonical_form: (v o u)(" + std::to_string(i) + "," +
                            std::to_string(j) + ") = " + std::to_string(vu.at(i, j)) +
                            " but tau has " + std::to_string(t.at(i, j)));
        }
      }
    }
  }
}

CanonicalFormResult canonical_form_unchecked_slack(const Morphism& u, const Morphism& v, const Rational& eps);

}  // namespace

CanonicalFormResult canonical_form(const Morphism& u, const Morphism& v, const Rational& eps) {
  if (eps <= 0) throw DomainError("canonical_form needs eps > 0, got " + to_string(eps));
  return canonical_form_unchecked_slack(u, v, eps);
}

namespace {

CanonicalFormResult canonical_form_unchecked_slack(const Morphism& u, const Morphism& v, const Rational& eps) {
  check_preconditions(u, v, eps);
  const Field& field = u.field();
  const Barcode& target = u.target();
  const std::size_t rows = target.size();
  const std::size_t cols = u.source().size();

  DenseMatrix work = detail::to_dense(u);
  DenseMatrix phi(rows, rows);
  for (std::size_t r = 0; r < rows; ++r) phi(r, r) = 1;

  auto axpy_row = [&](std::size_t dst, std::size_t src, Scalar factor) {
    // row dst -= factor * row src, in both the working matrix and phi.
    for (std::size_t c = 0; c < cols; ++c) {
      if (work(src, c) != 0) work(dst, c) = field.sub(work(dst, c), field.mul(factor, work(src, c)));
    }
    for (std::size_t c = 0; c < rows; ++c) {
      if (phi(src, c) != 0) phi(dst, c) = field.sub(phi(dst, c), field.mul(factor, phi(src, c)));
    }
  };

  std::vector<std::optional<std::size_t>> pivot_of_row(rows);
  std::vector<std::optional<std::size_t>> row_of_column(cols);

  // Canonical order is a linear extension of the product order, so every row
  // that may be added to row r precedes it or shares its interval.
  std::size_t begin = 0;
  while (begin < rows) {
    std::size_t end = begin + 1;
    while (end < rows && target[end] == target[begin]) ++end;

    for (std::size_t r = begin; r < end; ++r) {
      for (std::size_t j = 0; j < begin; ++j) {
        if (!pivot_of_row[j] || !leq(target[j].interval, target[r].interval)) continue;
        const std::size_t c = *pivot_of_row[j];
        if (work(r, c) != 0) axpy_row(r, j, work(r, c));
      }
    }

    // Reduced row echelon form inside the class of equal bars, pivots in
    // ascending column order, assigned to the lowest row indices.
    std::size_t next = begin;
    for (std::size_t c = 0; c < cols && next < end; ++c) {
      std::size_t p = next;
      while (p < end && work(p, c) == 0) ++p;
      if (p == end) continue;
      if (p != next) {
        for (std::size_t k = 0; k < cols; ++k) std::swap(work(p, k), work(next, k));
        for (std::size_t k = 0; k < rows; ++k) std::swap(phi(p, k), phi(next, k));
      }
      const Scalar inv = field.inv(work(next, c));
      for (std::size_t k = 0; k < cols; ++k) work(next, k) = field.mul(work(next, k), inv);
      for (std::size_t k = 0; k < rows; ++k) phi(next, k) = field.mul(phi(next, k), inv);
      for (std::size_t r = begin; r < end; ++r) {
        if (r != next && work(r, c) != 0) axpy_row(r, next, work(r, c));
      }
      ++next;
    }

    for (std::size_t r = begin; r < end; ++r) {
      std::optional<std::size_t> only;
      for (std::size_t c = 0; c < cols; ++c) {
        if (work(r, c) == 0) continue;
        if (only) {
          throw NotDiagonalizable("target bar " + std::to_string(r) + " " +
                                  target[r].interval.to_string() + " keeps entries in source columns " +
                                  std::to_string(*only) + " and " + std::to_string(c) +
                                  " that no smaller target bar can clear");
        }
        only = c;
      }
      if (!only) continue;
      if (row_of_column[*only]) {
        throw NotDiagonalizable("source bar " + std::to_string(*only) + " reaches target bars " +
                                std::to_string(*row_of_column[*only]) + " and " +
                                std::to_string(r) + ", which are incomparable");
      }
      row_of_column[*only] = r;
      pivot_of_row[r] = *only;
    }
    begin = end;
  }

  CanonicalFormResult result{Morphism(target, target, field), std::vector<std::size_t>(cols),
                             Morphism(u.source(), target, field)};
  for (std::size_t c = 0; c < cols; ++c) {
    if (!row_of_column[c]) {
      throw NotDiagonalizable("source bar " + std::to_string(c) + " is not reached after elimination");
    }
    result.sigma[c] = *row_of_column[c];
  }
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < rows; ++c) {
      if (phi(r, c) != 0 && result.phi.allowed(r, c)) result.phi.set(r, c, phi(r, c));
    }
  }
  result.diagonalized = compose(u, result.phi);

  // Postconditions are part of the contract, so they are checked on every call.
  if (!is_invertible(result.phi)) throw std::logic_error("canonical_form: phi is singular");
  if (result.diagonalized.entries().size() != cols) {
    throw std::logic_error("canonical_form: diagonal shape not reached");
  }
  for (std::size_t c = 0; c < cols; ++c) {
    if (result.diagonalized.at(result.sigma[c], c) != 1 ||
        !leq(u.source()[c].interval, target[result.sigma[c]].interval)) {
      throw std::logic_error("canonical_form: postcondition failed at source bar " + std::to_string(c));
    }
  }
  return result;
}

}  // namespace

Morphism submorphism(const Morphism& m, const std::vector<std::size_t>& source_indices,
                     const std::vector<std::size_t>& target_indices) {
  Morphism out(m.source().subset(source_indices), m.target().subset(target_indices), m.field());
  for (std::size_t t = 0; t < target_indices.size(); ++t) {
    for (std::size_t s = 0; s < source_indices.size(); ++s) {
      const Scalar x = m.at(target_indices[t], source_indices[s]);
      if (x != 0) out.set(t, s, x);
    }
  }
  return out;
}

DiagonalizedSystem diagonalize_system(const std::vector<Barcode>& stages,
                                      const std::vector<Morphism>& maps,
                                      const std::vector<Morphism>& reverse_maps,
                                      const std::vector<Rational>& slacks) {
  if (stages.empty()) throw DomainError("diagonalize_system: no stages");
  const std::size_t n_maps = stages.size() - 1;
  if (maps.size() != n_maps || reverse_maps.size() != n_maps || slacks.size() != n_maps) {
    throw DomainError("diagonalize_system: need one map, reverse map and slack per consecutive pair");
  }
  const Field field = n_maps > 0 ? maps.front().field() : Field();
  DiagonalizedSystem out;
  out.phi.push_back(identity(stages[0], field));
  Morphism phi_inv = out.phi.back();

  for (std::size_t n = 0; n < n_maps; ++n) {
    try {
      const Morphism& f = maps[n];
      const Morphism& g = reverse_maps[n];
      const Rational& eps = slacks[n];
      if (!(f.source() == stages[n]) || !(f.target() == stages[n + 1])) {
        throw DomainError("map does not join consecutive stages");
      }
      const Morphism f_prime = compose(phi_inv, f);
      const Morphism g_prime = compose(g, shift(out.phi[n], eps));

      Morphism phi_next(stages[n + 1], stages[n + 1], field);
      std::vector<std::optional<std::size_t>> sigma(stages[n].size());
      std::vector<int> degrees = stages[n].degrees();
      for (int d : stages[n + 1].degrees()) degrees.push_back(d);
      std::sort(degrees.begin(), degrees.end());
      degrees.erase(std::unique(degrees.begin(), degrees.end()), degrees.end());

      for (int d : degrees) {
        const std::vector<std::size_t> tgt = stages[n + 1].indices_of_degree(d);
        std::vector<std::size_t> long_bars;
        for (std::size_t i : stages[n].indices_of_degree(d)) {
          if (stages[n][i].interval.longer_than(2 * eps)) long_bars.push_back(i);
        }
        Morphism block_phi = identity(stages[n + 1].subset(tgt), field);
        if (!long_bars.empty()) {
          const Morphism u = submorphism(f_prime, long_bars, tgt);
          const Morphism v = submorphism(g_prime, tgt, long_bars);
          const CanonicalFormResult cf = canonical_form_unchecked_slack(u, v, eps);
          block_phi = cf.phi;
          for (std::size_t k = 0; k < long_bars.size(); ++k) sigma[long_bars[k]] = tgt[cf.sigma[k]];
        }
        for (const auto& [key, value] : block_phi.entries()) {
          phi_next.set(tgt[key.first], tgt[key.second], value);
        }
      }
      out.f_hat.push_back(compose(f_prime, phi_next));
      out.sigma.push_back(std::move(sigma));
      out.phi.push_back(phi_next);
      phi_inv = inverse(phi_next);
    } catch (const StageError&) {
      throw;
    } catch (const DomainError& e) {
      throw StageError(n, e.what());
    }
  }
  return out;
}

}  // namespace sheafbar
