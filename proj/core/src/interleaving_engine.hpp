#pragma once

// Integer engine behind check_interleaving and gamma. Endpoints are scaled by
// a common factor so that every comparison is an integer comparison; Int is
// long long when the scaled values fit and cpp_int otherwise.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "sheafbar/morphism.hpp"

namespace sheafbar::detail {

// Extended scaled endpoint: kind -1 is -inf, +1 is +inf, 0 is finite.
template <class Int>
struct XEnd {
  int kind = 0;
  Int v{};
};

template <class Int>
bool lt(const XEnd<Int>& x, const XEnd<Int>& y) {
  if (x.kind != y.kind) return x.kind < y.kind;
  return x.kind == 0 && x.v < y.v;
}
template <class Int>
bool le(const XEnd<Int>& x, const XEnd<Int>& y) {
  return !lt(y, x);
}
template <class Int>
XEnd<Int> plus(XEnd<Int> x, const Int& s) {
  if (x.kind == 0) x.v += s;
  return x;
}

template <class Int>
struct SBar {
  XEnd<Int> lo;
  XEnd<Int> hi;
};

template <class Int>
bool is_long(const SBar<Int>& b, const Int& c) {
  return b.lo.kind != 0 || b.hi.kind != 0 || b.hi.v - b.lo.v > c;
}

// hom(I, J + s) == Deg0.
template <class Int>
bool deg0(const SBar<Int>& i, const SBar<Int>& j, const Int& s) {
  const XEnd<Int> c = plus(j.lo, s);
  const XEnd<Int> d = plus(j.hi, s);
  return le(i.lo, c) && lt(c, i.hi) && le(i.hi, d);
}

// x - y lies in [-b, a]; infinite endpoints only agree with the same infinity.
template <class Int>
bool diff_within(const XEnd<Int>& x, const XEnd<Int>& y, const Int& a, const Int& b) {
  if (x.kind != 0 || y.kind != 0) return x.kind == y.kind;
  const Int d = x.v - y.v;
  return d <= a && -d <= b;
}

template <class Int>
struct Problem {
  std::vector<SBar<Int>> f;
  std::vector<SBar<Int>> g;
};

// Bars matched across F and G when both endpoint differences lie in [-b, a];
// unmatched bars must be no longer than a + b. On success match_of_f[i] is the
// partner of F_i or -1.
template <class Int>
bool cover_matching(const Problem<Int>& p, const Int& a, const Int& b,
                    std::vector<int>* match_of_f = nullptr) {
  const std::size_t nf = p.f.size();
  const std::size_t ng = p.g.size();
  const Int c = a + b;
  std::vector<char> long_f(nf), long_g(ng);
  for (std::size_t i = 0; i < nf; ++i) long_f[i] = is_long(p.f[i], c);
  for (std::size_t j = 0; j < ng; ++j) long_g[j] = is_long(p.g[j], c);
  std::vector<std::vector<char>> ok(nf, std::vector<char>(ng, 0));
  std::vector<char> g_has(ng, 0);
  for (std::size_t i = 0; i < nf; ++i) {
    bool any = false;
    for (std::size_t j = 0; j < ng; ++j) {
      ok[i][j] = diff_within(p.f[i].lo, p.g[j].lo, a, b) && diff_within(p.f[i].hi, p.g[j].hi, a, b);
      if (ok[i][j]) {
        any = true;
        g_has[j] = 1;
      }
    }
    if (long_f[i] && !any) return false;
  }
  for (std::size_t j = 0; j < ng; ++j) {
    if (long_g[j] && !g_has[j]) return false;
  }
  // Left: F_i (i < nf), then a stand-in for each G_j. Right: G_j (j < ng), then
  // a stand-in for each F_i. Stand-ins pair freely with each other.
  const std::size_t n = nf + ng;
  std::vector<std::vector<int>> adj(n);
  for (std::size_t i = 0; i < nf; ++i) {
    for (std::size_t j = 0; j < ng; ++j) {
      if (ok[i][j]) adj[i].push_back(static_cast<int>(j));
    }
    if (!long_f[i]) adj[i].push_back(static_cast<int>(ng + i));
  }
  for (std::size_t j = 0; j < ng; ++j) {
    auto& row = adj[nf + j];
    if (!long_g[j]) row.push_back(static_cast<int>(j));
    for (std::size_t i = 0; i < nf; ++i) row.push_back(static_cast<int>(ng + i));
  }
  std::vector<int> match_right(n, -1);
  std::vector<int> seen(n, -1);
  std::vector<int> stack;
  // Kuhn's augmenting paths.
  auto augment = [&](auto&& self, int left, int stamp) -> bool {
    for (int r : adj[static_cast<std::size_t>(left)]) {
      if (seen[static_cast<std::size_t>(r)] == stamp) continue;
      seen[static_cast<std::size_t>(r)] = stamp;
      const int owner = match_right[static_cast<std::size_t>(r)];
      if (owner < 0 || self(self, owner, stamp)) {
        match_right[static_cast<std::size_t>(r)] = left;
        return true;
      }
    }
    return false;
  };
  for (std::size_t left = 0; left < n; ++left) {
    if (!augment(augment, static_cast<int>(left), static_cast<int>(left))) return false;
  }
  if (match_of_f) {
    match_of_f->assign(nf, -1);
    for (std::size_t j = 0; j < ng; ++j) {
      const int owner = match_right[j];
      if (owner >= 0 && static_cast<std::size_t>(owner) < nf) (*match_of_f)[static_cast<std::size_t>(owner)] = static_cast<int>(j);
    }
  }
  return true;
}

struct Solution {
  // (target j, source i, value) for u: F -> G; (target i, source j, value) for v: G -> F.
  std::vector<std::tuple<std::size_t, std::size_t, Scalar>> u;
  std::vector<std::tuple<std::size_t, std::size_t, Scalar>> v;
};

template <class Int>
Solution solution_from_matching(const Problem<Int>& p, const Int& a, const Int& b,
                                const std::vector<int>& match_of_f) {
  Solution s;
  const Int c = a + b;
  for (std::size_t i = 0; i < p.f.size(); ++i) {
    if (match_of_f[i] < 0) continue;
    const auto j = static_cast<std::size_t>(match_of_f[i]);
    if (!is_long(p.f[i], c) && !is_long(p.g[j], c)) continue;
    if (deg0(p.f[i], p.g[j], a)) s.u.emplace_back(j, i, 1);
    if (deg0(p.g[j], p.f[i], b)) s.v.emplace_back(i, j, 1);
  }
  return s;
}

enum class Outcome { Feasible, Infeasible, Unknown };

struct SearchStats {
  std::uint64_t assignments = 0;
  std::string reason;
};

namespace engine_internal {

struct Term {
  int u;
  int v;
};

struct Equation {
  std::vector<Term> terms;
  Scalar rhs;
};

inline int find_root(std::vector<int>& parent, int x) {
  while (parent[static_cast<std::size_t>(x)] != x) {
    auto& up = parent[static_cast<std::size_t>(x)];
    up = parent[static_cast<std::size_t>(up)];
    x = up;
  }
  return x;
}

// Echelon rows over GF(p) that grow and shrink like a stack. Every row has a
// unit pivot and vanishes on the pivots of the rows inserted before it.
class IncrementalSystem {
 public:
  IncrementalSystem(std::size_t width, const Field& field) : width_(width), field_(field) {}

  std::size_t size() const { return rows_.size(); }
  void truncate(std::size_t n) { rows_.resize(n); }

  // Returns false when the row contradicts the system; the system is unchanged then.
  bool add(std::vector<Scalar> coef, Scalar rhs) {
    for (const Row& r : rows_) {
      const Scalar k = coef[r.pivot];
      if (k == 0) continue;
      for (std::size_t c = 0; c < width_; ++c) {
        if (r.coef[c] != 0) coef[c] = field_.sub(coef[c], field_.mul(k, r.coef[c]));
      }
      rhs = field_.sub(rhs, field_.mul(k, r.rhs));
    }
    std::size_t pivot = 0;
    while (pivot < width_ && coef[pivot] == 0) ++pivot;
    if (pivot == width_) return rhs == 0;
    const Scalar inv = field_.inv(coef[pivot]);
    for (Scalar& x : coef) x = field_.mul(x, inv);
    rows_.push_back(Row{std::move(coef), field_.mul(rhs, inv), pivot});
    return true;
  }

  // One solution; free unknowns are zero.
  std::vector<Scalar> solution() const {
    std::vector<Scalar> x(width_, 0);
    for (std::size_t k = rows_.size(); k-- > 0;) {
      const Row& r = rows_[k];
      Scalar value = r.rhs;
      for (std::size_t c = 0; c < width_; ++c) {
        if (c != r.pivot && r.coef[c] != 0) value = field_.sub(value, field_.mul(r.coef[c], x[c]));
      }
      x[r.pivot] = value;
    }
    return x;
  }

 private:
  struct Row {
    std::vector<Scalar> coef;
    Scalar rhs;
    std::size_t pivot;
  };
  std::size_t width_;
  Field field_;
  std::vector<Row> rows_;
};

// Depth-first search over the enumerated side of one block. An equation joins
// the linear system over the other side as soon as its last enumerated unknown
// is fixed, so contradictions prune whole subtrees.
class BlockSearch {
 public:
  // terms[e] lists (enumerated position, solved position) products of equation e.
  BlockSearch(std::size_t enum_width, std::size_t solve_width,
              std::vector<std::vector<std::pair<int, int>>> terms, std::vector<Scalar> rhs,
              const Field& field, std::uint64_t budget)
      : terms_(std::move(terms)),
        rhs_(std::move(rhs)),
        field_(field),
        budget_(budget),
        system_(solve_width, field),
        solve_width_(solve_width) {
    order_variables(enum_width);
  }

  enum class Result { Found, Exhausted, OverBudget };

  Result run() {
    values_.assign(order_.size(), 0);
    if (!add_ready(0)) return Result::Exhausted;
    return descend(0);
  }

  std::uint64_t nodes() const { return nodes_; }
  // Values by enumerated position, then by solved position.
  std::vector<Scalar> enumerated_values() const {
    std::vector<Scalar> out(order_.size(), 0);
    for (std::size_t k = 0; k < order_.size(); ++k) out[static_cast<std::size_t>(order_[k])] = values_[k];
    return out;
  }
  const std::vector<Scalar>& solved_values() const { return solved_; }

 private:
  void order_variables(std::size_t enum_width) {
    const std::size_t ne = terms_.size();
    std::vector<char> placed(enum_width, 0);
    std::vector<char> done(ne, 0);
    std::vector<int> rank(enum_width, -1);
    // Repeatedly complete the equation with the fewest unplaced unknowns.
    for (;;) {
      std::size_t best = ne;
      std::size_t best_missing = 0;
      for (std::size_t e = 0; e < ne; ++e) {
        if (done[e]) continue;
        std::size_t missing = 0;
        for (const auto& t : terms_[e]) missing += placed[static_cast<std::size_t>(t.first)] ? 0 : 1;
        if (best == ne || missing < best_missing) {
          best = e;
          best_missing = missing;
        }
      }
      if (best == ne) break;
      done[best] = 1;
      for (const auto& t : terms_[best]) {
        const auto v = static_cast<std::size_t>(t.first);
        if (!placed[v]) {
          placed[v] = 1;
          rank[v] = static_cast<int>(order_.size());
          order_.push_back(t.first);
        }
      }
    }
    for (std::size_t v = 0; v < enum_width; ++v) {
      if (!placed[v]) {
        rank[v] = static_cast<int>(order_.size());
        order_.push_back(static_cast<int>(v));
      }
    }
    // ready_[d]: equations whose enumerated unknowns all sit at depth < d.
    ready_.assign(order_.size() + 1, {});
    for (std::size_t e = 0; e < ne; ++e) {
      int depth = 0;
      for (auto& t : terms_[e]) {
        t.first = rank[static_cast<std::size_t>(t.first)];
        depth = std::max(depth, t.first + 1);
      }
      ready_[static_cast<std::size_t>(depth)].push_back(e);
    }
  }

  bool add_ready(std::size_t depth) {
    for (std::size_t e : ready_[depth]) {
      std::vector<Scalar> coef(solve_width_, 0);
      for (const auto& [ep, sp] : terms_[e]) {
        const Scalar val = values_[static_cast<std::size_t>(ep)];
        if (val != 0) coef[static_cast<std::size_t>(sp)] = field_.add(coef[static_cast<std::size_t>(sp)], val);
      }
      if (!system_.add(std::move(coef), rhs_[e])) return false;
    }
    return true;
  }

  Result descend(std::size_t depth) {
    if (depth == order_.size()) {
      solved_ = system_.solution();
      return Result::Found;
    }
    const std::size_t mark = system_.size();
    for (Scalar val = 0; val < field_.p(); ++val) {
      if (nodes_ >= budget_) return Result::OverBudget;
      ++nodes_;
      values_[depth] = val;
      if (add_ready(depth + 1)) {
        const Result r = descend(depth + 1);
        if (r != Result::Exhausted) return r;
      }
      system_.truncate(mark);
    }
    values_[depth] = 0;
    return Result::Exhausted;
  }

  std::vector<std::vector<std::pair<int, int>>> terms_;
  std::vector<Scalar> rhs_;
  Field field_;
  std::uint64_t budget_;
  IncrementalSystem system_;
  std::size_t solve_width_;
  std::vector<int> order_;  // enumerated positions by depth
  std::vector<std::vector<std::size_t>> ready_;
  std::vector<Scalar> values_;  // by depth
  std::vector<Scalar> solved_;
  std::uint64_t nodes_ = 0;
};

}  // namespace engine_internal

// Bilinear system: unknown entries of u and v on their allowed supports; one
// equation per pair of bars whose outer generator at shift a+b is nonzero.
// Coupled blocks of unknowns are searched independently, smallest first.
template <class Int>
Outcome exhaustive_search(const Problem<Int>& p, const Int& a, const Int& b, const Field& field,
                          std::uint64_t budget, Solution* out, SearchStats* stats) {
  using engine_internal::Equation;
  using engine_internal::Term;
  const std::size_t nf = p.f.size();
  const std::size_t ng = p.g.size();
  const Int c = a + b;

  std::vector<std::pair<std::size_t, std::size_t>> uvars;  // (j, i)
  std::vector<std::pair<std::size_t, std::size_t>> vvars;  // (i, j)
  std::vector<std::vector<int>> uidx(ng, std::vector<int>(nf, -1));
  std::vector<std::vector<int>> vidx(nf, std::vector<int>(ng, -1));
  for (std::size_t j = 0; j < ng; ++j) {
    for (std::size_t i = 0; i < nf; ++i) {
      if (deg0(p.f[i], p.g[j], a)) {
        uidx[j][i] = static_cast<int>(uvars.size());
        uvars.emplace_back(j, i);
      }
      if (deg0(p.g[j], p.f[i], b)) {
        vidx[i][j] = static_cast<int>(vvars.size());
        vvars.emplace_back(i, j);
      }
    }
  }

  std::vector<Equation> equations;
  auto fail = [&](const std::string& why) {
    if (stats) stats->reason = why;
    return Outcome::Infeasible;
  };
  for (std::size_t i1 = 0; i1 < nf; ++i1) {
    for (std::size_t i2 = 0; i2 < nf; ++i2) {
      if (!deg0(p.f[i1], p.f[i2], c)) continue;
      Equation e{{}, static_cast<Scalar>(i1 == i2 ? 1 : 0)};
      for (std::size_t j = 0; j < ng; ++j) {
        if (uidx[j][i1] >= 0 && vidx[i2][j] >= 0) e.terms.push_back(Term{uidx[j][i1], vidx[i2][j]});
      }
      if (e.terms.empty()) {
        if (e.rhs != 0) return fail("bar " + std::to_string(i1) + " of the first barcode cannot factor through the second");
        continue;
      }
      equations.push_back(std::move(e));
    }
  }
  for (std::size_t j1 = 0; j1 < ng; ++j1) {
    for (std::size_t j2 = 0; j2 < ng; ++j2) {
      if (!deg0(p.g[j1], p.g[j2], c)) continue;
      Equation e{{}, static_cast<Scalar>(j1 == j2 ? 1 : 0)};
      for (std::size_t i = 0; i < nf; ++i) {
        if (uidx[j2][i] >= 0 && vidx[i][j1] >= 0) e.terms.push_back(Term{uidx[j2][i], vidx[i][j1]});
      }
      if (e.terms.empty()) {
        if (e.rhs != 0) return fail("bar " + std::to_string(j1) + " of the second barcode cannot factor through the first");
        continue;
      }
      equations.push_back(std::move(e));
    }
  }

  const int nu = static_cast<int>(uvars.size());
  const int nv = static_cast<int>(vvars.size());
  std::vector<int> parent(static_cast<std::size_t>(nu + nv));
  std::iota(parent.begin(), parent.end(), 0);
  // Unknowns sharing an equation share a block.
  auto unite = [&](int p, int q) {
    const int x = engine_internal::find_root(parent, p);
    const int y = engine_internal::find_root(parent, q);
    if (x != y) parent[static_cast<std::size_t>(x)] = y;
  };
  for (const Equation& e : equations) {
    for (const Term& t : e.terms) {
      unite(t.u, nu + t.v);
      unite(t.u, e.terms.front().u);
    }
  }

  struct Block {
    std::vector<int> us, vs;
    std::vector<const Equation*> eqs;
  };
  std::vector<Block> blocks;
  std::vector<int> block_of_root(static_cast<std::size_t>(nu + nv), -1);
  std::vector<char> seen(static_cast<std::size_t>(nu + nv), 0);
  for (const Equation& e : equations) {
    const int root = engine_internal::find_root(parent, e.terms.front().u);
    int& id = block_of_root[static_cast<std::size_t>(root)];
    if (id < 0) {
      id = static_cast<int>(blocks.size());
      blocks.emplace_back();
    }
    Block& blk = blocks[static_cast<std::size_t>(id)];
    blk.eqs.push_back(&e);
    for (const Term& t : e.terms) {
      if (!seen[static_cast<std::size_t>(t.u)]) {
        seen[static_cast<std::size_t>(t.u)] = 1;
        blk.us.push_back(t.u);
      }
      if (!seen[static_cast<std::size_t>(nu + t.v)]) {
        seen[static_cast<std::size_t>(nu + t.v)] = 1;
        blk.vs.push_back(t.v);
      }
    }
  }
  auto width = [](const Block& blk) { return std::min(blk.us.size(), blk.vs.size()); };
  std::sort(blocks.begin(), blocks.end(),
            [&](const Block& x, const Block& y) { return width(x) < width(y); });

  std::vector<Scalar> uval(static_cast<std::size_t>(nu), 0), vval(static_cast<std::size_t>(nv), 0);
  std::uint64_t remaining = budget;
  bool over_budget = false;
  for (const Block& blk : blocks) {
    const bool enumerate_u = blk.us.size() <= blk.vs.size();
    const std::vector<int>& enum_vars = enumerate_u ? blk.us : blk.vs;
    const std::vector<int>& solve_vars = enumerate_u ? blk.vs : blk.us;
    std::vector<int> enum_pos(static_cast<std::size_t>(enumerate_u ? nu : nv), -1);
    std::vector<int> solve_pos(static_cast<std::size_t>(enumerate_u ? nv : nu), -1);
    for (std::size_t k = 0; k < enum_vars.size(); ++k) enum_pos[static_cast<std::size_t>(enum_vars[k])] = static_cast<int>(k);
    for (std::size_t k = 0; k < solve_vars.size(); ++k) solve_pos[static_cast<std::size_t>(solve_vars[k])] = static_cast<int>(k);
    std::vector<std::vector<std::pair<int, int>>> local(blk.eqs.size());
    std::vector<Scalar> rhs(blk.eqs.size());
    for (std::size_t e = 0; e < blk.eqs.size(); ++e) {
      rhs[e] = blk.eqs[e]->rhs;
      for (const Term& t : blk.eqs[e]->terms) {
        const int ev = enumerate_u ? t.u : t.v;
        const int sv = enumerate_u ? t.v : t.u;
        local[e].emplace_back(enum_pos[static_cast<std::size_t>(ev)], solve_pos[static_cast<std::size_t>(sv)]);
      }
    }
    engine_internal::BlockSearch search(enum_vars.size(), solve_vars.size(), std::move(local),
                                        std::move(rhs), field, remaining);
    const auto result = search.run();
    remaining -= search.nodes();
    if (stats) stats->assignments += search.nodes();
    if (result == engine_internal::BlockSearch::Result::OverBudget) {
      over_budget = true;
      continue;
    }
    if (result == engine_internal::BlockSearch::Result::Exhausted) {
      return fail("no assignment of a block of " + std::to_string(enum_vars.size() + solve_vars.size()) +
                  " coupled entries satisfies the composition equations");
    }
    const std::vector<Scalar> ev = search.enumerated_values();
    const std::vector<Scalar>& sv = search.solved_values();
    for (std::size_t k = 0; k < enum_vars.size(); ++k) {
      (enumerate_u ? uval : vval)[static_cast<std::size_t>(enum_vars[k])] = ev[k];
    }
    for (std::size_t k = 0; k < solve_vars.size(); ++k) {
      (enumerate_u ? vval : uval)[static_cast<std::size_t>(solve_vars[k])] = sv[k];
    }
  }
  if (over_budget) {
    if (stats) stats->reason = "search budget exhausted before every block was decided";
    return Outcome::Unknown;
  }
  if (out) {
    out->u.clear();
    out->v.clear();
    for (std::size_t k = 0; k < uvars.size(); ++k) {
      if (uval[k] != 0) out->u.emplace_back(uvars[k].first, uvars[k].second, uval[k]);
    }
    for (std::size_t k = 0; k < vvars.size(); ++k) {
      if (vval[k] != 0) out->v.emplace_back(vvars[k].first, vvars[k].second, vval[k]);
    }
  }
  return Outcome::Feasible;
}

// Checks a candidate solution against every composition equation directly.
template <class Int>
bool satisfies(const Problem<Int>& p, const Int& a, const Int& b, const Field& field, const Solution& s) {
  const std::size_t nf = p.f.size();
  const std::size_t ng = p.g.size();
  const Int c = a + b;
  std::vector<std::vector<Scalar>> u(ng, std::vector<Scalar>(nf, 0));
  std::vector<std::vector<Scalar>> v(nf, std::vector<Scalar>(ng, 0));
  for (const auto& [j, i, val] : s.u) {
    if (!deg0(p.f[i], p.g[j], a)) return false;
    u[j][i] = val;
  }
  for (const auto& [i, j, val] : s.v) {
    if (!deg0(p.g[j], p.f[i], b)) return false;
    v[i][j] = val;
  }
  for (std::size_t i1 = 0; i1 < nf; ++i1) {
    for (std::size_t i2 = 0; i2 < nf; ++i2) {
      if (!deg0(p.f[i1], p.f[i2], c)) continue;
      Scalar sum = 0;
      for (std::size_t j = 0; j < ng; ++j) {
        if (deg0(p.f[i1], p.g[j], a) && deg0(p.g[j], p.f[i2], b)) sum = field.add(sum, field.mul(v[i2][j], u[j][i1]));
      }
      if (sum != (i1 == i2 ? 1U : 0U)) return false;
    }
  }
  for (std::size_t j1 = 0; j1 < ng; ++j1) {
    for (std::size_t j2 = 0; j2 < ng; ++j2) {
      if (!deg0(p.g[j1], p.g[j2], c)) continue;
      Scalar sum = 0;
      for (std::size_t i = 0; i < nf; ++i) {
        if (deg0(p.g[j1], p.f[i], b) && deg0(p.f[i], p.g[j2], a)) sum = field.add(sum, field.mul(u[j2][i], v[i][j1]));
      }
      if (sum != (j1 == j2 ? 1U : 0U)) return false;
    }
  }
  return true;
}

}  // namespace sheafbar::detail
