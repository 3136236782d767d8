#pragma once

// Random generators and brute-force reference computations shared by the unit
// tests and the acceptance binary. Oracles use only closed-form rules and
// exhaustive enumeration, never the library's search code.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "sheafbar/barcode.hpp"
#include "sheafbar/interval.hpp"
#include "sheafbar/morphism.hpp"
#include "sheafbar/errors.hpp"

namespace sheafbar::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(gen_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  // k / denom with lo <= k / denom <= hi.
  Rational rational(int lo, int hi, int denom) { return Rational(uniform(lo * denom, hi * denom), denom); }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

inline Interval iv(const Endpoint& lo, const Endpoint& hi) { return Interval(lo, hi); }
inline Interval iv(const Rational& lo, const Rational& hi) { return Interval(Endpoint(lo), Endpoint(hi)); }
inline Bar bar(int degree, const Rational& lo, const Rational& hi) { return Bar{degree, iv(lo, hi)}; }

// Finite bars with endpoints in [0, hi_max] on the grid 1/denom.
inline Barcode random_barcode(Rng& rng, int max_bars, int degree, int hi_max, int denom, int min_bars = 0) {
  std::vector<Bar> bars;
  const int n = rng.uniform(min_bars, max_bars);
  for (int k = 0; k < n; ++k) {
    Rational lo = rng.rational(0, hi_max, denom);
    Rational hi = rng.rational(0, hi_max, denom);
    if (lo == hi) hi += Rational(1, denom);
    if (hi < lo) std::swap(lo, hi);
    bars.push_back(Bar{degree, iv(lo, hi)});
  }
  return Barcode(std::move(bars));
}

// Every endpoint moved right by an amount in [0, delta] on the grid 1/denom;
// bars that would collapse keep their length.
inline Barcode perturb_right(Rng& rng, const Barcode& b, const Rational& delta, int denom) {
  const int steps = static_cast<int>((delta * denom).convert_to<long long>());
  std::vector<Bar> bars;
  for (const Bar& x : b) {
    Rational lo = x.interval.lo().value() + Rational(rng.uniform(0, steps), denom);
    Rational hi = x.interval.hi().value() + Rational(rng.uniform(0, steps), denom);
    if (!(lo < hi)) hi = lo + (x.interval.hi().value() - x.interval.lo().value());
    bars.push_back(Bar{x.degree, iv(lo, hi)});
  }
  return Barcode(std::move(bars));
}

// ---- hom by stalk enumeration ---------------------------------------------

struct StalkHom {
  int hom0 = 0;  // dim Hom^0 over GF(2)
  int hom1 = 0;  // dim Ext^1, from the Euler form of the discretized quiver
};

// Modules over the opposite real line: k_I(t) = k for t in I, with the map
// k_I(t) -> k_I(s) for s < t the identity when both lie in I. Sampled at the
// endpoints, the midpoints between them and one point beyond each end, which
// refines every interval. Hom^0 is counted by dynamic programming over the
// chain of sample points; Ext^1 = dim Hom - <dim I, dim J>.
inline StalkHom stalk_hom(const Interval& i, const Interval& j) {
  std::set<Rational> ends;
  for (const Endpoint* e : {&i.lo(), &i.hi(), &j.lo(), &j.hi()}) {
    if (e->is_finite()) ends.insert(e->value());
  }
  std::vector<Rational> ev(ends.begin(), ends.end());
  if (ev.empty()) ev.push_back(0);
  std::vector<Rational> pts{ev.front() - 1};
  for (std::size_t k = 0; k < ev.size(); ++k) {
    pts.push_back(ev[k]);
    if (k + 1 < ev.size()) pts.push_back((ev[k] + ev[k + 1]) / 2);
  }
  pts.push_back(ev.back() + 1);
  auto in = [](const Interval& x, const Rational& t) {
    const Endpoint e(t);
    return x.lo() <= e && e < x.hi();
  };
  const std::size_t n = pts.size();
  // count[s] = number of partial assignments ending with value s at the current point.
  std::vector<std::uint64_t> count{1, 0};
  for (std::size_t k = 0; k < n; ++k) {
    const bool both = in(i, pts[k]) && in(j, pts[k]);
    std::vector<std::uint64_t> next{0, 0};
    for (int cur = 0; cur <= 1; ++cur) {
      if (cur == 1 && !both) continue;
      for (int prev = 0; prev <= 1; ++prev) {
        if (count[static_cast<std::size_t>(prev)] == 0) continue;
        if (k > 0) {
          // Arrow pts[k] -> pts[k-1]: phi_prev * rho_I = rho_J * phi_cur.
          const int rho_i = in(i, pts[k]) && in(i, pts[k - 1]) ? 1 : 0;
          const int rho_j = in(j, pts[k]) && in(j, pts[k - 1]) ? 1 : 0;
          if (((prev * rho_i) ^ (rho_j * cur)) != 0) continue;
        }
        next[static_cast<std::size_t>(cur)] += count[static_cast<std::size_t>(prev)];
      }
    }
    count = next;
  }
  const std::uint64_t total = count[0] + count[1];
  int dim0 = 0;
  while ((std::uint64_t{1} << dim0) < total) ++dim0;
  int euler = 0;
  for (std::size_t k = 0; k < n; ++k) euler += (in(i, pts[k]) && in(j, pts[k])) ? 1 : 0;
  for (std::size_t k = 0; k + 1 < n; ++k) euler -= (in(i, pts[k + 1]) && in(j, pts[k])) ? 1 : 0;
  return StalkHom{dim0, dim0 - euler};
}

// ---- brute-force interleavings over GF(2) ----------------------------------

// Closed-form Deg0 test with extended comparisons.
inline bool deg0(const Interval& x, const Interval& y) {
  return x.lo() <= y.lo() && y.lo() < x.hi() && x.hi() <= y.hi();
}

// Whether some u: F -> T_a G, v: G -> T_b F over GF(2) satisfy both tau
// equations; F and G degree-pure with few bars.
inline bool brute_force_interleaved(const Barcode& f, const Barcode& g, const Rational& a, const Rational& b) {
  const std::size_t nf = f.size();
  const std::size_t ng = g.size();
  struct Slot {
    bool is_u;
    std::size_t row, col;
  };
  std::vector<Slot> slots;
  for (std::size_t j = 0; j < ng; ++j) {
    for (std::size_t i = 0; i < nf; ++i) {
      if (deg0(f[i].interval, g[j].interval.shifted(a))) slots.push_back({true, j, i});
      if (deg0(g[j].interval, f[i].interval.shifted(b))) slots.push_back({false, i, j});
    }
  }
  if (slots.size() > 22) throw std::runtime_error("brute force too large");
  const Rational c = a + b;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
    std::vector<std::vector<int>> u(ng, std::vector<int>(nf, 0)), v(nf, std::vector<int>(ng, 0));
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if (!(mask >> s & 1)) continue;
      if (slots[s].is_u) {
        u[slots[s].row][slots[s].col] = 1;
      } else {
        v[slots[s].row][slots[s].col] = 1;
      }
    }
    bool ok = true;
    // shift(v, a) ∘ u on F: outer generator F_i -> T_c F_k.
    for (std::size_t k = 0; k < nf && ok; ++k) {
      for (std::size_t i = 0; i < nf && ok; ++i) {
        int sum = 0;
        if (deg0(f[i].interval, f[k].interval.shifted(c))) {
          for (std::size_t j = 0; j < ng; ++j) sum ^= v[k][j] & u[j][i];
        }
        const int want = (k == i && deg0(f[i].interval, f[i].interval.shifted(c))) ? 1 : 0;
        ok = sum == want;
      }
    }
    for (std::size_t k = 0; k < ng && ok; ++k) {
      for (std::size_t j = 0; j < ng && ok; ++j) {
        int sum = 0;
        if (deg0(g[j].interval, g[k].interval.shifted(c))) {
          for (std::size_t i = 0; i < nf; ++i) sum ^= u[k][i] & v[i][j];
        }
        const int want = (k == j && deg0(g[j].interval, g[j].interval.shifted(c))) ? 1 : 0;
        ok = sum == want;
      }
    }
    if (ok) return true;
  }
  return false;
}

// Smallest a + b on the grid step/2 Z x step/2 Z within [0, max]^2 that the
// brute force accepts, or nullopt.
inline std::optional<Rational> brute_force_gamma(const Barcode& f, const Barcode& g, const Rational& step,
                                                 const Rational& max, bool symmetric) {
  std::optional<Rational> best;
  const Rational half = step / 2;
  for (Rational a = 0; a <= max; a += half) {
    for (Rational b = symmetric ? a : Rational(0); b <= (symmetric ? a : max); b += half) {
      if (best && a + b >= *best) break;
      if (brute_force_interleaved(f, g, a, b)) best = a + b;
    }
  }
  return best;
}

// ---- sublevel persistence by rank counting ---------------------------------

// Degree-0 bars of the sublevel filtration of vertex values on a path or a
// cycle, from the ranks H0(f <= s) -> H0(f <= t) computed by flood fill.
inline std::multiset<std::pair<Rational, Endpoint>> brute_force_h0(const std::vector<Rational>& values, bool cycle) {
  const std::size_t n = values.size();
  std::vector<Rational> levels(values.begin(), values.end());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  const std::size_t m = levels.size();
  auto components = [&](const Rational& t) {
    std::vector<int> comp(n, -1);
    int next = 0;
    for (std::size_t s = 0; s < n; ++s) {
      if (values[s] > t || comp[s] >= 0) continue;
      std::vector<std::size_t> stack{s};
      comp[s] = next;
      while (!stack.empty()) {
        const std::size_t x = stack.back();
        stack.pop_back();
        std::vector<std::size_t> nbrs;
        if (x > 0) nbrs.push_back(x - 1);
        if (x + 1 < n) nbrs.push_back(x + 1);
        if (cycle && x == 0) nbrs.push_back(n - 1);
        if (cycle && x == n - 1) nbrs.push_back(0);
        for (std::size_t y : nbrs) {
          if (values[y] <= t && comp[y] < 0) {
            comp[y] = next;
            stack.push_back(y);
          }
        }
      }
      ++next;
    }
    return comp;
  };
  // rank(i, j) for level indices i <= j; index -1 means "nothing yet".
  auto rank = [&](long i, long j) -> long {
    if (i < 0) return 0;
    const auto cj = components(levels[static_cast<std::size_t>(j)]);
    std::set<int> hit;
    for (std::size_t s = 0; s < n; ++s) {
      if (values[s] <= levels[static_cast<std::size_t>(i)]) hit.insert(cj[s]);
    }
    return static_cast<long>(hit.size());
  };
  std::multiset<std::pair<Rational, Endpoint>> bars;
  for (long i = 0; i < static_cast<long>(m); ++i) {
    for (long j = i + 1; j <= static_cast<long>(m); ++j) {
      // Bars born at level i that die at level j (j == m: never).
      long count;
      if (j == static_cast<long>(m)) {
        count = rank(i, j - 1) - rank(i - 1, j - 1);
      } else {
        count = rank(i, j - 1) - rank(i - 1, j - 1) - rank(i, j) + rank(i - 1, j);
      }
      const Endpoint death = j == static_cast<long>(m) ? Endpoint::pos_inf() : Endpoint(levels[static_cast<std::size_t>(j)]);
      for (long c = 0; c < count; ++c) bars.emplace(levels[static_cast<std::size_t>(i)], death);
    }
  }
  return bars;
}

// ---- automorphisms by enumeration ------------------------------------------

// Every invertible phi: B -> B over GF(2) with entries only where deg0 allows.
inline std::vector<std::vector<std::vector<int>>> brute_force_automorphisms(const Barcode& b) {
  const std::size_t n = b.size();
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (b[r].degree == b[c].degree && deg0(b[c].interval, b[r].interval)) slots.emplace_back(r, c);
    }
  }
  std::vector<std::vector<std::vector<int>>> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
    std::vector<std::vector<int>> m(n, std::vector<int>(n, 0));
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if (mask >> s & 1) m[slots[s].first][slots[s].second] = 1;
    }
    // Gaussian elimination over GF(2) for invertibility.
    auto w = m;
    bool invertible = true;
    for (std::size_t col = 0; col < n && invertible; ++col) {
      std::size_t piv = col;
      while (piv < n && w[piv][col] == 0) ++piv;
      if (piv == n) {
        invertible = false;
        break;
      }
      std::swap(w[piv], w[col]);
      for (std::size_t r = 0; r < n; ++r) {
        if (r != col && w[r][col]) {
          for (std::size_t c = 0; c < n; ++c) w[r][c] ^= w[col][c];
        }
      }
    }
    if (invertible) out.push_back(std::move(m));
  }
  return out;
}


// ---- random half-interleavings ---------------------------------------------

struct HalfInterleaving {
  Morphism u;  // G -> G'
  Morphism v;  // G' -> shift(G, eps)
  Rational eps;
};

// G has bars longer than eps; G' moves each endpoint right by at most eps and
// adds up to max_extra unrelated bars; u = psi ∘ D for a diagonal D and a
// random automorphism psi of G', v = D' ∘ psi^{-1}, so that v ∘ u = tau(G, eps).
inline HalfInterleaving random_half_interleaving(Rng& rng, int max_bars, int max_extra, Field field,
                                                 int denom = 4) {
  for (;;) {
    const Rational eps = rng.rational(1, 4, denom) / 2;
    std::vector<Bar> g_bars, gp_bars;
    const int n = rng.uniform(1, max_bars);
    for (int k = 0; k < n; ++k) {
      const Rational lo = rng.rational(0, 8, denom);
      const Rational hi = lo + eps + rng.rational(1, 6, denom) / 2;
      g_bars.push_back(Bar{0, Interval(Endpoint(lo), Endpoint(hi))});
    }
    const Barcode g(g_bars);
    for (const Bar& x : g) {
      const Rational lo = x.interval.lo().value();
      const Rational hi = x.interval.hi().value();
      const int steps = static_cast<int>((eps * denom * 2).convert_to<long long>());
      Rational lo2 = lo + Rational(rng.uniform(0, steps), denom * 2);
      const Rational hi2 = hi + Rational(rng.uniform(0, steps), denom * 2);
      if (!(lo2 < hi)) lo2 = lo;
      gp_bars.push_back(Bar{0, Interval(Endpoint(lo2), Endpoint(hi2))});
    }
    const int extra = rng.uniform(0, max_extra);
    for (int k = 0; k < extra; ++k) {
      const Rational lo = rng.rational(0, 9, denom);
      gp_bars.push_back(Bar{0, Interval(Endpoint(lo), Endpoint(lo + rng.rational(1, 8, denom) / 2))});
    }
    // Partner of g-bar k is gp_bars[k]; recover its canonical index in G'.
    const Barcode gp(gp_bars);
    std::vector<std::size_t> partner(g.size());
    std::vector<bool> taken(gp.size(), false);
    for (std::size_t k = 0; k < g.size(); ++k) {
      const Bar& want = gp_bars[k];
      for (std::size_t t = 0; t < gp.size(); ++t) {
        if (!taken[t] && gp[t] == want) {
          partner[k] = t;
          taken[t] = true;
          break;
        }
      }
    }
    Morphism d(g, gp, field), dback(gp, shift(g, eps), field);
    for (std::size_t k = 0; k < g.size(); ++k) {
      d.set(partner[k], k, 1);
      dback.set(k, partner[k], 1);
    }
    Morphism psi = identity(gp, field);
    for (std::size_t t = 0; t < gp.size(); ++t) {
      for (std::size_t s = 0; s < gp.size(); ++s) {
        if (s != t && psi.allowed(t, s) && rng.coin(0.4)) {
          psi.set(t, s, static_cast<Scalar>(rng.uniform(1, static_cast<int>(field.p()) - 1)));
        }
      }
    }
    if (field.p() > 2) {
      for (std::size_t t = 0; t < gp.size(); ++t) psi.set(t, t, static_cast<Scalar>(rng.uniform(1, static_cast<int>(field.p()) - 1)));
    }
    if (!is_invertible(psi)) continue;
    return HalfInterleaving{compose(d, psi), compose(inverse(psi), dback), eps};
  }
}

}  // namespace sheafbar::testing
