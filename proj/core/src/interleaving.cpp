#include "sheafbar/interleaving.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <type_traits>

#include <boost/multiprecision/cpp_int.hpp>

#include "gf_linalg.hpp"
#include "interleaving_engine.hpp"
#include "sheafbar/errors.hpp"

namespace sheafbar {

namespace {

using boost::multiprecision::cpp_int;
using detail::Outcome;
using detail::Problem;
using detail::Solution;

template <class T>
struct Tag {
  using type = T;
};

// Common scale: four times the lcm of all denominators, so that endpoints,
// their differences and the halves of pairwise sums are all integers.
cpp_int scale_factor(const Barcode& f, const Barcode& g, const std::vector<Rational>& extra) {
  cpp_int l = 1;
  auto absorb = [&](const Rational& r) {
    const cpp_int d = boost::multiprecision::denominator(r);
    l = l / boost::multiprecision::gcd(l, d) * d;
  };
  for (const Barcode* b : {&f, &g}) {
    for (const Bar& bar : *b) {
      if (bar.interval.lo().is_finite()) absorb(bar.interval.lo().value());
      if (bar.interval.hi().is_finite()) absorb(bar.interval.hi().value());
    }
  }
  for (const Rational& r : extra) absorb(r);
  return 4 * l;
}

cpp_int scaled_value(const Rational& r, const cpp_int& factor) {
  return boost::multiprecision::numerator(r) * (factor / boost::multiprecision::denominator(r));
}

// long long is safe when every scaled magnitude stays below 2^40: the engine
// adds at most a handful of such values.
bool fits_small(const Barcode& f, const Barcode& g, const std::vector<Rational>& extra,
                const cpp_int& factor) {
  const cpp_int limit = cpp_int(1) << 40;
  auto ok = [&](const Rational& r) { return boost::multiprecision::abs(scaled_value(r, factor)) < limit; };
  for (const Barcode* b : {&f, &g}) {
    for (const Bar& bar : *b) {
      if (bar.interval.lo().is_finite() && !ok(bar.interval.lo().value())) return false;
      if (bar.interval.hi().is_finite() && !ok(bar.interval.hi().value())) return false;
    }
  }
  return std::all_of(extra.begin(), extra.end(), ok);
}

template <class Int>
Int to_int(const Rational& r, const cpp_int& factor) {
  const cpp_int v = scaled_value(r, factor);
  if constexpr (std::is_same_v<Int, cpp_int>) {
    return v;
  } else {
    return v.template convert_to<long long>();
  }
}

template <class Int>
Rational from_int(const Int& v, const cpp_int& factor) {
  return Rational(cpp_int(v)) / Rational(factor);
}

template <class Int>
detail::XEnd<Int> to_xend(const Endpoint& e, const cpp_int& factor) {
  if (e.is_neg_inf()) return {-1, Int{}};
  if (e.is_pos_inf()) return {1, Int{}};
  return {0, to_int<Int>(e.value(), factor)};
}

template <class Int>
Problem<Int> make_problem(const Barcode& f, const Barcode& g, const cpp_int& factor) {
  Problem<Int> p;
  for (const Bar& bar : f) p.f.push_back({to_xend<Int>(bar.interval.lo(), factor), to_xend<Int>(bar.interval.hi(), factor)});
  for (const Bar& bar : g) p.g.push_back({to_xend<Int>(bar.interval.lo(), factor), to_xend<Int>(bar.interval.hi(), factor)});
  return p;
}

// Runs fn(Tag<Int>{}) with the narrowest integer type that holds the scaled data.
template <class Fn>
auto with_int(const Barcode& f, const Barcode& g, const std::vector<Rational>& extra,
              const cpp_int& factor, Fn&& fn) {
  if (fits_small(f, g, extra, factor)) return fn(Tag<long long>{});
  return fn(Tag<cpp_int>{});
}

std::vector<int> all_degrees(const Barcode& f, const Barcode& g) {
  std::set<int> s;
  for (const Bar& bar : f) s.insert(bar.degree);
  for (const Bar& bar : g) s.insert(bar.degree);
  return {s.begin(), s.end()};
}

struct Decision {
  Outcome outcome = Outcome::Unknown;
  Solution solution;
  std::uint64_t assignments = 0;
  std::string reason;
};

template <class Int>
Decision decide(const Problem<Int>& p, const Int& a, const Int& b, const Field& field,
                std::uint64_t budget, bool try_matching) {
  Decision d;
  if (try_matching) {
    std::vector<int> match;
    if (detail::cover_matching(p, a, b, &match)) {
      d.solution = detail::solution_from_matching(p, a, b, match);
      if (detail::satisfies(p, a, b, field, d.solution)) {
        d.outcome = Outcome::Feasible;
        return d;
      }
    }
  }
  detail::SearchStats stats;
  d.outcome = detail::exhaustive_search(p, a, b, field, budget, &d.solution, &stats);
  d.assignments = stats.assignments;
  d.reason = std::move(stats.reason);
  if (d.outcome == Outcome::Feasible && !detail::satisfies(p, a, b, field, d.solution)) {
    throw std::logic_error("interleaving search produced a solution that fails the composition equations");
  }
  return d;
}

// Global morphisms from per-degree solutions indexed within each degree.
InterleavingCertificate assemble(const Barcode& f, const Barcode& g, const Rational& a,
                                 const Rational& b, const Field& field,
                                 const std::vector<std::pair<int, Solution>>& parts) {
  InterleavingCertificate cert{a, b, Morphism(f, shift(g, a), field), Morphism(g, shift(f, b), field)};
  for (const auto& [degree, sol] : parts) {
    const auto fi = f.indices_of_degree(degree);
    const auto gi = g.indices_of_degree(degree);
    for (const auto& [j, i, val] : sol.u) cert.u.set(gi[j], fi[i], val);
    for (const auto& [i, j, val] : sol.v) cert.v.set(fi[i], gi[j], val);
  }
  return cert;
}

InterleavingCertificate checked(const Barcode& f, const Barcode& g, InterleavingCertificate cert) {
  if (!verify_certificate(f, g, cert)) {
    throw std::logic_error("assembled interleaving certificate failed verification");
  }
  return cert;
}

// Bars with an infinite end can only pair with bars infinite on the same side.
template <class Int>
bool infinite_ends_compatible(const Problem<Int>& p) {
  std::map<std::pair<int, int>, long> balance;
  for (const auto& bar : p.f) {
    if (bar.lo.kind != 0 || bar.hi.kind != 0) ++balance[{bar.lo.kind, bar.hi.kind}];
  }
  for (const auto& bar : p.g) {
    if (bar.lo.kind != 0 || bar.hi.kind != 0) --balance[{bar.lo.kind, bar.hi.kind}];
  }
  return std::all_of(balance.begin(), balance.end(), [](const auto& kv) { return kv.second == 0; });
}

struct PartResult {
  Endpoint value;
  Exactness exactness = Exactness::Exact;
  Endpoint lower;
  std::optional<Rational> a;  // shifts of the witness, when one exists
  std::optional<Rational> b;
  Solution solution;
};

// Parametric search for one degree. Test points are the grid values and the
// midpoints between consecutive grid values (even and odd indices); feasibility
// is upward closed in a+b, so a proof at one test point settles all lower ones.
template <class Int>
class GammaSearch {
 public:
  GammaSearch(const Problem<Int>& p, const Field& field, std::uint64_t budget, bool symmetric)
      : p_(p), field_(field), budget_(budget), symmetric_(symmetric) {
    std::vector<Int> pts;
    for (const auto* side : {&p.f, &p.g}) {
      for (const auto& bar : *side) {
        if (bar.lo.kind == 0) pts.push_back(bar.lo.v);
        if (bar.hi.kind == 0) pts.push_back(bar.hi.v);
      }
    }
    std::set<Int> diffs{Int(0)};
    for (const Int& x : pts) {
      for (const Int& y : pts) {
        if (x >= y) diffs.insert(x - y);
      }
    }
    diffs_.assign(diffs.begin(), diffs.end());
    std::set<Int> grid;
    for (std::size_t i = 0; i < diffs_.size(); ++i) {
      for (std::size_t j = i; j < diffs_.size(); ++j) grid.insert(diffs_[i] + diffs_[j]);
    }
    const std::vector<Int> g(grid.begin(), grid.end());
    for (std::size_t k = 0; k < g.size(); ++k) {
      tests_.push_back(g[k]);
      if (k + 1 < g.size()) tests_.push_back((g[k] + g[k + 1]) / 2);
    }
  }

  template <class ToRational>
  PartResult run(ToRational&& to_rational) {
    PartResult out;
    if (!infinite_ends_compatible(p_)) {
      out.value = Endpoint::pos_inf();
      out.lower = Endpoint::pos_inf();
      return out;
    }
    // Smallest test point where a matched-bars witness exists.
    long lo = -1;
    long hi = static_cast<long>(tests_.size()) - 1;
    if (!matching_feasible(tests_.back())) {
      throw std::logic_error("no matched-bars witness at the largest candidate shift");
    }
    while (hi - lo > 1) {
      const long mid = (lo + hi) / 2;
      if (matching_feasible(tests_[static_cast<std::size_t>(mid)])) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    long k = hi;
    Witness best;
    while (!(best = scan(k, true)).found) {
      if (++k == static_cast<long>(tests_.size())) throw std::logic_error("matched-bars witness did not verify");
    }
    // Largest test point proven infeasible; -1 stands for "none below zero".
    long proven = -1;
    bool unknown = false;
    while (k > 0) {
      Witness w = scan(k - 1, false);
      if (w.found) {
        best = std::move(w);
        --k;
        continue;
      }
      if (w.unknown) {
        unknown = true;
      } else {
        proven = k - 1;
      }
      break;
    }
    if (unknown) {
      long bottom = proven;
      long top = k - 1;
      while (top - bottom > 1) {
        const long mid = (bottom + top) / 2;
        Witness w = scan(mid, false);
        if (w.found) {
          best = std::move(w);
          k = mid;
          top = mid;
        } else if (w.unknown) {
          top = mid;
        } else {
          bottom = mid;
        }
      }
      proven = bottom;
    }
    const Int value = k % 2 == 0 ? tests_[static_cast<std::size_t>(k)] : tests_[static_cast<std::size_t>(k - 1)];
    out.value = to_rational(value);
    out.exactness = proven == k - 1 ? Exactness::Exact : Exactness::Bracket;
    if (out.exactness == Exactness::Exact) {
      out.lower = out.value;
    } else if (proven < 0) {
      out.lower = Endpoint(0);
    } else {
      const auto idx = static_cast<std::size_t>(proven % 2 == 0 ? proven : proven + 1);
      out.lower = to_rational(tests_[idx]);
    }
    out.a = to_rational(best.a);
    out.b = to_rational(best.b);
    out.solution = std::move(best.solution);
    return out;
  }

 private:
  struct Witness {
    bool found = false;
    bool unknown = false;
    Int a{};
    Int b{};
    Solution solution;
  };

  std::vector<Int> splits(const Int& c) const {
    if (symmetric_) return {c / 2};
    std::set<Int> breaks{Int(0), c};
    for (const Int& d : diffs_) {
      if (d > c) break;
      breaks.insert(d);
      breaks.insert(c - d);
    }
    const std::vector<Int> b(breaks.begin(), breaks.end());
    std::vector<Int> out;
    for (std::size_t k = 0; k < b.size(); ++k) {
      out.push_back(b[k]);
      if (k + 1 < b.size()) out.push_back((b[k] + b[k + 1]) / 2);
    }
    return out;
  }

  bool matching_feasible(const Int& c) const {
    for (const Int& a : splits(c)) {
      if (detail::cover_matching(p_, a, Int(c - a))) return true;
    }
    return false;
  }

  Witness scan(long index, bool try_matching) const {
    Witness w;
    const Int& c = tests_[static_cast<std::size_t>(index)];
    for (const Int& a : splits(c)) {
      const Int b = c - a;
      if (try_matching && !detail::cover_matching(p_, a, b)) continue;
      Decision d = decide(p_, a, b, field_, budget_, try_matching);
      if (d.outcome == Outcome::Feasible) {
        w.found = true;
        w.a = a;
        w.b = b;
        w.solution = std::move(d.solution);
        return w;
      }
      if (d.outcome == Outcome::Unknown) w.unknown = true;
    }
    return w;
  }

  const Problem<Int>& p_;
  Field field_;
  std::uint64_t budget_;
  bool symmetric_;
  std::vector<Int> diffs_;
  std::vector<Int> tests_;
};

DistanceReport distance(const Barcode& f, const Barcode& g, const InterleavingOptions& options,
                        bool symmetric) {
  DistanceReport report;
  report.value = Endpoint(0);
  report.lower = Endpoint(0);
  const auto degrees = all_degrees(f, g);
  const cpp_int factor = scale_factor(f, g, {});
  std::vector<PartResult> parts;
  for (int degree : degrees) {
    const Barcode fd = f.restrict_degree(degree);
    const Barcode gd = g.restrict_degree(degree);
    PartResult part = with_int(fd, gd, {}, factor, [&](auto tag) {
      using Int = typename decltype(tag)::type;
      const Problem<Int> p = make_problem<Int>(fd, gd, factor);
      GammaSearch<Int> search(p, options.field, options.budget, symmetric);
      return search.run([&](const Int& v) { return from_int(v, factor); });
    });
    DistanceReport::DegreePart dp{degree, part.value, part.exactness, part.lower, std::nullopt};
    if (part.a) {
      dp.certificate = checked(fd, gd, assemble(fd, gd, *part.a, *part.b, options.field, {{degree, part.solution}}));
    }
    report.value = std::max(report.value, part.value);
    report.lower = std::max(report.lower, part.lower);
    if (part.exactness == Exactness::Bracket) report.exactness = Exactness::Bracket;
    report.per_degree.push_back(std::move(dp));
    parts.push_back(std::move(part));
  }
  report.upper = report.value;
  if (!report.value.is_finite()) return report;
  if (degrees.empty()) {
    report.certificate = checked(f, g, assemble(f, g, 0, 0, options.field, {}));
    return report;
  }
  // One shift pair for every degree: the shifts of a degree attaining the
  // maximum, provided they dominate the others. Interleavings persist when
  // both shifts grow, so each degree is re-decided at that pair.
  for (const PartResult& top : parts) {
    if (top.value != report.value || !top.a) continue;
    const bool dominates = std::all_of(parts.begin(), parts.end(), [&](const PartResult& other) {
      return other.a && *other.a <= *top.a && *other.b <= *top.b;
    });
    if (!dominates) continue;
    const InterleavingResult joint = check_interleaving(f, g, *top.a, *top.b, options);
    if (joint.status == SearchStatus::Certificate) report.certificate = joint.certificate;
    break;
  }
  return report;
}

}  // namespace

std::string_view to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::Certificate: return "certificate";
    case SearchStatus::Infeasible: return "infeasible";
    case SearchStatus::Unknown: return "unknown";
  }
  return "unknown";
}

std::string_view to_string(Exactness e) { return e == Exactness::Exact ? "exact" : "bracket"; }

bool verify_certificate(const Barcode& f, const Barcode& g, const InterleavingCertificate& cert) {
  if (cert.a < 0 || cert.b < 0) return false;
  if (cert.u.source() != f || cert.u.target() != shift(g, cert.a)) return false;
  if (cert.v.source() != g || cert.v.target() != shift(f, cert.b)) return false;
  if (cert.u.field() != cert.v.field()) return false;
  const Rational c = cert.a + cert.b;
  return equals_tau(compose(cert.u, shift(cert.v, cert.a)), c) &&
         equals_tau(compose(cert.v, shift(cert.u, cert.b)), c);
}

InterleavingResult check_interleaving(const Barcode& f, const Barcode& g, const Rational& a,
                                      const Rational& b, const InterleavingOptions& options) {
  if (a < 0 || b < 0) throw DomainError("interleaving shifts must be nonnegative");
  InterleavingResult result;
  const std::vector<Rational> shifts{a, b};
  const cpp_int factor = scale_factor(f, g, shifts);
  std::vector<std::pair<int, Solution>> parts;
  bool unknown = false;
  for (int degree : all_degrees(f, g)) {
    const Barcode fd = f.restrict_degree(degree);
    const Barcode gd = g.restrict_degree(degree);
    Decision d = with_int(fd, gd, shifts, factor, [&](auto tag) {
      using Int = typename decltype(tag)::type;
      const Problem<Int> p = make_problem<Int>(fd, gd, factor);
      return decide(p, to_int<Int>(a, factor), to_int<Int>(b, factor), options.field, options.budget, true);
    });
    result.assignments += d.assignments;
    if (d.outcome == Outcome::Infeasible) {
      result.status = SearchStatus::Infeasible;
      result.reason = "degree " + std::to_string(degree) + ": " + d.reason;
      return result;
    }
    if (d.outcome == Outcome::Unknown) {
      unknown = true;
      result.reason = "degree " + std::to_string(degree) + ": " + d.reason;
      continue;
    }
    parts.emplace_back(degree, std::move(d.solution));
  }
  if (unknown) {
    result.status = SearchStatus::Unknown;
    return result;
  }
  result.status = SearchStatus::Certificate;
  result.certificate = checked(f, g, assemble(f, g, a, b, options.field, parts));
  return result;
}

DistanceReport gamma(const Barcode& f, const Barcode& g, const InterleavingOptions& options) {
  return distance(f, g, options, false);
}

DistanceReport gamma_symmetric(const Barcode& f, const Barcode& g, const InterleavingOptions& options) {
  return distance(f, g, options, true);
}

std::optional<InterleavingCertificate> matching_witness(const Barcode& f, const Barcode& g,
                                                        const Rational& delta, Field field) {
  if (delta < 0) return std::nullopt;
  const std::vector<Rational> shifts{delta};
  const cpp_int factor = scale_factor(f, g, shifts);
  std::vector<std::pair<int, Solution>> parts;
  for (int degree : all_degrees(f, g)) {
    const Barcode fd = f.restrict_degree(degree);
    const Barcode gd = g.restrict_degree(degree);
    std::optional<Solution> sol = with_int(fd, gd, shifts, factor, [&](auto tag) -> std::optional<Solution> {
      using Int = typename decltype(tag)::type;
      const Problem<Int> p = make_problem<Int>(fd, gd, factor);
      const Int d = to_int<Int>(delta, factor);
      std::vector<int> match;
      if (!detail::cover_matching(p, d, d, &match)) return std::nullopt;
      Solution s = detail::solution_from_matching(p, d, d, match);
      if (!detail::satisfies(p, d, d, field, s)) return std::nullopt;
      return s;
    });
    if (!sol) return std::nullopt;
    parts.emplace_back(degree, std::move(*sol));
  }
  InterleavingCertificate cert = assemble(f, g, delta, delta, field, parts);
  if (!verify_certificate(f, g, cert)) return std::nullopt;
  return cert;
}

std::optional<Morphism> solve_reverse_map(const Morphism& f, const Rational& eps) {
  if (eps < 0) throw DomainError("reverse map needs a nonnegative slack");
  const Barcode& src = f.source();
  const Barcode& tgt = f.target();
  const Field& field = f.field();
  Morphism result(tgt, shift(src, eps), field);
  const Morphism outer(src, shift(src, eps), field);
  // Unknown (i, j) is the entry from target bar j to shifted source bar i.
  std::vector<std::pair<std::size_t, std::size_t>> unknowns;
  for (std::size_t i = 0; i < src.size(); ++i) {
    for (std::size_t j = 0; j < tgt.size(); ++j) {
      if (result.allowed(i, j)) unknowns.emplace_back(i, j);
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> equations;  // (i2, i1)
  for (std::size_t i1 = 0; i1 < src.size(); ++i1) {
    for (std::size_t i2 = 0; i2 < src.size(); ++i2) {
      if (outer.allowed(i2, i1)) equations.emplace_back(i2, i1);
    }
  }
  detail::DenseMatrix m(equations.size(), unknowns.size());
  std::vector<Scalar> rhs(equations.size(), 0);
  for (std::size_t e = 0; e < equations.size(); ++e) {
    const auto [i2, i1] = equations[e];
    rhs[e] = i1 == i2 ? 1 : 0;
    for (std::size_t k = 0; k < unknowns.size(); ++k) {
      const auto [i, j] = unknowns[k];
      if (i == i2) m(e, k) = f.at(j, i1);
    }
  }
  const auto x = detail::solve(std::move(m), std::move(rhs), field);
  if (!x) return std::nullopt;
  for (std::size_t k = 0; k < unknowns.size(); ++k) {
    result.set(unknowns[k].first, unknowns[k].second, (*x)[k]);
  }
  if (!equals_tau(compose(f, result), eps)) {
    throw std::logic_error("reverse map solution failed the tau check");
  }
  return result;
}

}  // namespace sheafbar
