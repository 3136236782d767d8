// Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any FAIL.
// Every criterion carries its own wall-clock limit in seconds.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "oracles.hpp"
#include "sheafbar/barcode_maps.hpp"
#include "sheafbar/canonical_form.hpp"
#include "sheafbar/cone_geometry.hpp"
#include "sheafbar/interleaving.hpp"
#include "sheafbar/limits.hpp"
#include "sheafbar/spectral.hpp"

namespace sheafbar {
namespace {

using testing::bar;
using testing::Rng;

// Collects the first few failures of a criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) notes_ += (notes_.empty() ? "" : "; ") + what;
  }
  bool passed() const { return failures_ == 0; }
  std::string summary() const {
    std::ostringstream s;
    s << checks_ << " checks";
    if (failures_) s << ", " << failures_ << " failed: " << notes_;
    return s.str();
  }

 private:
  long checks_ = 0;
  long failures_ = 0;
  std::string notes_;
};

template <class T>
std::string str(const T& x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

// Sum of two non-negative distance bounds.
Endpoint add(const Endpoint& x, const Endpoint& y) {
  if (!x.is_finite() || !y.is_finite()) return Endpoint::pos_inf();
  return Endpoint(x.value() + y.value());
}

Rational pow2(int e) { return e >= 0 ? Rational(1 << e) : Rational(1, 1 << -e); }

// ---- 1. hom table ------------------------------------------------------------

void hom_table(Check& c) {
  std::vector<Endpoint> pts{Endpoint::neg_inf()};
  for (int k = 0; k <= 6; ++k) pts.emplace_back(Rational(k));
  pts.push_back(Endpoint::pos_inf());
  std::vector<Interval> all;
  for (const auto& lo : pts) {
    for (const auto& hi : pts) {
      if (lo < hi) all.emplace_back(lo, hi);
    }
  }
  for (const auto& i : all) {
    for (const auto& j : all) {
      const auto oracle = testing::stalk_hom(i, j);
      const HomType expected =
          oracle.hom0 == 1 ? HomType::Deg0 : (oracle.hom1 == 1 ? HomType::Deg1 : HomType::Zero);
      c.expect(oracle.hom0 + oracle.hom1 <= 1 && hom(i, j) == expected, str(i) + "->" + str(j));
    }
  }
}

// ---- 2. pseudo-metric ----------------------------------------------------------

void pseudo_metric(Check& c) {
  Rng rng(1001);
  std::vector<Barcode> pool;
  for (int k = 0; k < 200; ++k) pool.push_back(testing::random_barcode(rng, 6, 0, 10, 4));
  for (std::size_t k = 0; k < pool.size(); ++k) {
    const Barcode& f = pool[k];
    const Barcode& g = pool[(k + 1) % pool.size()];
    const Barcode& h = pool[(k + 2) % pool.size()];
    const auto fg = gamma(f, g);
    const auto gf = gamma(g, f);
    c.expect(fg.value == gf.value && fg.exactness == gf.exactness, "symmetry " + str(k));
    const Rational s = rng.rational(-3, 3, 4);
    c.expect(gamma(shift(f, s), shift(g, s)).value == fg.value, "shift " + str(k));
    const auto gh = gamma(g, h);
    const auto fh = gamma(f, h);
    c.expect(fh.lower <= add(fg.upper, gh.upper), "triangle " + str(k));
    c.expect(gamma(Barcode{}, f).value == gamma_to_zero(f), "zero " + str(k));
  }
}

// ---- 3. gamma vs symmetric gamma -----------------------------------------------

void bracket(Check& c) {
  Rng rng(1003);
  for (int k = 0; k < 100; ++k) {
    const Barcode f = testing::random_barcode(rng, 5, 0, 10, 4);
    const Barcode g = testing::random_barcode(rng, 5, 0, 10, 4);
    const auto asym = gamma(f, g);
    const auto sym = gamma_symmetric(f, g);
    c.expect(asym.lower <= sym.upper, "gamma <= gamma' at " + str(k));
    c.expect(sym.lower <= add(asym.upper, asym.upper), "gamma' <= 2 gamma at " + str(k));
  }
}

// ---- 4. canonical form ---------------------------------------------------------

void canonical(Check& c) {
  Rng rng(1005);
  const Field fields[] = {Field(2), Field(3), Field(5)};
  for (int k = 0; k < 100; ++k) {
    const auto inst = testing::random_half_interleaving(rng, 6, 2, fields[k % 3]);
    const Barcode& g = inst.u.source();
    const Barcode& gp = inst.u.target();
    const auto r = canonical_form(inst.u, inst.v, inst.eps);
    bool ok = is_invertible(r.phi) && r.diagonalized == compose(inst.u, r.phi) && r.sigma.size() == g.size() &&
              r.diagonalized.entries().size() == g.size();
    ok = ok && std::set<std::size_t>(r.sigma.begin(), r.sigma.end()).size() == r.sigma.size();
    for (std::size_t i = 0; ok && i < g.size(); ++i) {
      const Interval& src = g[i].interval;
      const Interval& dst = gp[r.sigma[i]].interval;
      ok = r.diagonalized.at(r.sigma[i], i) == 1 && leq(src, dst) && src.lo() <= dst.lo() &&
           dst.lo() <= src.lo() + inst.eps && src.hi() <= dst.hi() && dst.hi() <= src.hi() + inst.eps;
    }
    c.expect(ok, "instance " + str(k) + ": " + str(inst.u));
  }
}

// ---- 5. cone comparison ----------------------------------------------------------

// G moves right endpoints of F by at most delta and adds short bars; u is the
// bar-to-bar inclusion plus random admissible entries.
Morphism random_small_cone_morphism(Rng& rng, const Rational& delta) {
  const Barcode f = testing::random_barcode(rng, 5, 0, 8, 4, 1);
  std::vector<Bar> g_bars;
  for (const Bar& x : f) {
    const Rational hi = x.interval.hi().value() + rng.rational(0, 1, 8) * delta;
    g_bars.push_back(Bar{0, testing::iv(x.interval.lo().value(), hi)});
  }
  const std::size_t partners = g_bars.size();
  for (int e = rng.uniform(0, 2); e > 0; --e) {
    const Rational lo = rng.rational(0, 8, 4);
    g_bars.push_back(bar(0, lo, lo + delta * rng.rational(1, 4, 4) / 2));
  }
  const Barcode g(g_bars);
  Morphism u(f, g);
  std::vector<bool> taken(g.size(), false);
  for (std::size_t k = 0; k < partners; ++k) {
    for (std::size_t t = 0; t < g.size(); ++t) {
      if (!taken[t] && g[t] == g_bars[k]) {
        taken[t] = true;
        u.set(t, k, 1);
        break;
      }
    }
  }
  for (std::size_t s = 0; s < f.size(); ++s) {
    for (std::size_t t = 0; t < g.size(); ++t) {
      if (hom(f[s].interval, g[t].interval) == HomType::Deg0 && rng.coin(0.2)) u.set(t, s, u.at(t, s) ^ 1);
    }
  }
  return u;
}

void cone_comparison(Check& c) {
  Rng rng(1007);
  int forward = 0;
  while (forward < 100) {
    const Barcode f = testing::random_barcode(rng, 5, 0, 8, 4, 1);
    const Rational eps = rng.rational(1, 4, 4) / 2;
    const Barcode g = testing::perturb_right(rng, f, eps, 8);
    const auto r = check_interleaving(f, g, eps, eps);
    if (!r.certificate) continue;
    ++forward;
    c.expect(cone_gamma(r.certificate->u) <= Endpoint(2 * eps), "forward " + str(forward));
  }
  int converse = 0;
  while (converse < 100) {
    const Rational eps(1, 2);
    const Morphism u = random_small_cone_morphism(rng, eps);
    const Endpoint cg = cone_gamma(u);
    if (!(cg < Endpoint(eps))) continue;
    ++converse;
    const auto r = check_interleaving(u.source(), u.target(), 2 * eps, 2 * eps);
    c.expect(r.status == SearchStatus::Certificate && verify_certificate(u.source(), u.target(), *r.certificate),
             "converse " + str(converse) + ": " + str(u));
  }
}

// ---- 6. hocolim defect -----------------------------------------------------------

void defect(Check& c) {
  Rng rng(1009);
  for (int t = 0; t < 50; ++t) {
    InductiveSystem s;
    s.stages.push_back(testing::random_barcode(rng, 5, 0, 8, 4, 1));
    for (int n = 0; n < 5; ++n) {
      const Barcode& prev = s.stages.back();
      const Rational slack = pow2(-n - 1);
      std::vector<Bar> next;
      for (const Bar& x : prev) {
        const Rational move = Rational(rng.uniform(0, 4), 4) * slack;
        next.push_back(Bar{0, testing::iv(x.interval.lo().value(), x.interval.hi().value() + move)});
      }
      const Barcode nb(next);
      // Endpoints are distinct after sorting only up to multiplicity; match by value.
      Morphism f(prev, nb);
      std::vector<bool> taken(nb.size(), false);
      for (std::size_t k = 0; k < prev.size(); ++k) {
        for (std::size_t j = 0; j < nb.size(); ++j) {
          if (!taken[j] && nb[j] == next[k]) {
            taken[j] = true;
            f.set(j, k, 1);
            break;
          }
        }
      }
      const auto back = solve_reverse_map(f, slack);
      c.expect(back.has_value(), "slack certificate at tower " + str(t) + " stage " + str(n));
      s.stages.push_back(nb);
      s.maps.push_back(f);
      s.slacks.push_back(slack);
    }
    for (std::size_t n = 0; n + 1 < s.stages.size(); ++n) {
      const auto d = defect_check(s, n);
      c.expect(d.holds && d.lhs <= d.rhs, "tower " + str(t) + " index " + str(n) + ": " + str(d.lhs) + " > " +
                                              str(d.rhs));
    }
  }
}

// ---- 7. completion ---------------------------------------------------------------

void completion(Check& c) {
  std::vector<Barcode> left;
  for (int n = 1; n <= 8; ++n) left.push_back(Barcode{bar(0, pow2(-n), 1)});
  const auto exact = complete_cauchy(left, pow2(-6));
  c.expect(exact.barcode == Barcode{bar(0, 0, 1)} && exact.limit.exact, "[2^-n,1) gave " + str(exact.barcode));

  Rng rng(1011);
  const int last = 6;
  for (int t = 0; t < 20; ++t) {
    std::vector<Barcode> seq{testing::random_barcode(rng, 4, 0, 8, 4, 1)};
    for (int n = 0; n < last; ++n) {
      std::vector<Bar> next;
      for (const Bar& x : seq.back()) {
        const Rational move = Rational(rng.uniform(0, 2), 2) * pow2(-n - 2);
        next.push_back(Bar{0, testing::iv(x.interval.lo().value(), x.interval.hi().value() + move)});
      }
      seq.emplace_back(next);
    }
    const Rational tol = pow2(2 - last);
    try {
      const auto r = complete_cauchy(seq, tol);
      c.expect(gamma(r.barcode, seq.back()).upper <= Endpoint(tol), "tower " + str(t));
    } catch (const std::exception& e) {
      c.expect(false, "tower " + str(t) + ": " + e.what());
    }
  }
}

// ---- 8. uniqueness ---------------------------------------------------------------

void uniqueness(Check& c) {
  Rng rng(1013);
  for (int t = 0; t < 50; ++t) {
    const Barcode f = testing::random_barcode(rng, 5, 0, 10, 4, 1);
    Barcode g = f;
    if (t % 2 == 1) {
      // Nudge one endpoint by a grid step, or drop a bar.
      std::vector<Bar> bars(f.begin(), f.end());
      const std::size_t k = static_cast<std::size_t>(rng.uniform(0, static_cast<int>(bars.size()) - 1));
      if (rng.coin()) {
        bars.erase(bars.begin() + static_cast<long>(k));
      } else {
        bars[k].interval = testing::iv(bars[k].interval.lo().value(), bars[k].interval.hi().value() + Rational(1, 4));
      }
      g = Barcode(bars);
    }
    const auto r = gamma(f, g);
    c.expect(r.exactness == Exactness::Exact && (r.value == Endpoint(0)) == (f == g), "pair " + str(t));
  }
}

// ---- 9. degeneracy ---------------------------------------------------------------

void degeneracy(Check& c) {
  Rational previous(1);
  for (int n = 2; n <= 10; ++n) {
    const auto [f, g] = cli::rational_truncations(n);
    const Rational bound(1, n);
    const auto r = check_interleaving(f, g, Rational(0), bound);
    c.expect(!(f == g), "N=" + str(n) + " equal");
    c.expect(r.certificate && verify_certificate(f, g, *r.certificate), "N=" + str(n) + " not certified");
    c.expect(n == 2 || bound < previous, "N=" + str(n) + " not monotone");
    previous = bound;
  }
}

// ---- 10. spectral ----------------------------------------------------------------

void spectral(Check& c) {
  Rng rng(1017);
  for (int t = 0; t < 200; ++t) {
    PLFunction f;
    f.domain = PLDomain::Circle;
    const int n = rng.uniform(2, 12);
    Rational x = 0;
    for (int k = 0; k < n; ++k) {
      x += rng.rational(1, 4, 4);
      f.breakpoints.push_back(x);
      f.values.push_back(rng.rational(-5, 5, 8));
    }
    const auto r = spectral_invariants(sublevel_barcode(f), EssentialConvention::Sublevel, 1);
    const auto [mn, mx] = std::minmax_element(f.values.begin(), f.values.end());
    c.expect(r.c_minus == *mn && r.c_plus == *mx && r.gamma == *mx - *mn, "function " + str(t));
  }
}

// ---- 11. Cantor dichotomy ------------------------------------------------------

void cantor(Check& c) {
  c.expect(displacement_bound(Rational(1, 8), 1, 1) == Rational(1, 2) &&
               displacement_bound(Rational(1, 8), 2, 1) == Rational(1, 4) &&
               displacement_bound(Rational(1, 8), 3, 1) == Rational(1, 8),
           "a=1/8 table");
  const std::vector<std::pair<int, std::vector<Rational>>> grid{
      {1,
       {Rational(1, 32), Rational(1, 16), Rational(1, 8), Rational(3, 16), Rational(1, 5), Rational(1, 4),
        Rational(1, 3), Rational(3, 8), Rational(2, 5), Rational(1, 2)}},
      {2,
       {Rational(1, 64), Rational(1, 32), Rational(1, 20), Rational(1, 17), Rational(1, 16), Rational(1, 15),
        Rational(1, 10), Rational(1, 8), Rational(1, 4), Rational(1, 2)}}};
  for (const auto& [n, as] : grid) {
    const Rational threshold = pow2(-2 * n);
    for (const Rational& a : as) {
      for (int k = 1; k < 5; ++k) {
        const Rational now = displacement_bound(a, k, n);
        const Rational next = displacement_bound(a, k + 1, n);
        const bool ok = a < threshold ? next < now : (a == threshold ? next == now : next > now);
        c.expect(ok, "a=" + str(a) + " n=" + str(n) + " k=" + str(k));
      }
    }
  }
  const PointCloud cloud = cube_corner_cloud(cantor_cubes(Rational(1, 8), 3, 1));
  const auto v = cone_coisotropy_test(cloud, Eigen::VectorXd::Zero(2));
  c.expect(v.kind == CoisotropyKind::CoisotropicVacuous, "corner verdict " + std::string(to_string(v.kind)));
}

// ---- 12. cone verdicts -----------------------------------------------------------

double angle_deg(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const double cosine = std::clamp(x.normalized().dot(y.normalized()), -1.0, 1.0);
  return std::acos(cosine) * 180.0 / M_PI;
}

void cone_verdicts(Check& c) {
  std::vector<Eigen::VectorXd> line;
  for (int t = -256; t <= 256; ++t) line.push_back(Eigen::Vector2d(t / 1024.0, 0.0));
  const auto lag = cone_coisotropy_test(PointCloud(2, line), Eigen::VectorXd::Zero(2));
  c.expect(lag.kind == CoisotropyKind::Coisotropic, "Lagrangian line: " + std::string(to_string(lag.kind)));

  std::vector<Eigen::VectorXd> axis;
  for (int t = -64; t <= 64; ++t) {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(4);
    p[0] = t / 512.0;
    axis.push_back(p);
  }
  const auto q1 = cone_coisotropy_test(PointCloud(4, axis), Eigen::VectorXd::Zero(4));
  bool near = false;
  if (q1.witness_normal) {
    for (int coord : {1, 3}) {
      const Eigen::VectorXd e = Eigen::VectorXd::Unit(4, coord);
      near = near || angle_deg(*q1.witness_normal, e) <= 10.0 || angle_deg(*q1.witness_normal, -e) <= 10.0;
    }
  }
  c.expect(q1.kind == CoisotropyKind::NotCoisotropic && near, "q1-axis: " + std::string(to_string(q1.kind)));

  // {p_1 = 0}: coordinates q_1, q_2, p_2 on a 9^3 grid.
  std::vector<Eigen::VectorXd> plane;
  for (int a = -4; a <= 4; ++a) {
    for (int b = -4; b <= 4; ++b) {
      for (int d = -4; d <= 4; ++d) plane.push_back(Eigen::Vector4d(a / 512.0, b / 512.0, 0.0, d / 512.0));
    }
  }
  const auto hyper = cone_coisotropy_test(PointCloud(4, plane), Eigen::VectorXd::Zero(4));
  c.expect(hyper.kind == CoisotropyKind::Coisotropic, "hyperplane: " + std::string(to_string(hyper.kind)));
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<void(Check&)> body;
};

}  // namespace
}  // namespace sheafbar

int main() {
  using namespace sheafbar;
  const std::vector<Criterion> criteria{
      {1, "hom table matches the stalk oracle", 1, hom_table},
      {2, "gamma is a pseudo-metric", 60, pseudo_metric},
      {3, "gamma <= gamma' <= 2 gamma", 120, bracket},
      {4, "canonical form postconditions", 30, canonical},
      {5, "cone and interleaving bound each other", 60, cone_comparison},
      {6, "hocolim defect inequality", 120, defect},
      {7, "Cauchy completion", 60, completion},
      {8, "gamma = 0 iff equal barcodes", 60, uniqueness},
      {9, "rational truncations degenerate", 30, degeneracy},
      {10, "circle spectral invariants", 30, spectral},
      {11, "Cantor displacement dichotomy", 30, cantor},
      {12, "cone coisotropy verdicts", 30, cone_verdicts},
  };
  int failed = 0;
  for (const auto& crit : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      crit.body(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= crit.limit_s;
    const bool ok = check.passed() && in_time;
    failed += ok ? 0 : 1;
    std::cout << (ok ? "PASS" : "FAIL") << " [" << crit.id << "] " << crit.name << " (" << std::fixed
              << std::setprecision(3) << secs << " s, limit " << std::setprecision(0) << crit.limit_s << " s) "
              << check.summary() << (in_time ? "" : " [over time limit]") << '\n';
    std::cout.unsetf(std::ios::fixed);
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
