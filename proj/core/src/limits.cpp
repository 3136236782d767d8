#include "sheafbar/limits.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <string>

#include "sheafbar/barcode_maps.hpp"
#include "sheafbar/canonical_form.hpp"
#include "sheafbar/errors.hpp"
#include "sheafbar/text_io.hpp"

namespace sheafbar {

namespace {

Endpoint add(const Endpoint& x, const Endpoint& y) {
  if (!x.is_finite()) return x;
  if (!y.is_finite()) return y;
  return Endpoint(Rational(x.value() + y.value()));
}

Rational power_of_two(int exponent) {
  Rational r = 1;
  for (int k = 0; k < exponent; ++k) r *= 2;
  for (int k = 0; k > exponent; --k) r /= 2;
  return r;
}

// Tail sum past the last map, modelled as geometric with the worst ratio among
// the last three observed; zero once the last map is an isomorphism.
Endpoint tail_bound(const std::vector<Endpoint>& cone_gammas) {
  if (cone_gammas.empty()) return Endpoint(0);
  if (std::any_of(cone_gammas.begin(), cone_gammas.end(), [](const Endpoint& e) { return !e.is_finite(); })) {
    return Endpoint::pos_inf();
  }
  const Rational last = cone_gammas.back().value();
  if (last == 0) return Endpoint(0);
  const std::size_t n = cone_gammas.size();
  if (n < 2) return Endpoint::pos_inf();
  Rational worst = 0;
  for (std::size_t k = n - 1; k >= 1 && k + 3 >= n; --k) {
    const Rational prev = cone_gammas[k - 1].value();
    if (prev == 0) return Endpoint::pos_inf();
    worst = std::max(worst, Rational(cone_gammas[k].value() / prev));
  }
  if (worst >= 1) return Endpoint::pos_inf();
  return Endpoint(Rational(last * worst / (1 - worst)));
}

// Limit of a chain of endpoint values when it is eventually constant (three
// equal values) or eventually geometric (three equal ratios of differences).
std::optional<Endpoint> chain_limit(const std::vector<Endpoint>& values) {
  const Endpoint& last = values.back();
  if (!last.is_finite()) return last;
  const std::size_t n = values.size();
  if (n < 3) return std::nullopt;
  for (std::size_t k = n - 3; k < n; ++k) {
    if (!values[k].is_finite()) return std::nullopt;
  }
  const Rational d2 = values[n - 1].value() - values[n - 2].value();
  const Rational d1 = values[n - 2].value() - values[n - 3].value();
  if (d1 == 0 && d2 == 0) return last;
  if (n < 4 || !values[n - 4].is_finite()) return std::nullopt;
  const Rational d0 = values[n - 3].value() - values[n - 4].value();
  if (d0 == 0 || d1 == 0) return std::nullopt;
  const Rational ratio = d1 / d0;
  if (d2 / d1 != ratio || ratio <= 0 || ratio >= 1) return std::nullopt;
  return Endpoint(Rational(last.value() + d2 * ratio / (1 - ratio)));
}

std::string stage_file(const char* prefix, std::size_t k, const char* ext) {
  return std::string(prefix) + std::to_string(k) + ext;
}

}  // namespace

void InductiveSystem::validate() const {
  if (stages.empty()) throw DomainError("inductive system has no stages");
  const std::size_t n_maps = stages.size() - 1;
  if (maps.size() != n_maps) throw DomainError("inductive system needs one map per consecutive pair of stages");
  if (slacks.size() != n_maps) throw DomainError("inductive system needs one slack per map");
  if (!reverse_maps.empty() && reverse_maps.size() != n_maps) {
    throw DomainError("reverse maps must be absent or given for every map");
  }
  for (std::size_t n = 0; n < n_maps; ++n) {
    if (maps[n].source() != stages[n] || maps[n].target() != stages[n + 1]) {
      throw StageError(n, "map does not join consecutive stages");
    }
    if (slacks[n] < 0) throw StageError(n, "negative slack");
    if (!reverse_maps.empty() && reverse_maps[n]) {
      const Morphism& g = *reverse_maps[n];
      if (g.source() != stages[n + 1] || g.target() != shift(stages[n], slacks[n])) {
        throw StageError(n, "reverse map must run from the next stage to the slack-shifted stage");
      }
      if (!equals_tau(compose(maps[n], g), slacks[n])) {
        throw StageError(n, "reverse map composed with the map is not tau");
      }
    }
  }
}

std::vector<Morphism> reverse_maps_or_solve(const InductiveSystem& system) {
  std::vector<Morphism> out;
  for (std::size_t n = 0; n < system.maps.size(); ++n) {
    if (!system.reverse_maps.empty() && system.reverse_maps[n]) {
      out.push_back(*system.reverse_maps[n]);
      continue;
    }
    std::optional<Morphism> g = solve_reverse_map(system.maps[n], system.slacks[n]);
    if (!g) {
      throw StageError(n, "no reverse map g with g o f = tau at slack " + to_string(system.slacks[n]));
    }
    out.push_back(std::move(*g));
  }
  return out;
}

HocolimResult hocolim(const InductiveSystem& system, const HocolimOptions& options) {
  system.validate();
  HocolimResult result;
  const std::size_t last = system.stages.size() - 1;
  for (const Morphism& f : system.maps) result.cone_gammas.push_back(cone_gamma(f));
  const Endpoint tail = tail_bound(result.cone_gammas);
  result.error_bound = tail.is_finite() ? Endpoint(Rational(2 * tail.value())) : tail;
  if (last == 0) {
    result.barcode = system.stages[0];
    result.chain_start.assign(result.barcode.size(), 0);
    result.exact = true;
    return result;
  }

  const DiagonalizedSystem diag =
      diagonalize_system(system.stages, system.maps, reverse_maps_or_solve(system), system.slacks);

  std::vector<Bar> bars;
  bool all_exact = true;
  std::vector<std::vector<char>> is_image(system.stages.size());
  for (std::size_t n = 0; n < system.stages.size(); ++n) is_image[n].assign(system.stages[n].size(), 0);
  for (std::size_t n = 0; n < last; ++n) {
    for (const auto& s : diag.sigma[n]) {
      if (s) is_image[n + 1][*s] = 1;
    }
  }
  std::vector<std::pair<Bar, std::size_t>> found;
  for (std::size_t n = 0; n < last; ++n) {
    for (std::size_t i = 0; i < system.stages[n].size(); ++i) {
      if (!diag.sigma[n][i] || is_image[n][i]) continue;
      std::vector<Endpoint> los{system.stages[n][i].interval.lo()};
      std::vector<Endpoint> his{system.stages[n][i].interval.hi()};
      std::size_t idx = i;
      std::size_t m = n;
      bool alive = true;
      while (m < last) {
        const auto next = diag.sigma[m][idx];
        if (!next) {
          alive = false;
          break;
        }
        idx = *next;
        ++m;
        los.push_back(system.stages[m][idx].interval.lo());
        his.push_back(system.stages[m][idx].interval.hi());
      }
      if (!alive) continue;
      Endpoint lo = los.back();
      Endpoint hi = his.back();
      if (options.exact) {
        const auto lo_lim = chain_limit(los);
        const auto hi_lim = chain_limit(his);
        if (lo_lim && hi_lim && *lo_lim < *hi_lim) {
          lo = *lo_lim;
          hi = *hi_lim;
        } else {
          all_exact = false;
        }
      }
      found.emplace_back(Bar{system.stages[last][idx].degree, Interval(lo, hi)}, n);
    }
  }
  std::sort(found.begin(), found.end());
  for (const auto& [bar, start] : found) {
    bars.push_back(bar);
    result.chain_start.push_back(start);
  }
  result.barcode = Barcode(std::move(bars));
  result.exact = options.exact && all_exact;
  return result;
}

DefectReport defect_check(const InductiveSystem& system, std::size_t n) {
  system.validate();
  const std::size_t last = system.stages.size() - 1;
  if (n > last) throw DomainError("defect_check: stage index past the last stage");
  DefectReport report;
  Endpoint sum(0);
  for (std::size_t k = n; k < last; ++k) sum = add(sum, cone_gamma(system.maps[k]));
  report.rhs = sum.is_finite() ? Endpoint(Rational(2 * sum.value())) : sum;
  if (n == last) {
    report.lhs = Endpoint(0);
  } else {
    const DiagonalizedSystem diag =
        diagonalize_system(system.stages, system.maps, reverse_maps_or_solve(system), system.slacks);
    Morphism composite = diag.f_hat[n];
    for (std::size_t k = n + 1; k < last; ++k) composite = compose(composite, diag.f_hat[k]);
    report.lhs = cone_gamma(composite);
  }
  report.holds = report.lhs <= report.rhs;
  return report;
}

CompletionResult complete_cauchy(const std::vector<Barcode>& sequence, const Rational& tol,
                                 const CompletionOptions& options) {
  if (sequence.empty()) throw DomainError("complete_cauchy: empty sequence");
  if (tol < 0) throw DomainError("complete_cauchy: negative tolerance");
  const std::size_t m = sequence.size();
  std::map<std::pair<std::size_t, std::size_t>, DistanceReport> memo;
  auto dist = [&](std::size_t i, std::size_t j) -> const DistanceReport& {
    auto it = memo.find({i, j});
    if (it == memo.end()) it = memo.emplace(std::make_pair(i, j), gamma(sequence[i], sequence[j], options.interleaving)).first;
    return it->second;
  };

  CompletionResult out;
  // Kept stage k must lie within 2^{-k} of every later input.
  std::size_t start = 0;
  for (int k = 0; start < m; ++k) {
    const Rational bound = power_of_two(-k);
    std::size_t pick = start;
    for (; pick < m; ++pick) {
      bool close = true;
      for (std::size_t j = pick + 1; j < m && close; ++j) close = dist(pick, j).value <= Endpoint(bound);
      if (close) break;
    }
    out.kept.push_back(pick);
    start = pick + 1;
  }

  InductiveSystem& sys = out.shifted;
  const std::size_t kept = out.kept.size();
  for (std::size_t k = 0; k < kept; ++k) {
    sys.stages.push_back(shift(sequence[out.kept[k]], -power_of_two(1 - static_cast<int>(k))));
  }
  for (std::size_t k = 0; k + 1 < kept; ++k) {
    const Barcode& cur = sequence[out.kept[k]];
    const Barcode& next = sequence[out.kept[k + 1]];
    const Rational step = power_of_two(-static_cast<int>(k));
    const DistanceReport& d = dist(out.kept[k], out.kept[k + 1]);
    std::optional<InterleavingCertificate> cert;
    if (d.certificate && d.certificate->a + d.certificate->b <= step) cert = d.certificate;
    if (!cert && d.value <= Endpoint(step)) {
      // The reported value may be an infimum; certify at the step itself.
      const Rational a = std::min(d.value.value(), step);
      const InterleavingResult r = check_interleaving(cur, next, a, step - a, options.interleaving);
      if (r.status == SearchStatus::Certificate) cert = r.certificate;
    }
    if (!cert) {
      throw DomainError("complete_cauchy: no interleaving certificate within " + to_string(step) +
                        " between kept stages " + std::to_string(k) + " and " + std::to_string(k + 1));
    }
    const Rational eps_cur = 2 * step;  // sum_{j>=k} 2^{-j}
    const Rational eps_next = step;
    // f'_k = tau ∘ shift(u, -eps_k): the shift a - eps_k stays below -eps_{k+1}.
    const Morphism u_shifted = shift(cert->u, -eps_cur);
    const Morphism lift = tau(u_shifted.target(), step - cert->a, cert->u.field());
    sys.maps.push_back(compose(u_shifted, lift));
    sys.reverse_maps.push_back(shift(cert->v, -eps_next));
    sys.slacks.push_back(step + cert->b);
    out.certificates.push_back(std::move(*cert));
  }
  out.limit = hocolim(sys, options.hocolim);
  out.barcode = out.limit.barcode;
  out.final_gamma = gamma(out.barcode, sequence.back(), options.interleaving).value;
  if (out.final_gamma > Endpoint(tol)) {
    throw DomainError("complete_cauchy: limit is at distance " + out.final_gamma.to_string() +
                      " from the last input, above the tolerance " + to_string(tol));
  }
  return out;
}

InductiveSystem load_system(const std::filesystem::path& dir, Field field) {
  if (!std::filesystem::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  InductiveSystem sys;
  for (std::size_t k = 0;; ++k) {
    const auto path = dir / stage_file("F", k, ".bc");
    if (!std::filesystem::exists(path)) break;
    sys.stages.push_back(read_barcode(path));
  }
  if (sys.stages.empty()) throw IoError("no F0.bc in " + dir.string());
  bool any_reverse = false;
  std::vector<std::optional<Morphism>> reverse;
  for (std::size_t k = 0; k + 1 < sys.stages.size(); ++k) {
    const auto fpath = dir / stage_file("f", k, ".mor");
    if (!std::filesystem::exists(fpath)) throw IoError("missing " + fpath.string());
    sys.maps.push_back(read_morphism(fpath, field));
    const auto gpath = dir / stage_file("g", k, ".mor");
    if (std::filesystem::exists(gpath)) {
      reverse.push_back(read_morphism(gpath, field));
      any_reverse = true;
    } else {
      reverse.emplace_back();
    }
  }
  if (any_reverse) sys.reverse_maps = std::move(reverse);
  const auto slack_path = dir / "slacks.txt";
  if (std::filesystem::exists(slack_path)) {
    std::istringstream in(read_text_file(slack_path));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        sys.slacks.push_back(parse_rational(line));
      } catch (const ParseError& e) {
        throw ParseError(e.what(), line_no);
      }
    }
    if (sys.slacks.size() != sys.maps.size()) {
      throw ParseError("slacks.txt lists " + std::to_string(sys.slacks.size()) + " slacks for " +
                           std::to_string(sys.maps.size()) + " maps",
                       line_no);
    }
  } else {
    sys.slacks.assign(sys.maps.size(), Rational(0));
  }
  sys.validate();
  return sys;
}

}  // namespace sheafbar
