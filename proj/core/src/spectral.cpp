#include "sheafbar/spectral.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <string>

#include <boost/pending/disjoint_sets.hpp>

#include "sheafbar/errors.hpp"
#include "sheafbar/text_io.hpp"

namespace sheafbar {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string_view to_string(EssentialConvention c) {
  return c == EssentialConvention::LeftInfinite ? "left-infinite" : "sublevel";
}

std::string_view to_string(PLDomain d) { return d == PLDomain::Circle ? "circle" : "interval"; }

SpectralReport spectral_invariants(const Barcode& b, EssentialConvention convention, int dim) {
  const bool left = convention == EssentialConvention::LeftInfinite;
  const int low_degree = left ? -1 : 0;
  const int high_degree = left ? dim - 1 : dim;
  SpectralReport report;
  int low_count = 0;
  int high_count = 0;
  for (const Bar& bar : b) {
    const Endpoint& lo = bar.interval.lo();
    const Endpoint& hi = bar.interval.hi();
    const bool essential = left ? lo.is_neg_inf() : hi.is_pos_inf();
    if (!essential) continue;
    const Endpoint& finite = left ? hi : lo;
    if (!finite.is_finite()) {
      throw DomainError("essential bar " + bar.interval.to_string() + " has no finite endpoint");
    }
    report.invariants.emplace_back(bar.degree, finite.value());
    if (bar.degree == low_degree) ++low_count;
    if (bar.degree == high_degree) ++high_count;
  }
  auto require = [](int count, int degree) {
    if (count == 0) throw DomainError("no essential bar in degree " + std::to_string(degree));
    if (count > 1) {
      throw DomainError(std::to_string(count) + " essential bars in degree " + std::to_string(degree) +
                        ", expected one");
    }
  };
  if (low_degree == high_degree) {
    if (low_count != 2) {
      throw DomainError("expected two essential bars in degree " + std::to_string(low_degree) + ", found " +
                        std::to_string(low_count));
    }
  } else {
    require(low_count, low_degree);
    require(high_count, high_degree);
  }
  const auto [mn, mx] = std::minmax_element(report.invariants.begin(), report.invariants.end(),
                                            [](const auto& x, const auto& y) { return x.second < y.second; });
  report.c_minus = mn->second;
  report.c_plus = mx->second;
  report.gamma = report.c_plus - report.c_minus;
  return report;
}

Barcode reverse_orientation(const Barcode& b) {
  std::vector<Bar> bars;
  bars.reserve(b.size());
  auto negate = [](const Endpoint& e) {
    if (e.is_neg_inf()) return Endpoint::pos_inf();
    if (e.is_pos_inf()) return Endpoint::neg_inf();
    return Endpoint(Rational(-e.value()));
  };
  for (const Bar& bar : b) {
    bars.push_back(Bar{bar.degree, Interval(negate(bar.interval.hi()), negate(bar.interval.lo()))});
  }
  return Barcode(std::move(bars));
}

void PLFunction::validate() const {
  if (breakpoints.size() != values.size()) throw DomainError("PL function: breakpoint and value counts differ");
  if (breakpoints.size() < 2) throw DomainError("PL function needs at least two breakpoints");
  for (std::size_t k = 1; k < breakpoints.size(); ++k) {
    if (!(breakpoints[k - 1] < breakpoints[k])) throw DomainError("PL function breakpoints must increase strictly");
  }
}

Rational PLFunction::min() const { return *std::min_element(values.begin(), values.end()); }
Rational PLFunction::max() const { return *std::max_element(values.begin(), values.end()); }

Barcode sublevel_barcode(const PLFunction& f) {
  f.validate();
  const std::size_t n = f.values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  // Ties resolved by index, so the filtration is a strict total order.
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return f.values[x] < f.values[y]; });
  std::vector<std::size_t> rank(n), parent(n);
  boost::disjoint_sets<std::size_t*, std::size_t*> sets(rank.data(), parent.data());
  std::vector<std::size_t> oldest(n);  // vertex of minimal (value, order) per root
  std::vector<std::size_t> position(n);
  for (std::size_t k = 0; k < n; ++k) position[order[k]] = k;
  std::vector<char> active(n, 0);
  std::vector<Bar> bars;
  const bool circle = f.domain == PLDomain::Circle;

  for (std::size_t v : order) {
    sets.make_set(v);
    oldest[v] = v;
    active[v] = 1;
    std::vector<std::size_t> nbrs;
    if (v > 0) nbrs.push_back(v - 1);
    if (v + 1 < n) nbrs.push_back(v + 1);
    if (circle && n > 2) {
      if (v == 0) nbrs.push_back(n - 1);
      if (v == n - 1) nbrs.push_back(0);
    }
    if (circle && n == 2) nbrs.push_back(1 - v);  // two parallel edges close the loop
    for (std::size_t w : nbrs) {
      if (!active[w]) continue;
      const std::size_t rv = sets.find_set(v);
      const std::size_t rw = sets.find_set(w);
      if (rv == rw) {
        bars.push_back(Bar{1, Interval(Endpoint(f.values[v]), Endpoint::pos_inf())});
        continue;
      }
      const std::size_t ov = oldest[rv];
      const std::size_t ow = oldest[rw];
      const std::size_t elder = position[ov] < position[ow] ? ov : ow;
      const std::size_t younger = elder == ov ? ow : ov;
      if (f.values[younger] < f.values[v]) {
        bars.push_back(Bar{0, Interval(Endpoint(f.values[younger]), Endpoint(f.values[v]))});
      }
      sets.link(rv, rw);
      oldest[sets.find_set(v)] = elder;
    }
  }
  bars.push_back(Bar{0, Interval(Endpoint(f.values[order.front()]), Endpoint::pos_inf())});
  return Barcode(std::move(bars));
}

PLFunction parse_pl_function(std::string_view text) {
  PLFunction f;
  bool have_domain = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.rfind("domain:", 0) == 0) {
      const std::string_view name = trim(line.substr(7));
      if (name == "circle") {
        f.domain = PLDomain::Circle;
      } else if (name == "interval") {
        f.domain = PLDomain::Interval;
      } else {
        throw ParseError("unknown domain '" + std::string(name) + "'", line_no);
      }
      have_domain = true;
      continue;
    }
    std::istringstream fields{std::string(line)};
    std::string x, y, extra;
    if (!(fields >> x >> y) || (fields >> extra)) throw ParseError("expected '<breakpoint> <value>'", line_no);
    try {
      f.breakpoints.push_back(parse_rational(x));
      f.values.push_back(parse_rational(y));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (!have_domain) throw ParseError("missing 'domain:' header");
  try {
    f.validate();
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
  return f;
}

PLFunction read_pl_function(const std::filesystem::path& path) { return parse_pl_function(read_text_file(path)); }

}  // namespace sheafbar
