#include <benchmark/benchmark.h>

#include <algorithm>
#include <vector>

#include "oracles.hpp"
#include "sheafbar/canonical_form.hpp"
#include "sheafbar/cone_geometry.hpp"
#include "sheafbar/interleaving.hpp"
#include "sheafbar/limits.hpp"
#include "sheafbar/spectral.hpp"

namespace sheafbar {
namespace {

// Fixed pools so every iteration sees the same inputs.
std::vector<std::pair<Barcode, Barcode>> barcode_pairs(int bars, int count) {
  testing::Rng rng(static_cast<std::uint64_t>(bars) * 7919);
  std::vector<std::pair<Barcode, Barcode>> out;
  for (int k = 0; k < count; ++k) {
    const Barcode f = testing::random_barcode(rng, bars, 0, 10, 4, bars);
    out.emplace_back(f, testing::perturb_right(rng, f, Rational(1), 4));
  }
  return out;
}

void BM_GammaNearbyPairs(benchmark::State& state) {
  const auto pairs = barcode_pairs(static_cast<int>(state.range(0)), 16);
  std::size_t k = 0;
  for (auto _ : state) {
    const auto& [f, g] = pairs[k++ % pairs.size()];
    benchmark::DoNotOptimize(gamma(f, g));
  }
}
BENCHMARK(BM_GammaNearbyPairs)->Arg(2)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMicrosecond);

void BM_CheckInterleaving(benchmark::State& state) {
  const auto pairs = barcode_pairs(static_cast<int>(state.range(0)), 16);
  std::size_t k = 0;
  for (auto _ : state) {
    const auto& [f, g] = pairs[k++ % pairs.size()];
    benchmark::DoNotOptimize(check_interleaving(f, g, Rational(1), Rational(1)));
  }
}
BENCHMARK(BM_CheckInterleaving)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMicrosecond);

void BM_CanonicalForm(benchmark::State& state) {
  testing::Rng rng(17);
  std::vector<testing::HalfInterleaving> pool;
  for (int k = 0; k < 16; ++k) {
    pool.push_back(testing::random_half_interleaving(rng, static_cast<int>(state.range(0)), 2, Field(2)));
  }
  std::size_t k = 0;
  for (auto _ : state) {
    const auto& inst = pool[k++ % pool.size()];
    benchmark::DoNotOptimize(canonical_form(inst.u, inst.v, inst.eps));
  }
}
BENCHMARK(BM_CanonicalForm)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMicrosecond);

void BM_HocolimGeometricTower(benchmark::State& state) {
  const int stages = static_cast<int>(state.range(0));
  InductiveSystem s;
  for (int n = 0; n < stages; ++n) {
    s.stages.push_back(Barcode{testing::bar(0, 0, 1 - Rational(1, 1 << (n + 1))), testing::bar(0, 2, 5)});
  }
  for (int n = 0; n + 1 < stages; ++n) {
    Morphism f(s.stages[n], s.stages[n + 1]);
    f.set(0, 0, 1);
    f.set(1, 1, 1);
    s.maps.push_back(f);
    s.slacks.push_back(Rational(1, 1 << (n + 2)));
  }
  for (auto _ : state) benchmark::DoNotOptimize(hocolim(s, HocolimOptions{true}));
}
BENCHMARK(BM_HocolimGeometricTower)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMicrosecond);

void BM_SublevelCircle(benchmark::State& state) {
  testing::Rng rng(23);
  PLFunction f;
  f.domain = PLDomain::Circle;
  for (int k = 0; k < state.range(0); ++k) {
    f.breakpoints.emplace_back(k);
    f.values.push_back(rng.rational(-50, 50, 8));
  }
  for (auto _ : state) benchmark::DoNotOptimize(sublevel_barcode(f));
}
BENCHMARK(BM_SublevelCircle)->Arg(16)->Arg(256)->Arg(4096)->Unit(benchmark::kMicrosecond);

void BM_ConeCoisotropyPlane(benchmark::State& state) {
  std::vector<Eigen::VectorXd> pts;
  for (int a = -4; a <= 4; ++a) {
    for (int b = -4; b <= 4; ++b) {
      for (int d = -4; d <= 4; ++d) pts.push_back(Eigen::Vector4d(a / 512.0, b / 512.0, 0.0, d / 512.0));
    }
  }
  const PointCloud cloud(4, std::move(pts));
  for (auto _ : state) benchmark::DoNotOptimize(cone_coisotropy_test(cloud, Eigen::VectorXd::Zero(4)));
}
BENCHMARK(BM_ConeCoisotropyPlane)->Unit(benchmark::kMillisecond);

void BM_DegeneracyDemo(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<Bar> f_bars, g_bars;
  std::vector<Rational> points;
  for (int q = 1; q <= n; ++q) {
    for (int p = 0; p <= q; ++p) points.emplace_back(p, q);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  for (std::size_t k = 0; k < points.size(); ++k) {
    f_bars.push_back(Bar{0, Interval(Endpoint(points[k]), Endpoint::pos_inf())});
    const Rational next = k + 1 < points.size() ? points[k + 1] : points[k] + Rational(1, n);
    g_bars.push_back(Bar{0, Interval(Endpoint(next), Endpoint::pos_inf())});
  }
  const Barcode f(f_bars), g(g_bars);
  for (auto _ : state) benchmark::DoNotOptimize(check_interleaving(f, g, Rational(0), Rational(1, n)));
}
BENCHMARK(BM_DegeneracyDemo)->Arg(4)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace sheafbar

// The packaged benchmark_main archive is LTO bytecode from another compiler.
BENCHMARK_MAIN();
