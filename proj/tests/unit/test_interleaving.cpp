#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sheafbar/barcode_maps.hpp"
#include "sheafbar/errors.hpp"
#include "sheafbar/interleaving.hpp"
#include "sheafbar/text_io.hpp"

namespace sheafbar {
namespace {

using testing::bar;

const Barcode kF{bar(0, 0, 10)};
const Barcode kG{bar(0, 1, 10)};

Endpoint fin(const Rational& r) { return Endpoint(r); }

TEST(CheckInterleaving, Examples) {
  const auto same = check_interleaving(kF, kF, Rational(0), Rational(0));
  ASSERT_EQ(same.status, SearchStatus::Certificate);
  EXPECT_EQ(same.certificate->u, identity(kF));
  const auto ok = check_interleaving(kF, kG, Rational(0), Rational(1));
  ASSERT_EQ(ok.status, SearchStatus::Certificate);
  EXPECT_TRUE(verify_certificate(kF, kG, *ok.certificate));
  EXPECT_EQ(check_interleaving(kF, kG, Rational(0), Rational(1, 2)).status, SearchStatus::Infeasible);
  EXPECT_THROW(check_interleaving(kF, kG, Rational(-1), Rational(1)), DomainError);
}

TEST(CheckInterleaving, AgreesWithBruteForceOverGF2) {
  testing::Rng rng(53);
  int feasible = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const Barcode f = testing::random_barcode(rng, 3, 0, 5, 2);
    const Barcode g = testing::random_barcode(rng, 3, 0, 5, 2);
    const Rational a = rng.rational(0, 2, 2);
    const Rational b = rng.rational(0, 2, 2);
    const bool oracle = testing::brute_force_interleaved(f, g, a, b);
    const auto r = check_interleaving(f, g, a, b);
    ASSERT_NE(r.status, SearchStatus::Unknown);
    EXPECT_EQ(r.status == SearchStatus::Certificate, oracle) << f << "| " << g << " a=" << a << " b=" << b;
    if (r.certificate) {
      EXPECT_TRUE(verify_certificate(f, g, *r.certificate));
      ++feasible;
    }
  }
  EXPECT_GT(feasible, 50);
}

TEST(Gamma, EquationsSpanningSeveralTermBlocks) {
  // Composition equations here mix products of otherwise unrelated unknowns;
  // the search must treat every unknown of one equation as one block.
  const Barcode f = parse_barcode("0 3/4 5/2\n0 1 17/4\n0 3/2 19/2\n0 2 7/2\n0 13/2 39/4\n0 33/4 39/4\n");
  const Barcode g = parse_barcode("0 1 35/4\n0 2 31/4\n0 3 39/4\n0 11/2 7\n0 23/4 7\n");
  const auto fg = gamma(f, g);
  const auto gf = gamma(g, f);
  EXPECT_EQ(fg.value, gf.value);
  EXPECT_LE(fg.lower, fg.upper);
  ASSERT_TRUE(fg.certificate);
  EXPECT_TRUE(verify_certificate(f, g, *fg.certificate));
}

TEST(CheckInterleaving, FeasibilityIsUpwardClosed) {
  testing::Rng rng(59);
  for (int trial = 0; trial < 100; ++trial) {
    const Barcode f = testing::random_barcode(rng, 4, 0, 6, 2);
    const Barcode g = testing::random_barcode(rng, 4, 0, 6, 2);
    const Rational a = rng.rational(0, 2, 2);
    const Rational b = rng.rational(0, 2, 2);
    if (check_interleaving(f, g, a, b).status != SearchStatus::Certificate) continue;
    EXPECT_EQ(check_interleaving(f, g, a + Rational(1, 2), b).status, SearchStatus::Certificate);
    EXPECT_EQ(check_interleaving(f, g, a, b + Rational(1, 3)).status, SearchStatus::Certificate);
  }
}

TEST(Gamma, Examples) {
  EXPECT_EQ(gamma(kF, kF).value, fin(0));
  const auto one = gamma(Barcode{}, Barcode{bar(0, 0, 2)});
  EXPECT_EQ(one.value, fin(2));
  EXPECT_EQ(one.exactness, Exactness::Exact);
  const auto r = gamma(kF, kG);
  EXPECT_EQ(r.value, fin(1));
  EXPECT_EQ(r.exactness, Exactness::Exact);
  ASSERT_TRUE(r.certificate);
  EXPECT_TRUE(verify_certificate(kF, kG, *r.certificate));
  EXPECT_EQ(r.certificate->a + r.certificate->b, Rational(1));
}

TEST(Gamma, SymmetricExamples) {
  EXPECT_EQ(gamma_symmetric(kF, kF).value, fin(0));
  const auto r = gamma_symmetric(kF, kG);
  EXPECT_EQ(r.value, fin(2));
  EXPECT_EQ(r.exactness, Exactness::Exact);
  ASSERT_TRUE(r.certificate);
  EXPECT_EQ(r.certificate->a, Rational(1));
  EXPECT_EQ(r.certificate->b, Rational(1));
}

TEST(Gamma, IncompatibleInfiniteBarsGiveInfinity) {
  const Barcode inf{Bar{0, Interval(Endpoint(0), Endpoint::pos_inf())}};
  EXPECT_TRUE(gamma(inf, Barcode{}).value.is_pos_inf());
  const Barcode left{Bar{0, Interval(Endpoint::neg_inf(), Endpoint(0))}};
  EXPECT_TRUE(gamma(inf, left).value.is_pos_inf());
  const Barcode inf2{Bar{0, Interval(Endpoint(3), Endpoint::pos_inf())}};
  EXPECT_EQ(gamma(inf, inf2).value, fin(3));
}

TEST(Gamma, ToZeroIsMaximalBarLength) {
  testing::Rng rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    const Barcode f = testing::random_barcode(rng, 5, 0, 10, 4);
    EXPECT_EQ(gamma(Barcode{}, f).value, gamma_to_zero(f));
    EXPECT_EQ(gamma(f, Barcode{}).value, gamma_to_zero(f));
  }
}

TEST(Gamma, MatchesBruteForceGridSearch) {
  // Integer endpoints keep the infimum on the half-integer grid.
  testing::Rng rng(67);
  for (int trial = 0; trial < 40; ++trial) {
    const Barcode f = testing::random_barcode(rng, 2, 0, 4, 1);
    const Barcode g = testing::random_barcode(rng, 2, 0, 4, 1);
    for (bool symmetric : {false, true}) {
      const auto r = symmetric ? gamma_symmetric(f, g) : gamma(f, g);
      ASSERT_EQ(r.exactness, Exactness::Exact);
      const auto oracle = testing::brute_force_gamma(f, g, Rational(1, 2), Rational(5), symmetric);
      ASSERT_TRUE(oracle.has_value());
      // No grid point below the value is feasible; the infimum is reached on the grid or approached from above.
      EXPECT_LE(r.value, fin(*oracle)) << f << "| " << g;
      EXPECT_GE(r.value + Rational(1, 2), fin(*oracle)) << f << "| " << g;
    }
  }
}

TEST(Gamma, GradedInputsTakeThePerDegreeMaximum) {
  const Barcode f{bar(0, 0, 10), bar(1, 0, 4)};
  const Barcode g{bar(0, 1, 10), bar(1, 0, 4)};
  const auto r = gamma(f, g);
  EXPECT_EQ(r.value, fin(1));
  ASSERT_EQ(r.per_degree.size(), 2u);
  EXPECT_EQ(r.per_degree[1].value, fin(0));
}

TEST(MatchingWitness, Examples) {
  EXPECT_TRUE(matching_witness(kF, kF, Rational(0)));
  const Barcode shifted{bar(0, 1, 11)};
  const auto w = matching_witness(kF, shifted, Rational(1));
  ASSERT_TRUE(w);
  EXPECT_TRUE(verify_certificate(kF, shifted, *w));
  EXPECT_FALSE(matching_witness(kF, Barcode{}, Rational(1)));
}

TEST(SolveReverseMap, FindsTheInverseUpToTau) {
  const Barcode g{bar(0, 0, 10), bar(0, 1, 11)};
  Morphism u = identity(g);
  u.set(1, 0, 1);
  const auto v = solve_reverse_map(u, Rational(1));
  ASSERT_TRUE(v);
  EXPECT_TRUE(equals_tau(compose(u, *v), Rational(1)));
  EXPECT_FALSE(solve_reverse_map(zero_morphism(g, g), Rational(1)));
}

TEST(ConeBounds, InterleavingBoundsTheCone) {
  testing::Rng rng(71);
  for (int trial = 0; trial < 60; ++trial) {
    const Barcode f = testing::random_barcode(rng, 4, 0, 8, 2);
    const Barcode g = testing::perturb_right(rng, f, Rational(1), 2);
    const Rational eps(1);
    const auto r = check_interleaving(f, g, eps, eps);
    ASSERT_EQ(r.status, SearchStatus::Certificate);
    EXPECT_LE(cone_gamma(r.certificate->u), fin(2 * eps));
  }
}

}  // namespace
}  // namespace sheafbar
