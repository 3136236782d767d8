#include <gtest/gtest.h>

#include <filesystem>

#include "oracles.hpp"
#include "sheafbar/barcode.hpp"
#include "sheafbar/errors.hpp"
#include "sheafbar/morphism.hpp"
#include "sheafbar/text_io.hpp"

namespace sheafbar {
namespace {

using testing::bar;
using testing::iv;

TEST(Barcode, KeepsCanonicalOrderAndMultiplicity) {
  const Barcode b{bar(1, 0, 1), bar(0, 2, 3), bar(0, 0, 5), bar(0, 2, 3)};
  ASSERT_EQ(b.size(), 4u);
  EXPECT_EQ(b[0], bar(0, 0, 5));
  EXPECT_EQ(b[1], bar(0, 2, 3));
  EXPECT_EQ(b[2], bar(0, 2, 3));
  EXPECT_EQ(b[3], bar(1, 0, 1));
  EXPECT_EQ(b.multiplicities().at(bar(0, 2, 3)), 2u);
  EXPECT_EQ(b.degrees(), (std::vector<int>{0, 1}));
  EXPECT_FALSE(b.is_degree_pure());
  EXPECT_EQ(b.restrict_degree(0).size(), 3u);
  EXPECT_EQ(b.indices_of_degree(1), (std::vector<std::size_t>{3}));
}

TEST(Barcode, ShiftExamples) {
  EXPECT_EQ(shift(Barcode{bar(0, 0, 1)}, Rational(2)), (Barcode{bar(0, 2, 3)}));
  const Barcode left_inf{Bar{0, Interval(Endpoint::neg_inf(), Endpoint(3))}};
  EXPECT_EQ(shift(left_inf, Rational(1)), (Barcode{Bar{0, Interval(Endpoint::neg_inf(), Endpoint(4))}}));
  EXPECT_TRUE(shift(Barcode{}, Rational(5)).empty());
}

TEST(Barcode, GammaToZeroExamples) {
  EXPECT_EQ(gamma_to_zero(Barcode{bar(0, 0, 5)}), Endpoint(5));
  EXPECT_EQ(gamma_to_zero(Barcode{}), Endpoint(0));
  EXPECT_TRUE(gamma_to_zero(Barcode{Bar{0, Interval(Endpoint(0), Endpoint::pos_inf())}}).is_pos_inf());
}

TEST(Barcode, GammaToZeroIsTheFirstVanishingTau) {
  // Sweep c over a fine grid; tau(B, c) vanishes exactly from the maximal length on.
  testing::Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Barcode b = testing::random_barcode(rng, 5, 0, 8, 2, 1);
    const Rational expected = gamma_to_zero(b).value();
    for (Rational c = 0; c <= 9; c += Rational(1, 4)) {
      EXPECT_EQ(tau(b, c).is_zero(), c >= expected) << b << " c=" << c;
    }
  }
}

TEST(Barcode, DirectSumMergesMultisets) {
  const Barcode s = direct_sum(Barcode{bar(0, 0, 1)}, Barcode{bar(0, 0, 1), bar(1, 2, 3)});
  EXPECT_EQ(s.size(), 3u);
  EXPECT_EQ(s.multiplicities().at(bar(0, 0, 1)), 2u);
}

TEST(BarcodeText, ParseExamples) {
  EXPECT_EQ(parse_barcode("0 0 5\n"), (Barcode{bar(0, 0, 5)}));
  EXPECT_EQ(parse_barcode("0 -inf 3/2\n"),
            (Barcode{Bar{0, Interval(Endpoint::neg_inf(), Endpoint(Rational(3, 2)))}}));
  try {
    parse_barcode("# header\n0 5 5\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("empty interval"), std::string::npos);
  }
}

TEST(BarcodeText, RejectsMalformedLines) {
  EXPECT_THROW(parse_barcode("0 1\n"), ParseError);
  EXPECT_THROW(parse_barcode("0 1 x\n"), ParseError);
  EXPECT_THROW(parse_barcode("a 1 2\n"), ParseError);
  EXPECT_THROW(parse_barcode("0 1 2 0\n"), ParseError);
  EXPECT_THROW(parse_barcode("0 1 2 3 4\n"), ParseError);
}

TEST(BarcodeText, MultiplicityColumnExpands) {
  const Barcode b = parse_barcode("0 0 1 3\n");
  EXPECT_EQ(b.size(), 3u);
  EXPECT_EQ(emit_barcode(b), "0 0 1 3\n");
}

TEST(BarcodeText, RoundTripOnRandomBarcodes) {
  testing::Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Bar> bars;
    const int n = rng.uniform(0, 6);
    for (int k = 0; k < n; ++k) {
      Endpoint lo = rng.coin(0.2) ? Endpoint::neg_inf() : Endpoint(rng.rational(-5, 5, 6));
      Endpoint hi = rng.coin(0.2) ? Endpoint::pos_inf() : Endpoint(rng.rational(-5, 5, 6));
      if (!(lo < hi)) std::swap(lo, hi);
      if (!(lo < hi)) continue;
      bars.push_back(Bar{rng.uniform(-1, 2), Interval(lo, hi)});
    }
    const Barcode b(std::move(bars));
    const std::string text = emit_barcode(b);
    EXPECT_EQ(parse_barcode(text), b);
    EXPECT_EQ(emit_barcode(parse_barcode(text)), text);
  }
}

TEST(BarcodeText, FixturesRoundTrip) {
  int seen = 0;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(SHEAFBAR_FIXTURE_DIR)) {
    if (entry.path().extension() != ".bc" || entry.path().parent_path().filename() == "bad") continue;
    const Barcode b = read_barcode(entry.path());
    EXPECT_EQ(parse_barcode(emit_barcode(b)), b) << entry.path();
    ++seen;
  }
  EXPECT_GT(seen, 0);
}

TEST(BarcodeText, MissingFileIsIoError) {
  EXPECT_THROW(read_barcode("/nonexistent/file.bc"), IoError);
}

}  // namespace
}  // namespace sheafbar
