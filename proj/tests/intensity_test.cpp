#include "ssm/intensity.hpp"

#include <gtest/gtest.h>

#include "ssm/error.hpp"

namespace ssm {
namespace {

TEST(Intensity, ScaleOrderIsFixed) {
  ASSERT_EQ(kAllIntensities.size(), 7u);
  const char* expected[] = {"SN", "NE", "WN", "IF", "WP", "PO", "SP"};
  for (int i = 0; i < kIntensityCount; ++i) {
    EXPECT_EQ(to_string(kAllIntensities[i]), expected[i]);
    EXPECT_EQ(index_of(kAllIntensities[i]), i);
  }
  EXPECT_EQ(reflect(Intensity::SN), Intensity::SP);
  EXPECT_EQ(reflect(Intensity::IF), Intensity::IF);
}

TEST(HypothesisNotation, Examples) {
  EXPECT_EQ(hypothesis_from_notation("SP"), HypothesisSet(Intensity::SP));
  EXPECT_EQ(hypothesis_from_notation("{IF,WP}"),
            HypothesisSet::of({Intensity::IF, Intensity::WP}));
  EXPECT_EQ(hypothesis_from_notation("WN..PO"),
            HypothesisSet::of({Intensity::WN, Intensity::IF, Intensity::WP, Intensity::PO}));
  EXPECT_EQ(hypothesis_from_notation(" { WP , IF } "),
            HypothesisSet::of({Intensity::IF, Intensity::WP}));
}

TEST(HypothesisNotation, ErrorsNameTheToken) {
  try {
    hypothesis_from_notation("{IF,XX}");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("XX"), std::string::npos);
  }
  EXPECT_THROW(hypothesis_from_notation("{}"), ParseError);
  EXPECT_THROW(hypothesis_from_notation(""), ParseError);
  EXPECT_THROW(hypothesis_from_notation("{IF"), ParseError);
  EXPECT_THROW(hypothesis_from_notation("sp"), ParseError);
  EXPECT_THROW(hypothesis_from_notation("IF..QQ"), ParseError);
}

TEST(HypothesisNotation, DegenerateRangeIsSingleton) {
  for (auto p : kAllIntensities) {
    const std::string name(to_string(p));
    EXPECT_EQ(hypothesis_from_notation(name + ".." + name), hypothesis_from_notation(name));
  }
}

TEST(HypothesisNotation, ReversedRangeEqualsForward) {
  EXPECT_EQ(hypothesis_from_notation("PO..WN"), hypothesis_from_notation("WN..PO"));
}

TEST(HypothesisSet, AllSubsetsRoundTripThroughNotation) {
  for (int mask = 1; mask < kSubsetCount; ++mask) {
    const auto h = HypothesisSet::from_mask(static_cast<SubsetMask>(mask));
    EXPECT_EQ(hypothesis_from_notation(h.notation()), h) << h.notation();
    EXPECT_EQ(h.reflected().reflected(), h);
  }
  EXPECT_THROW(HypothesisSet::from_mask(0), std::invalid_argument);
  EXPECT_THROW(HypothesisSet::from_mask(0x80), std::invalid_argument);
}

TEST(HypothesisSet, SetSemantics) {
  const auto a = HypothesisSet::of({Intensity::WP, Intensity::IF});
  const auto b = HypothesisSet::of({Intensity::IF, Intensity::WP});
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), 2);
  EXPECT_EQ(a.lowest(), Intensity::IF);
  EXPECT_EQ(a.highest(), Intensity::WP);
  EXPECT_DOUBLE_EQ(a.midpoint_index(), 3.5);
  EXPECT_TRUE(a.is_subset_of(HypothesisSet::full()));
  EXPECT_FALSE(HypothesisSet::full().is_subset_of(a));
  EXPECT_TRUE(HypothesisSet::full().is_full());
  EXPECT_EQ(HypothesisSet::full().notation(), "{SN,NE,WN,IF,WP,PO,SP}");
  EXPECT_EQ(a.notation(), "{IF,WP}");
}

}  // namespace
}  // namespace ssm
