#include <gtest/gtest.h>

#include <cmath>

#include "chaindev/development.hpp"
#include "chaindev/selfsim.hpp"
#include "support.hpp"

using namespace chaindev;

namespace {

double truncation_width(const SelfSimilarSpec& spec, std::size_t depth)
{
  return width(build_tree(truncate(spec, depth))).width;
}

std::vector<double> gap_lengths(const SymbolicDevelopment& dev)
{
  std::vector<double> out;
  for (const auto& g : dev.gaps) out.push_back(g.length);
  return out;
}

}  // namespace

TEST(WidthSeries, CantorSquareDiverges)
{
  const auto s = width_series(cantor_square_spec(), 3);
  ASSERT_EQ(s.terms.size(), 3u);
  EXPECT_NEAR(s.terms[0], 1.0, 1e-12);
  EXPECT_NEAR(s.terms[1], 4.0 / 3.0, 1e-12);
  EXPECT_NEAR(s.terms[2], 16.0 / 9.0, 1e-12);
  EXPECT_FALSE(s.convergent);
  EXPECT_TRUE(std::isinf(s.total));
  EXPECT_NEAR(s.growth, 4.0 / 3.0, 1e-15);
}

TEST(WidthSeries, CantorConverges)
{
  const auto s = width_series(cantor_spec(), 5);
  for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(s.terms[k], std::pow(2.0 / 3.0, k) / 3.0, 1e-15);
  EXPECT_TRUE(s.convergent);
  EXPECT_NEAR(s.total, 1.0, 1e-12);
}

TEST(WidthSeries, DepthZero)
{
  EXPECT_TRUE(width_series(cantor_spec(), 0).terms.empty());
  EXPECT_TRUE(width_series(cantor_spec(), 0).convergent);
  EXPECT_FALSE(width_series(cantor_square_spec(), 0).convergent);
}

TEST(SelfSimilarSpec, Validation)
{
  EXPECT_THROW((SelfSimilarSpec{1, 1.0, 0.5}.validate()), ValidationError);
  EXPECT_THROW((SelfSimilarSpec{2, 0.0, 0.5}.validate()), ValidationError);
  EXPECT_THROW((SelfSimilarSpec{2, 1.0, 1.0}.validate()), ValidationError);
  EXPECT_THROW((SelfSimilarSpec{2, 1.0, 0.0}.validate()), ValidationError);
}

TEST(Truncate, Examples)
{
  const auto one = truncate(cantor_spec(), 1);
  ASSERT_EQ(one.size(), 2u);
  EXPECT_EQ(one.distance(0, 1), 1.0 / 3.0);

  const auto square = truncate(cantor_square_spec(), 1);
  ASSERT_EQ(square.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(square.distance(i, j), i == j ? 0.0 : 1.0 / 3.0);
  }

  EXPECT_NEAR(truncation_width(cantor_spec(), 2), 5.0 / 9.0, 1e-15);
  EXPECT_TRUE(is_ultrametric(truncate(cantor_square_spec(), 2).dense()));
  EXPECT_EQ(truncate(cantor_spec(), 2).labels()[2], "1.0");
  EXPECT_EQ(truncate(cantor_spec(), 0).size(), 1u);
}

TEST(Truncate, CapExceeded)
{
  EXPECT_THROW(truncate(cantor_square_spec(), 9), CapExceeded);
  EXPECT_THROW(truncate(cantor_spec(), 5, 16), CapExceeded);
  EXPECT_NO_THROW(truncate(cantor_spec(), 4, 16));
}

TEST(Truncate, WidthMatchesPartialSums)
{
  const std::vector<SelfSimilarSpec> specs{
      cantor_spec(), cantor_square_spec(), {3, 2.0, 0.25}, {2, 1.0, 0.5}, {5, 0.7, 0.9}, {2, 3.0, 0.1}};
  for (const auto& spec : specs) {
    double previous = -1.0;
    for (std::size_t depth = 0; depth <= 12; ++depth) {
      if (std::pow(static_cast<double>(spec.branching), static_cast<double>(depth)) > 4096.0) break;
      const double w = truncation_width(spec, depth);
      const double partial = width_series(spec, depth).partial_sum();
      EXPECT_NEAR(w, partial, 1e-9 * std::max(1.0, partial));
      EXPECT_GE(w, previous);
      previous = w;
      const auto series = width_series(spec, depth);
      if (series.convergent) {
        EXPECT_LE(w, series.total * (1 + 1e-12));
      }
    }
  }
}

TEST(Truncate, DevelopmentsOfTruncations)
{
  for (const auto& spec : {cantor_spec(), SelfSimilarSpec{3, 1.0, 0.2}, cantor_square_spec()}) {
    for (std::size_t depth = 1; depth <= 4; ++depth) {
      const auto space = truncate(spec, depth);
      const auto dev = build_development(build_tree(chain_distance(space)));
      const auto check = verify_development(space, dev.coords);
      EXPECT_TRUE(check.pass);
      EXPECT_NEAR(dev.diameter(), width_series(spec, depth).partial_sum(), 1e-9);
    }
  }
}

TEST(Stretch, ZeroIsIdentity)
{
  const auto dev = symbolic_development(cantor_spec(), 3);
  EXPECT_NEAR(dev.diameter, 1.0, 1e-12);
  const auto same = stretch(dev, 0.0);
  EXPECT_EQ(same.diameter, dev.diameter);
  EXPECT_EQ(gap_lengths(same), gap_lengths(dev));
}

TEST(Stretch, CantorHalf)
{
  for (std::size_t depth : {1, 2, 3, 5}) {
    const auto dev = stretch(symbolic_development(cantor_spec(), depth), 0.5);
    EXPECT_NEAR(dev.diameter, 1.5, 1e-12);
  }

  const auto base = symbolic_development(cantor_spec(), 2);
  const auto stretched = stretch(base, 0.5);
  ASSERT_EQ(stretched.leaves.size(), 4u);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_NEAR(stretched.leaves[k].length - base.leaves[k].length, 0.125, 1e-15);
  }
  ASSERT_EQ(stretched.gaps.size(), 3u);
  EXPECT_NEAR(stretched.gaps[0].length, 1.0 / 9.0, 1e-15);
  EXPECT_NEAR(stretched.gaps[1].length, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(stretched.gaps[2].length, 1.0 / 9.0, 1e-15);
  EXPECT_EQ(gap_lengths(stretched), gap_lengths(base));
}

TEST(Stretch, LayoutIsConsistent)
{
  const auto dev = stretch(symbolic_development({3, 1.0, 0.2}, 3), 0.75);
  // Leaves and gaps tile [0, diameter] without overlap.
  std::vector<std::pair<double, double>> pieces;
  for (const auto& l : dev.leaves) pieces.emplace_back(l.left, l.length);
  for (const auto& g : dev.gaps) pieces.emplace_back(g.left, g.length);
  std::sort(pieces.begin(), pieces.end());
  double pos = 0.0;
  for (auto [left, len] : pieces) {
    EXPECT_NEAR(left, pos, 1e-12);
    pos = left + len;
  }
  EXPECT_NEAR(pos, dev.diameter, 1e-12);
  EXPECT_NEAR(dev.diameter, width_series({3, 1.0, 0.2}, 0).total + 0.75, 1e-12);
}

TEST(Stretch, Errors)
{
  const auto dev = symbolic_development(cantor_spec(), 2);
  EXPECT_THROW(stretch(dev, -0.1), ValidationError);
  EXPECT_THROW(symbolic_development(cantor_square_spec(), 2), ValidationError);
  EXPECT_THROW(symbolic_development(cantor_spec(), 0), ValidationError);
}

TEST(ExistsDevelopment, Verdicts)
{
  const auto square = exists_development(cantor_square_spec());
  EXPECT_FALSE(square.exists);
  EXPECT_FALSE(square.minimal_diameter.has_value());

  const auto cantor = exists_development(cantor_spec());
  EXPECT_TRUE(cantor.exists);
  ASSERT_TRUE(cantor.minimal_diameter.has_value());
  EXPECT_NEAR(*cantor.minimal_diameter, 1.0, 1e-12);

  const auto boundary = exists_development({2, 1.0, 0.5});
  EXPECT_FALSE(boundary.exists);
  EXPECT_EQ(boundary.growth, 1.0);
  EXPECT_NE(boundary.witness.find("ratio = 1"), std::string::npos);
  const auto terms = width_series({2, 1.0, 0.5}, 4).terms;
  for (double t : terms) EXPECT_EQ(t, 1.0);
}
