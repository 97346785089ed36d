#include <nswlb/bounds.hpp>
#include <nswlb/generators.hpp>
#include <nswlb/nonatomic.hpp>

#include "support/builders.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace nswlb;
using build::lin;
using build::mono;

namespace {

NonAtomicGame single(const std::vector<LatencyFunction>& lats, double rate) {
  std::vector<Resource> rs;
  std::vector<std::size_t> all;
  for (std::size_t j = 0; j < lats.size(); ++j) {
    rs.push_back({"r" + std::to_string(j), lats[j]});
    all.push_back(j);
  }
  return NonAtomicGame(std::move(rs), {{rate, all}});
}

NonAtomicGame randomSymmetric(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> m(1, 3), deg(1, 3);
  std::uniform_real_distribution<double> c(0.1, 2.0), rate(0.5, 5.0);
  std::vector<LatencyFunction> lats;
  const int count = m(rng);
  for (int j = 0; j < count; ++j) {
    std::vector<double> coeffs(static_cast<std::size_t>(deg(rng)) + 1, 0.0);
    for (auto& x : coeffs) x = c(rng);
    lats.push_back(LatencyFunction::polynomial(coeffs));
  }
  return single(lats, rate(rng));
}

}  // namespace

TEST(Wardrop, Examples) {
  const auto one = single({lin()}, 2.0);
  EXPECT_TRUE(wardropCheck(one, {{{2.0}}}));
  const auto two = single({lin(), lin()}, 2.0);
  EXPECT_TRUE(wardropCheck(two, {{{1.0, 1.0}}}));
  EXPECT_FALSE(wardropCheck(two, {{{2.0, 0.0}}}));
  EXPECT_NEAR(wardropGap(two, {{{2.0, 0.0}}}, 1e-6), 2.0, 1e-15);
}

TEST(Waterfill, Examples) {
  const auto a = symmetricWaterfill(single({lin(), lin()}, 2.0));
  EXPECT_NEAR(a.share[0][0], 1.0, 1e-9);
  EXPECT_NEAR(a.share[0][1], 1.0, 1e-9);
  const auto b = symmetricWaterfill(single({lin(), lin(2)}, 3.0));
  EXPECT_NEAR(b.share[0][0], 2.0, 1e-9);
  EXPECT_NEAR(b.share[0][1], 1.0, 1e-9);
  const auto c = symmetricWaterfill(single({mono(2)}, 4.0));
  EXPECT_DOUBLE_EQ(c.share[0][0], 4.0);
}

TEST(Waterfill, HandlesConstantLatencies) {
  const auto gen = genNonAtomic(2.0, 1.0, lin());
  const auto flow = symmetricWaterfill(gen.game);
  EXPECT_TRUE(wardropCheck(gen.game, flow));
  const auto flat = symmetricWaterfill(single({LatencyFunction::constant(1.0), LatencyFunction::constant(1.0)}, 3.0));
  EXPECT_NEAR(flat.share[0][0] + flat.share[0][1], 3.0, 1e-12);
}

TEST(Waterfill, RejectsMultipleTypes) {
  NonAtomicGame g({{"a", lin()}, {"b", lin()}}, {{1.0, {0}}, {1.0, {1}}});
  EXPECT_THROW(symmetricWaterfill(g), ValidationError);
}

TEST(PotentialMinimize, Examples) {
  const auto gen = genNonAtomic(std::exp(1.0), 1.0, lin());
  const auto eq = potentialMinimize(gen.game);
  EXPECT_DOUBLE_EQ(eq.share[0][0], std::exp(1.0));
  EXPECT_DOUBLE_EQ(eq.share[0][1], 0.0);
  NonAtomicGame g({{"a", lin()}, {"b", lin()}}, {{2.0, {1}}, {1.0, {0, 1}}});
  const auto flow = potentialMinimize(g);
  EXPECT_DOUBLE_EQ(flow.share[0][0], 2.0);
  EXPECT_TRUE(wardropCheck(g, flow));
  EXPECT_NEAR(flow.share[1][0], 1.0, 1e-6);
}

TEST(PotentialMinimize, AgreesWithWaterfill) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    const auto game = randomSymmetric(rng);
    const auto a = symmetricWaterfill(game);
    const auto b = potentialMinimize(game);
    double tv = 0.0;
    for (std::size_t j = 0; j < a.share[0].size(); ++j) tv += std::abs(a.share[0][j] - b.share[0][j]);
    EXPECT_LE(0.5 * tv, 1e-4);
    double sum = 0.0;
    for (double x : a.share[0]) sum += x;
    EXPECT_NEAR(sum, game.types()[0].rate, 1e-9 * game.types()[0].rate);
    // used resources share the same cost
    const auto load = flowLoads(game, b);
    double lo = INFINITY, hi = 0.0;
    for (std::size_t j = 0; j < load.size(); ++j)
      if (b.share[0][j] > 1e-6 * game.types()[0].rate) {
        lo = std::min(lo, game.resources()[j].latency(load[j]));
        hi = std::max(hi, game.resources()[j].latency(load[j]));
      }
    EXPECT_LE(hi - lo, 2e-6);
  }
}

TEST(PotentialMinimize, FrankWolfeReachesLooseTolerance) {
  const auto game = single({lin(), lin(2), mono(2)}, 3.0);
  const auto flow = potentialMinimize(game, 200'000, 1e-3, FlowMethod::frankWolfe);
  EXPECT_TRUE(wardropCheck(game, flow, 1e-3));
}

TEST(PotentialMinimize, ReportsNonConvergence) {
  const auto game = single({lin(), lin(2), mono(2)}, 3.0);
  EXPECT_THROW(potentialMinimize(game, 3, 1e-12, FlowMethod::frankWolfe), DidNotConverge);
}

TEST(NonatomicRatio, Examples) {
  const auto gen = genNonAtomic(2.0, 1.0, lin());
  EXPECT_DOUBLE_EQ(nonatomicRatio(gen.game, gen.equilibrium, gen.equilibrium), 1.0);
  EXPECT_NEAR(nonatomicRatio(gen.game, gen.equilibrium, gen.optCandidate), std::sqrt(2.0), 1e-12);
  for (int p : {1, 2}) {
    const auto e = genNonAtomic(std::exp(1.0), 1.0, mono(p));
    EXPECT_NEAR(nonatomicRatio(e.game, potentialMinimize(e.game), e.optCandidate), std::exp(p / std::exp(1.0)), 1e-9);
  }
}

TEST(NonatomicRatio, RandomPolynomialsStayBelowCeiling) {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 100; ++trial) {
    const auto game = randomSymmetric(rng);
    int p = 0;
    for (const auto& r : game.resources()) p = std::max(p, r.latency.degree());
    const auto eq = potentialMinimize(game);
    const auto opt = gridOptimumFlow(game);
    EXPECT_LE(logNswFlow(game, opt).value, logNswFlow(game, eq).value + 1e-9);
    EXPECT_LE(nonatomicRatio(game, eq, opt), polyBounds(p).nonatomicNpoa + 1e-3);
  }
}

TEST(GridOptimum, FindsClosedFormOptimum) {
  // rate e on x versus constant e: optimum puts 1 on the first resource
  const auto gen = genNonAtomic(std::exp(1.0), 1.0, lin());
  const auto opt = gridOptimumFlow(gen.game);
  EXPECT_NEAR(opt.share[0][0], 1.0, 1e-6);
}
