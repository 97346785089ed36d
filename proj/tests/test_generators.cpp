#include <nswlb/equilibria.hpp>
#include <nswlb/generators.hpp>
#include <nswlb/optima.hpp>

#include "support/builders.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace nswlb;
using build::lin;
using build::mono;

namespace {

void expectRel(double got, double want, double tol = 1e-9) { EXPECT_NEAR(got, want, tol * std::abs(want)) << got; }

}  // namespace

TEST(WeightedLB, TruncatedChainMatchesClosedForm) {
  for (int p : {1, 2})
    for (int m : {3, 5, 10, 20}) {
      const auto gen = genWeightedLB(m, 1, 1.0, 0.0, mono(p), mono(p));
      expectRel(gen.predictedRatio, std::pow(2.0, p * (m - 2.0) / (m - 1.0)));
      expectRel(measuredRatio(gen), gen.predictedRatio);
      EXPECT_TRUE(checkPne(gen)) << "m=" << m << " p=" << p;
    }
  EXPECT_GE(measuredRatio(genWeightedLB(20, 1, 1.0, 0.0, lin(), lin())), 1.92);
}

TEST(WeightedLB, GeneralParametersMatchPrediction) {
  for (double k : {1.0, 1.5, 3.0})
    for (double h : {0.0, 0.25, 0.7})
      for (int s : {1, 2}) {
        const auto gen = genWeightedLB(4, s, k, h, mono(2), lin(2.0));
        expectRel(measuredRatio(gen), gen.predictedRatio);
      }
}

TEST(WeightedLB, RestrictedProfilesArePneWhenSIsOne) {
  for (double h : {0.0, 0.5}) EXPECT_TRUE(checkPne(genWeightedLB(5, 1, 1.0, h, lin(), lin())));
}

TEST(WeightedLB, SymmetricVariantUsesGlobalIndices) {
  const auto gen = genWeightedLB(3, 2, 1.0, 0.0, lin(), lin(), WeightedVariant::symmetric);
  expectRel(measuredRatio(gen), gen.predictedRatio);
  for (const auto& pl : gen.game.players()) EXPECT_EQ(pl.strategies.size(), gen.game.resourceCount());
  const auto s = smallestPneS(3, 1.0, 0.0, lin(), lin(), 6);
  if (s) {
    EXPECT_TRUE(checkPne(genWeightedLB(3, *s, 1.0, 0.0, lin(), lin(), WeightedVariant::symmetric)));
  }
}

TEST(WeightedLB, Validation) {
  EXPECT_THROW(genWeightedLB(2, 1, 1.0, 0.0, lin(), lin()), ValidationError);
  EXPECT_THROW(genWeightedLB(3, 0, 1.0, 0.0, lin(), lin()), ValidationError);
  EXPECT_THROW(genWeightedLB(3, 1, 0.5, 0.0, lin(), lin()), ValidationError);
  EXPECT_THROW(genWeightedLB(3, 1, 1.0, 1.0, lin(), lin()), ValidationError);
  EXPECT_THROW(genWeightedLB(40, 2, 1.0, 0.0, lin(), lin()), InstanceTooLarge);
}

TEST(IdenticalResources, Examples) {
  for (int m : {3, 8}) {
    const auto gen = genIdenticalResourcesLB(m);
    expectRel(measuredRatio(gen), gen.predictedRatio);
    EXPECT_TRUE(checkPne(gen));
    // all resources but the last group carry the same latency
    const auto& rs = gen.game.resources();
    for (const auto& r : rs) {
      if (r.id.rfind("R" + std::to_string(m) + "_", 0) == 0) continue;
      EXPECT_DOUBLE_EQ(r.latency(1.7), rs.front().latency(1.7)) << r.id;
    }
  }
  EXPECT_GE(measuredRatio(genIdenticalResourcesLB(8)), 1.8);
}

TEST(UnweightedLB, Examples) {
  const auto small = genUnweightedLB(2, 1, 1, lin());
  EXPECT_EQ(small.game.playerCount(), 2u);
  EXPECT_EQ(small.game.resourceCount(), 3u);
  expectRel(measuredRatio(small), std::sqrt(2.0));
  for (int p : {1, 2}) {
    const auto gen = genUnweightedLB(40, 1, 1, mono(p));
    expectRel(measuredRatio(gen), std::pow(2.0, p * 39.0 / 40.0));
    EXPECT_TRUE(checkPne(gen));
  }
}

TEST(UnweightedLB, GeneralParameters) {
  for (int k : {1, 2, 3})
    for (int o = 1; o <= k; ++o) {
      const auto gen = genUnweightedLB(3, k, o, mono(2));
      expectRel(measuredRatio(gen), gen.predictedRatio);
      EXPECT_TRUE(checkPne(gen));
    }
}

TEST(UnweightedLB, WorstEquilibriumAtTwoLevels) {
  const auto gen = genUnweightedLB(2, 1, 1, lin());
  const auto npoa = empiricalNpoa(gen.game);
  EXPECT_NEAR(npoa.ratio, measuredRatio(gen), 1e-9);
  EXPECT_NEAR(logNsw(gen.game, npoa.worstPne).value, logNsw(gen.game, gen.equilibrium).value, 1e-12);
}

TEST(Generators, EmpiricalNpoaAtLeastPrediction) {
  const GeneratedGame cases[] = {genWeightedLB(3, 1, 1.0, 0.0, lin(), lin()), genUnweightedLB(3, 1, 1, lin()),
                                 genUnweightedLB(2, 2, 1, mono(2)), genLinearCG(4, 0.4)};
  for (const auto& gen : cases) EXPECT_GE(empiricalNpoa(gen.game).ratio, gen.predictedRatio - 1e-9);
}

TEST(LinearCG, Examples) {
  struct Case {
    int n;
    double eps;
    int m;
  };
  for (const auto& c : {Case{4, 0.4, 2}, Case{10, 0.3, 3}, Case{100, 0.2, 20}}) {
    const auto gen = genLinearCG(c.n, c.eps);
    const double want = std::pow(c.m + 1.0, (c.n - c.m) / static_cast<double>(c.n));
    expectRel(gen.predictedRatio, want);
    expectRel(measuredRatio(gen), want);
    EXPECT_TRUE(checkPne(gen));
  }
  EXPECT_NEAR(measuredRatio(genLinearCG(4, 0.4)), std::sqrt(3.0), 1e-9);
  EXPECT_THROW(genLinearCG(1, 0.3), ValidationError);
  EXPECT_THROW(genLinearCG(10, 0.5), ValidationError);
}

TEST(LinearCG, MatchesOracleOnSmallInstance) {
  const auto gen = genLinearCG(4, 0.4);
  EXPECT_TRUE(oracle::isPne(gen.game, gen.equilibrium));
  expectRel(oracle::nsw(gen.game, gen.equilibrium) / oracle::nsw(gen.game, gen.optCandidate), std::sqrt(3.0));
}

TEST(NonAtomicGen, Examples) {
  expectRel(measuredRatio(genNonAtomic(2.0, 1.0, lin())), std::sqrt(2.0));
  for (int p : {1, 2}) expectRel(measuredRatio(genNonAtomic(std::exp(1.0), 1.0, mono(p))), std::exp(p / std::exp(1.0)));
  EXPECT_DOUBLE_EQ(measuredRatio(genNonAtomic(3.0, 3.0, lin())), 1.0);
  EXPECT_THROW(genNonAtomic(1.0, 2.0, lin()), ValidationError);
}

TEST(OnlineGreedyLB, Examples) {
  for (int m = 3; m <= 10; ++m) {
    const auto gen = genOnlineGreedyLB(m, 1.0, 0.0, lin(), lin());
    expectRel(measuredRatio(gen), gen.predictedRatio);
    EXPECT_EQ(greedyAssign(gen.instance).profile, gen.greedy) << m;
  }
  EXPECT_GE(measuredRatio(genOnlineGreedyLB(10, 1.0, 0.0, lin(), lin())), 3.2);
  const auto mixed = genOnlineGreedyLB(4, 2.0, 0.5, mono(2), lin());
  expectRel(measuredRatio(mixed), mixed.predictedRatio);
  EXPECT_EQ(greedyAssign(mixed.instance).profile, mixed.greedy);
}

TEST(OnlineUniversal, Examples) {
  const auto zero = genOnlineUniversal(0, 1);
  EXPECT_EQ(zero.instance.game.playerCount(), 0u);
  EXPECT_DOUBLE_EQ(zero.predictedRatio, 1.0);
  const auto two = genOnlineUniversal(2, 1);
  EXPECT_EQ(two.instance.game.playerCount(), 3u);
  EXPECT_EQ(greedyAssign(two.instance).profile, two.greedy);
  expectRel(measuredRatio(two), std::pow(3.0, 0.75) / std::sqrt(2.0));
  for (int m = 1; m <= 5; ++m)
    for (int p : {1, 2}) {
      const auto gen = genOnlineUniversal(m, p);
      EXPECT_EQ(greedyAssign(gen.instance).profile, gen.greedy);
      expectRel(measuredRatio(gen), gen.predictedRatio);
      EXPECT_LE(gen.predictedRatio, std::pow(4.0, p));
    }
  EXPECT_THROW(genOnlineUniversal(17, 1), ValidationError);
}

TEST(Generators, ProvenanceIsRecorded) {
  const auto gen = genUnweightedLB(3, 2, 1, lin());
  EXPECT_EQ(gen.provenance.construction, "unweightedLB");
  EXPECT_EQ(gen.provenance.params.front(), (std::pair<std::string, std::string>{"m", "3"}));
}
