#include "emplan/features.hpp"

#include <gtest/gtest.h>

#include <set>
#include <vector>

namespace emplan {
namespace {

TEST(OneHot, Encodes) {
  const FeatureMap map = FeatureMap::oneHot(3);
  EXPECT_EQ(map.dimension(), 3u);
  EXPECT_EQ(map.kind(), FeatureKind::OneHot);
  const FeatureVector s = map.encode(1);
  EXPECT_EQ(s, (FeatureVector(3) << 0, 1, 0).finished());
  EXPECT_EQ(map.collisions(), 0u);
}

TEST(OneHot, TerminalIsZero) {
  const FeatureMap map = FeatureMap::oneHot(4);
  EXPECT_TRUE(map.encode(kTerminalObservation).isZero(0.0));
  EXPECT_EQ(map.encode(kTerminalObservation).size(), 4);
}

TEST(OneHot, UnknownTokenThrows) {
  const FeatureMap map = FeatureMap::oneHot(3);
  EXPECT_THROW(map.encode(3), UsageError);
  EXPECT_THROW(map.encode(-2), UsageError);
  EXPECT_THROW(FeatureMap::oneHot(0), UsageError);
}

TEST(OneHot, UpdateIgnoresHistory) {
  const FeatureMap map = FeatureMap::oneHot(3);
  EXPECT_EQ(map.update(map.encode(0), Action{1}, 2), map.encode(2));
}

TEST(RandomBinary, ExactlyKActiveBits) {
  for (std::size_t k : {1, 3, 5, 14}) {
    const FeatureMap map = generateRandomBinaryTable(9, 14, k, RngSeed{k});
    EXPECT_EQ(map.dimension(), 14u);
    EXPECT_EQ(map.activeBits(), k);
    for (Observation o = 0; o < 9; ++o) {
      const FeatureVector& s = map.encode(o);
      EXPECT_EQ(s.sum(), static_cast<double>(k));
      EXPECT_EQ((s.array() * (1.0 - s.array())).abs().sum(), 0.0);  // entries are 0 or 1
    }
    EXPECT_TRUE(map.encode(kTerminalObservation).isZero(0.0));
  }
}

TEST(RandomBinary, InvalidKThrows) {
  EXPECT_THROW(generateRandomBinaryTable(9, 4, 5, RngSeed{0}), UsageError);
  EXPECT_THROW(generateRandomBinaryTable(9, 4, 0, RngSeed{0}), UsageError);
}

TEST(RandomBinary, SameSeedSameTable) {
  const FeatureMap a = generateRandomBinaryTable(9, 14, 5, RngSeed{3});
  const FeatureMap b = generateRandomBinaryTable(9, 14, 5, RngSeed{3});
  const FeatureMap c = generateRandomBinaryTable(9, 14, 5, RngSeed{4});
  bool differs = false;
  for (Observation o = 0; o < 9; ++o) {
    EXPECT_EQ(a.encode(o), b.encode(o));
    differs |= a.encode(o) != c.encode(o);
  }
  EXPECT_TRUE(differs);
}

TEST(RandomBinary, CollisionsCounted) {
  // d = k leaves a single possible code, so all n(n-1)/2 pairs collide.
  const FeatureMap full = generateRandomBinaryTable(5, 3, 3, RngSeed{0});
  EXPECT_EQ(full.collisions(), 10u);
  // Count pairs directly for a regular table.
  const FeatureMap map = generateRandomBinaryTable(9, 4, 2, RngSeed{1});
  std::size_t pairs = 0;
  for (Observation i = 0; i < 9; ++i) {
    for (Observation j = i + 1; j < 9; ++j) {
      pairs += map.encode(i) == map.encode(j);
    }
  }
  EXPECT_EQ(map.collisions(), pairs);
  EXPECT_GT(pairs, 0u);  // 9 codes from 6 possible subsets
}

TEST(RandomBinary, BitsSpreadUniformly) {
  // Each position is active with probability k/d.
  const std::size_t d = 10, k = 3, n = 3000;
  Rng rng(8);
  const FeatureMap map = FeatureMap::randomBinary(n, d, k, rng);
  FeatureVector counts = FeatureVector::Zero(d);
  for (Observation o = 0; o < static_cast<Observation>(n); ++o) {
    counts += map.encode(o);
  }
  const double p = static_cast<double>(k) / d;
  for (Eigen::Index i = 0; i < counts.size(); ++i) {
    EXPECT_NEAR(counts[i] / n, p, 4.0 * std::sqrt(p * (1 - p) / n));
  }
}

}  // namespace
}  // namespace emplan
