#pragma once

#include "emplan/common.hpp"
#include "emplan/environment.hpp"
#include "emplan/rng.hpp"

#include <cstddef>
#include <vector>

namespace emplan {

enum class FeatureKind { OneHot, RandomBinary };

/// Fixed state-update function: observation token -> feature vector.
/// Terminal observations map to the zero vector.
class FeatureMap {
 public:
  static FeatureMap oneHot(std::size_t numObservations);

  /// Each observation gets `k` distinct active bits out of `d`, drawn without
  /// replacement from `rng`.
  static FeatureMap randomBinary(std::size_t numObservations, std::size_t d, std::size_t k, Rng& rng);

  const FeatureVector& encode(Observation obs) const;

  /// Recursive form u(s_prev, a_prev, o). Both shipped environments emit
  /// Markov observations, so the previous state and action are unused.
  const FeatureVector& update(const FeatureVector& /*previous*/, Action /*previous*/,
                              Observation obs) const {
    return encode(obs);
  }

  FeatureKind kind() const { return kind_; }
  std::size_t dimension() const { return static_cast<std::size_t>(zero_.size()); }
  std::size_t numObservations() const { return codes_.size(); }
  std::size_t activeBits() const { return activeBits_; }

  /// Number of observation pairs sharing an identical code.
  std::size_t collisions() const { return collisions_; }

 private:
  FeatureMap(FeatureKind kind, std::vector<FeatureVector> codes, std::size_t d, std::size_t k);

  FeatureKind kind_;
  std::vector<FeatureVector> codes_;
  FeatureVector zero_;
  std::size_t activeBits_;
  std::size_t collisions_ = 0;
};

FeatureMap generateRandomBinaryTable(std::size_t numObservations, std::size_t d, std::size_t k,
                                     RngSeed seed);

}  // namespace emplan
