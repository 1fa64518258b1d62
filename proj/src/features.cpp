#include "emplan/features.hpp"

#include <numeric>
#include <string>
#include <utility>

namespace emplan {

FeatureMap::FeatureMap(FeatureKind kind, std::vector<FeatureVector> codes, std::size_t d,
                       std::size_t k)
    : kind_(kind), codes_(std::move(codes)), zero_(FeatureVector::Zero(static_cast<Eigen::Index>(d))),
      activeBits_(k) {
  for (std::size_t i = 0; i < codes_.size(); ++i) {
    for (std::size_t j = i + 1; j < codes_.size(); ++j) {
      if (codes_[i] == codes_[j]) {
        ++collisions_;
      }
    }
  }
}

FeatureMap FeatureMap::oneHot(std::size_t numObservations) {
  if (numObservations == 0) {
    throw UsageError("one-hot map needs at least one observation");
  }
  std::vector<FeatureVector> codes;
  codes.reserve(numObservations);
  for (std::size_t i = 0; i < numObservations; ++i) {
    codes.push_back(FeatureVector::Unit(static_cast<Eigen::Index>(numObservations),
                                        static_cast<Eigen::Index>(i)));
  }
  return FeatureMap(FeatureKind::OneHot, std::move(codes), numObservations, 1);
}

FeatureMap FeatureMap::randomBinary(std::size_t numObservations, std::size_t d, std::size_t k,
                                    Rng& rng) {
  if (k == 0 || k > d) {
    throw UsageError("random binary features need 0 < k <= d (k=" + std::to_string(k) +
                     ", d=" + std::to_string(d) + ")");
  }
  std::vector<FeatureVector> codes;
  codes.reserve(numObservations);
  std::vector<std::size_t> positions(d);
  for (std::size_t i = 0; i < numObservations; ++i) {
    std::iota(positions.begin(), positions.end(), std::size_t{0});
    FeatureVector code = FeatureVector::Zero(static_cast<Eigen::Index>(d));
    // Partial Fisher-Yates: the first k slots are a uniform k-subset.
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t pick = j + rng.index(d - j);
      std::swap(positions[j], positions[pick]);
      code[static_cast<Eigen::Index>(positions[j])] = 1.0;
    }
    codes.push_back(std::move(code));
  }
  return FeatureMap(FeatureKind::RandomBinary, std::move(codes), d, k);
}

const FeatureVector& FeatureMap::encode(Observation obs) const {
  if (obs == kTerminalObservation) {
    return zero_;
  }
  if (obs < 0 || static_cast<std::size_t>(obs) >= codes_.size()) {
    throw UsageError("unknown observation token " + std::to_string(obs));
  }
  return codes_[static_cast<std::size_t>(obs)];
}

FeatureMap generateRandomBinaryTable(std::size_t numObservations, std::size_t d, std::size_t k,
                                     RngSeed seed) {
  Rng rng = Rng::forStream(seed, Stream::Features);
  return FeatureMap::randomBinary(numObservations, d, k, rng);
}

}  // namespace emplan
