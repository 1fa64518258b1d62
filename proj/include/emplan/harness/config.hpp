#pragma once

#include "emplan/agents.hpp"
#include "emplan/envs.hpp"
#include "emplan/features.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace emplan::harness {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class EnvKind { Counterexample, Corridor };

struct EnvConfig {
  EnvKind kind = EnvKind::Corridor;
  CorridorParams corridor;
  double counterexampleBReward = CounterexampleMdp::kDefaultBReward;
  std::size_t stepCap = kDefaultStepCap;
};

struct FeatureConfig {
  FeatureKind kind = FeatureKind::OneHot;
  std::size_t d = 14;
  std::size_t k = 5;
};

struct AgentSpec {
  std::string label;
  AgentConfig config;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::size_t runs = 1;
  std::size_t episodes = 1000;
  std::size_t binSize = 50;
  std::uint64_t seedBase = 0;
  std::filesystem::path output = "out";
  bool excludeDiverged = false;
  EnvConfig env;
  FeatureConfig features;
  std::vector<AgentSpec> agents;

  /// Every resolved parameter, one `section.key = value` per line, in a fixed
  /// order. Two configs with the same canonical text produce the same runs.
  std::string canonical() const;

  void validate() const;
};

/// Raw `[section]` / `key = value` text, order preserved, `#` comments.
struct ConfigDocument {
  struct Entry {
    std::string key;
    std::string value;
    std::size_t line;
  };
  struct Section {
    std::string name;
    std::vector<Entry> entries;
  };
  std::vector<Section> sections;

  static ConfigDocument parse(std::string_view text);

  /// Sets `key` in `section`, creating either if absent.
  void set(const std::string& section, const std::string& key, const std::string& value);
};

/// Builds a typed config. Unknown sections or keys are errors.
ExperimentConfig buildConfig(const ConfigDocument& doc);
ExperimentConfig parseConfig(std::string_view text);
ExperimentConfig loadConfig(const std::filesystem::path& path);

/// Applies `key=value` to a document. `key` is `section.key`
/// (e.g. `env.slip_prob`, `agent.alg1.value_step_size`) or a bare key; a bare
/// agent key is set on every agent section.
void applyOverride(ConfigDocument& doc, const std::string& key, const std::string& value);

/// Parses reals, including simple fractions such as `1/3`.
double parseReal(std::string_view text);

}  // namespace emplan::harness
