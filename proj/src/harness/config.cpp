#include "emplan/harness/config.hpp"

#include "emplan/harness/curve.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace emplan::harness {

namespace {

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) {
    return {};
  }
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

std::string formatReal(double x) { return formatNumber(x); }

std::size_t parseCount(std::string_view text, const std::string& key) {
  std::size_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("'" + key + "' expects a non-negative integer, got '" + std::string(text) + "'");
  }
  return value;
}

bool parseBool(std::string_view text, const std::string& key) {
  if (text == "true" || text == "1" || text == "yes") {
    return true;
  }
  if (text == "false" || text == "0" || text == "no") {
    return false;
  }
  throw ConfigError("'" + key + "' expects true or false, got '" + std::string(text) + "'");
}

PlanningCadence parseCadence(std::string_view text, const std::string& key) {
  if (text == "step") {
    return PlanningCadence::PerStep;
  }
  if (text == "episode") {
    return PlanningCadence::PerEpisode;
  }
  throw ConfigError("'" + key + "' expects step or episode, got '" + std::string(text) + "'");
}

double parseRealKey(std::string_view text, const std::string& key) {
  try {
    return parseReal(text);
  } catch (const ConfigError&) {
    throw ConfigError("'" + key + "' expects a real number, got '" + std::string(text) + "'");
  }
}

using Setter = std::function<void(const std::string& value, const std::string& key)>;

std::map<std::string, Setter> agentSetters(AgentConfig& c) {
  return {
      {"kind", [&c](const std::string& v, const std::string&) {
         try {
           c.kind = parseAgentKind(v);
         } catch (const UsageError& e) {
           throw ConfigError(e.what());
         }
       }},
      {"gamma", [&c](const std::string& v, const std::string& k) { c.gamma = parseRealKey(v, k); }},
      {"epsilon", [&c](const std::string& v, const std::string& k) { c.epsilon = parseRealKey(v, k); }},
      {"value_step_size", [&c](const std::string& v, const std::string& k) { c.valueStepSize = parseRealKey(v, k); }},
      {"action_value_step_size",
       [&c](const std::string& v, const std::string& k) { c.actionValueStepSize = parseRealKey(v, k); }},
      {"policy_step_size", [&c](const std::string& v, const std::string& k) { c.policyStepSize = parseRealKey(v, k); }},
      {"model_step_size", [&c](const std::string& v, const std::string& k) { c.modelStepSize = parseRealKey(v, k); }},
      {"planning_steps", [&c](const std::string& v, const std::string& k) { c.planningSteps = parseCount(v, k); }},
      {"buffer_capacity", [&c](const std::string& v, const std::string& k) { c.bufferCapacity = parseCount(v, k); }},
      {"buffer_phase_reset",
       [&c](const std::string& v, const std::string& k) { c.bufferPhaseReset = parseBool(v, k); }},
      {"model_batch", [&c](const std::string& v, const std::string& k) { c.modelBatch = parseCount(v, k); }},
      {"planning_cadence", [&c](const std::string& v, const std::string& k) { c.cadence = parseCadence(v, k); }},
      {"model_batch_cadence",
       [&c](const std::string& v, const std::string& k) { c.modelBatchCadence = parseCadence(v, k); }},
      {"alg2_literal_pseudocode",
       [&c](const std::string& v, const std::string& k) { c.alg2LiteralPseudocode = parseBool(v, k); }},
      {"cache_all_actions", [&c](const std::string& v, const std::string& k) { c.cacheAllActions = parseBool(v, k); }},
  };
}

std::map<std::string, Setter> experimentSetters(ExperimentConfig& c) {
  return {
      {"name", [&c](const std::string& v, const std::string&) { c.name = v; }},
      {"runs", [&c](const std::string& v, const std::string& k) { c.runs = parseCount(v, k); }},
      {"episodes", [&c](const std::string& v, const std::string& k) { c.episodes = parseCount(v, k); }},
      {"bin_size", [&c](const std::string& v, const std::string& k) { c.binSize = parseCount(v, k); }},
      {"seed_base", [&c](const std::string& v, const std::string& k) { c.seedBase = parseCount(v, k); }},
      {"output", [&c](const std::string& v, const std::string&) { c.output = v; }},
      {"exclude_diverged", [&c](const std::string& v, const std::string& k) { c.excludeDiverged = parseBool(v, k); }},
  };
}

std::map<std::string, Setter> envSetters(EnvConfig& c) {
  return {
      {"env",
       [&c](const std::string& v, const std::string&) {
         if (v == "counterexample") {
           c.kind = EnvKind::Counterexample;
         } else if (v == "corridor") {
           c.kind = EnvKind::Corridor;
         } else {
           throw ConfigError("unknown env '" + v + "'");
         }
       }},
      {"slip_prob", [&c](const std::string& v, const std::string& k) { c.corridor.slipProb = parseRealKey(v, k); }},
      {"phase_length", [&c](const std::string& v, const std::string& k) { c.corridor.phaseLength = parseCount(v, k); }},
      {"goal_side",
       [&c](const std::string& v, const std::string&) {
         if (v == "left") {
           c.corridor.goalSide = GoalSide::Left;
         } else if (v == "right") {
           c.corridor.goalSide = GoalSide::Right;
         } else {
           throw ConfigError("goal_side expects left or right");
         }
       }},
      {"counterexample_b_reward",
       [&c](const std::string& v, const std::string& k) { c.counterexampleBReward = parseRealKey(v, k); }},
      {"step_cap", [&c](const std::string& v, const std::string& k) { c.stepCap = parseCount(v, k); }},
  };
}

std::map<std::string, Setter> featureSetters(FeatureConfig& c) {
  return {
      {"features",
       [&c](const std::string& v, const std::string&) {
         if (v == "onehot") {
           c.kind = FeatureKind::OneHot;
         } else if (v == "random_binary") {
           c.kind = FeatureKind::RandomBinary;
         } else {
           throw ConfigError("features expects onehot or random_binary");
         }
       }},
      {"feature_d", [&c](const std::string& v, const std::string& k) { c.d = parseCount(v, k); }},
      {"feature_k", [&c](const std::string& v, const std::string& k) { c.k = parseCount(v, k); }},
  };
}

void applySection(const ConfigDocument::Section& section, std::map<std::string, Setter> setters) {
  for (const auto& entry : section.entries) {
    const auto it = setters.find(entry.key);
    if (it == setters.end()) {
      throw ConfigError("line " + std::to_string(entry.line) + ": unknown key '" + entry.key + "' in [" +
                        section.name + "]");
    }
    it->second(entry.value, entry.key);
  }
}

bool isAgentKey(const std::string& key) {
  AgentConfig scratch;
  return agentSetters(scratch).count(key) > 0;
}

std::string sectionForBareKey(const std::string& key) {
  ExperimentConfig e;
  if (experimentSetters(e).count(key)) {
    return "experiment";
  }
  if (envSetters(e.env).count(key)) {
    return "env";
  }
  if (featureSetters(e.features).count(key)) {
    return "features";
  }
  return {};
}

const char* envName(EnvKind kind) { return kind == EnvKind::Counterexample ? "counterexample" : "corridor"; }

}  // namespace

double parseReal(std::string_view text) {
  const std::string s = trim(text);
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    const double num = parseReal(s.substr(0, slash));
    const double den = parseReal(s.substr(slash + 1));
    if (den == 0.0) {
      throw ConfigError("division by zero in '" + s + "'");
    }
    return num / den;
  }
  double value = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (s.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ConfigError("not a real number: '" + s + "'");
  }
  return value;
}

ConfigDocument ConfigDocument::parse(std::string_view text) {
  ConfigDocument doc;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineNo = 0;
  while (std::getline(in, raw)) {
    ++lineNo;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(lineNo) + ": malformed section header");
      }
      doc.sections.push_back({trim(line.substr(1, line.size() - 2)), {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineNo) + ": expected key = value");
    }
    if (doc.sections.empty()) {
      throw ConfigError("line " + std::to_string(lineNo) + ": key outside of any section");
    }
    auto& entries = doc.sections.back().entries;
    const std::string key = trim(line.substr(0, eq));
    if (std::any_of(entries.begin(), entries.end(), [&](const Entry& e) { return e.key == key; })) {
      throw ConfigError("line " + std::to_string(lineNo) + ": duplicate key '" + key + "'");
    }
    entries.push_back({key, trim(line.substr(eq + 1)), lineNo});
  }
  return doc;
}

void ConfigDocument::set(const std::string& section, const std::string& key, const std::string& value) {
  auto sec = std::find_if(sections.begin(), sections.end(), [&](const Section& s) { return s.name == section; });
  if (sec == sections.end()) {
    sections.push_back({section, {}});
    sec = sections.end() - 1;
  }
  auto entry = std::find_if(sec->entries.begin(), sec->entries.end(), [&](const Entry& e) { return e.key == key; });
  if (entry == sec->entries.end()) {
    sec->entries.push_back({key, value, 0});
  } else {
    entry->value = value;
  }
}

void applyOverride(ConfigDocument& doc, const std::string& key, const std::string& value) {
  const auto dot = key.rfind('.');
  if (dot != std::string::npos) {
    doc.set(key.substr(0, dot), key.substr(dot + 1), value);
    return;
  }
  if (isAgentKey(key)) {
    bool any = false;
    for (auto& section : doc.sections) {
      if (section.name == "agent" || section.name.rfind("agent.", 0) == 0) {
        doc.set(section.name, key, value);
        any = true;
      }
    }
    if (!any) {
      doc.set("agent", key, value);
    }
    return;
  }
  const std::string section = sectionForBareKey(key);
  if (section.empty()) {
    throw ConfigError("unknown override key '" + key + "'");
  }
  doc.set(section, key, value);
}

ExperimentConfig buildConfig(const ConfigDocument& doc) {
  ExperimentConfig cfg;
  AgentConfig defaults;
  bool defaultsHaveKind = false;
  std::vector<const ConfigDocument::Section*> agentSections;

  for (const auto& section : doc.sections) {
    if (section.name == "experiment") {
      applySection(section, experimentSetters(cfg));
    } else if (section.name == "env") {
      applySection(section, envSetters(cfg.env));
    } else if (section.name == "features") {
      applySection(section, featureSetters(cfg.features));
    } else if (section.name == "agent") {
      applySection(section, agentSetters(defaults));
      defaultsHaveKind = defaultsHaveKind || std::any_of(section.entries.begin(), section.entries.end(),
                                                         [](const auto& e) { return e.key == "kind"; });
    } else if (section.name.rfind("agent.", 0) == 0 && section.name.size() > 6) {
      agentSections.push_back(&section);
    } else {
      throw ConfigError("unknown section [" + section.name + "]");
    }
  }

  for (const auto* section : agentSections) {
    AgentSpec spec{section->name.substr(6), defaults};
    const bool hasKind = std::any_of(section->entries.begin(), section->entries.end(),
                                     [](const auto& e) { return e.key == "kind"; });
    if (!hasKind && !defaultsHaveKind) {
      try {
        spec.config.kind = parseAgentKind(spec.label);
      } catch (const UsageError&) {
        throw ConfigError("[" + section->name + "] needs a kind");
      }
    }
    applySection(*section, agentSetters(spec.config));
    cfg.agents.push_back(std::move(spec));
  }
  if (agentSections.empty() && defaultsHaveKind) {
    cfg.agents.push_back({std::string(toString(defaults.kind)), defaults});
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig parseConfig(std::string_view text) { return buildConfig(ConfigDocument::parse(text)); }

ExperimentConfig loadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parseConfig(buffer.str());
}

void ExperimentConfig::validate() const {
  if (runs == 0) {
    throw ConfigError("runs must be at least 1");
  }
  if (episodes == 0) {
    throw ConfigError("episodes must be at least 1");
  }
  if (binSize == 0 || binSize > episodes) {
    throw ConfigError("bin_size must lie in [1, episodes]");
  }
  if (agents.empty()) {
    throw ConfigError("config defines no agents");
  }
  for (std::size_t i = 0; i < agents.size(); ++i) {
    for (std::size_t j = i + 1; j < agents.size(); ++j) {
      if (agents[i].label == agents[j].label) {
        throw ConfigError("duplicate agent label '" + agents[i].label + "'");
      }
    }
    try {
      agents[i].config.validate();
    } catch (const UsageError& e) {
      throw ConfigError("agent '" + agents[i].label + "': " + e.what());
    }
  }
  if (features.kind == FeatureKind::RandomBinary && (features.k == 0 || features.k > features.d)) {
    throw ConfigError("random_binary features need 0 < feature_k <= feature_d");
  }
  if (!(env.corridor.slipProb >= 0.0 && env.corridor.slipProb <= 1.0)) {
    throw ConfigError("slip_prob must lie in [0, 1]");
  }
  if (env.stepCap == 0) {
    throw ConfigError("step_cap must be positive");
  }
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream out;
  out << "experiment.name = " << name << '\n'
      << "experiment.runs = " << runs << '\n'
      << "experiment.episodes = " << episodes << '\n'
      << "experiment.bin_size = " << binSize << '\n'
      << "experiment.seed_base = " << seedBase << '\n'
      << "experiment.exclude_diverged = " << (excludeDiverged ? "true" : "false") << '\n'
      << "env.env = " << envName(env.kind) << '\n'
      << "env.step_cap = " << env.stepCap << '\n';
  if (env.kind == EnvKind::Corridor) {
    out << "env.slip_prob = " << formatReal(env.corridor.slipProb) << '\n'
        << "env.phase_length = " << env.corridor.phaseLength << '\n'
        << "env.goal_side = " << (env.corridor.goalSide == GoalSide::Left ? "left" : "right") << '\n'
        << "env.step_reward = " << formatReal(env.corridor.stepReward) << '\n'
        << "env.goal_reward = " << formatReal(env.corridor.goalReward) << '\n'
        << "env.other_terminal_reward = " << formatReal(env.corridor.otherTerminalReward) << '\n';
  } else {
    out << "env.counterexample_b_reward = " << formatReal(env.counterexampleBReward) << '\n';
  }
  out << "features.features = " << (features.kind == FeatureKind::OneHot ? "onehot" : "random_binary") << '\n';
  if (features.kind == FeatureKind::RandomBinary) {
    out << "features.feature_d = " << features.d << '\n' << "features.feature_k = " << features.k << '\n';
  }
  for (const auto& spec : agents) {
    const std::string p = "agent." + spec.label + ".";
    const AgentConfig& c = spec.config;
    out << p << "kind = " << toString(c.kind) << '\n'
        << p << "gamma = " << formatReal(c.gamma) << '\n'
        << p << "epsilon = " << formatReal(c.epsilon) << '\n'
        << p << "value_step_size = " << formatReal(c.valueStepSize) << '\n'
        << p << "action_value_step_size = " << formatReal(c.actionValueStepSize) << '\n'
        << p << "policy_step_size = " << formatReal(c.policyStepSize) << '\n'
        << p << "model_step_size = " << formatReal(c.modelStepSize) << '\n'
        << p << "planning_steps = " << c.planningSteps << '\n'
        << p << "planning_cadence = " << (c.cadence == PlanningCadence::PerStep ? "step" : "episode") << '\n'
        << p << "buffer_capacity = " << c.bufferCapacity << '\n'
        << p << "buffer_phase_reset = " << (c.bufferPhaseReset ? "true" : "false") << '\n'
        << p << "model_batch = " << c.modelBatch << '\n'
        << p << "model_batch_cadence = " << (c.modelBatchCadence == PlanningCadence::PerStep ? "step" : "episode")
        << '\n'
        << p << "alg2_literal_pseudocode = " << (c.alg2LiteralPseudocode ? "true" : "false") << '\n'
        << p << "cache_all_actions = " << (c.cacheAllActions ? "true" : "false") << '\n';
  }
  return out.str();
}

}  // namespace emplan::harness
