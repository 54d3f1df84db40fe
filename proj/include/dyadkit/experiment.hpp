#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dyadkit/table.hpp"

namespace dyadkit {

enum class ParamKind { Integer, Real, Text, List, Flag };

struct ParamSpec {
  std::string key;
  ParamKind kind;
  std::string default_value;
  std::string help;
};

const std::vector<std::string>& subcommands();
// Throws ArgumentError for an unknown subcommand.
const std::vector<ParamSpec>& schema(const std::string& subcommand);

struct ExperimentConfig {
  std::string subcommand;
  std::map<std::string, std::string> params;
  std::uint64_t seed = 0;
  std::string out = "-";

  // key=value lines, sorted, including subcommand and seed.
  std::string to_text() const;
  // Accepts the key=value format or a flat JSON object.
  static ExperimentConfig from_text(const std::string& text);
  static ExperimentConfig from_file(const std::string& path);
};

// Schema check: known subcommand, known keys, parseable values; missing keys
// take their defaults.
ExperimentConfig resolve(const ExperimentConfig& config);

// FNV-1a over the resolved canonical text (output path excluded).
std::string config_hash(const ExperimentConfig& config);

ResultTable run(const ExperimentConfig& config);

std::string tool_version();

}  // namespace dyadkit
