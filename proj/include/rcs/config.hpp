#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "rcs/channel.hpp"
#include "rcs/circuit.hpp"

namespace rcs {

// Which bitstrings (or patterns) a run reports on. Explicit lists may mix
// full bitstrings, marginal patterns ("0*1*") and conditional patterns
// ("0[1]**"); each target picks the entries it understands.
struct BitstringSelector {
  enum class Kind { list, all, hamming_ge_half };
  Kind kind = Kind::all;
  std::vector<std::string> items;
};

// Noise parameters are fixed per run; only gates are resampled.
struct ExperimentConfig {
  int n = 4;
  int depth = 4;
  ChannelSpec channel;
  PlacementMode placement = PlacementMode::after_every_gate_with_final_layer;
  std::vector<Rotation> final_rotations;
  std::uint64_t samples = 1000;
  std::uint64_t seed = 0;
  std::vector<std::string> targets{"px"};
  BitstringSelector bitstrings;
  double alpha = 1.0;
  int workers = 1;
  // Optional keys beyond the core schema.
  Layout layout = Layout::brickwork;
  double margin = 3.0;
};

inline constexpr std::uint64_t kMinSamples = 100;

std::vector<std::string> known_targets();

ExperimentConfig config_from_json(const nlohmann::json& j);
// Worker count is left out when include_workers is false, which is what
// the run id hashes.
nlohmann::json config_to_json(const ExperimentConfig& cfg, bool include_workers = true);
void validate_config(const ExperimentConfig& cfg);

NoisePlacement make_placement(const ExperimentConfig& cfg);

// Full bitstrings the selector expands to (list entries without * or [).
std::vector<std::string> selected_bitstrings(const ExperimentConfig& cfg);
// Marginal patterns: list entries with '*', otherwise every 1- and 2-qubit
// pattern.
std::vector<std::string> selected_marginals(const ExperimentConfig& cfg);
// Conditional patterns: list entries with '[', otherwise the chain
// conditionals of each selected bitstring.
std::vector<std::string> selected_conditionals(const ExperimentConfig& cfg);

}  // namespace rcs
