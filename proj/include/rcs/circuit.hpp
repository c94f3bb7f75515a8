#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "rcs/channel.hpp"
#include "rcs/rng.hpp"
#include "rcs/types.hpp"

namespace rcs {

inline constexpr int kMaxSimQubits = 12;

enum class Layout { brickwork, single_qubit };

enum class PlacementMode { after_every_gate_with_final_layer, no_final_noise_layer, fixed_final_rotations };

std::string to_string(Layout layout);
std::string to_string(PlacementMode mode);
Layout layout_from_string(const std::string& name);
PlacementMode placement_mode_from_string(const std::string& name);

struct Rotation {
  double theta = 0.0;
  double phi = 0.0;
};

struct NoisePlacement {
  PlacementMode mode = PlacementMode::after_every_gate_with_final_layer;
  Channel channel;
  std::vector<Rotation> final_rotations;

  // Noise follows the gates of layer l (0-based) in a depth-d circuit.
  bool noisy_layer(int layer, int depth) const {
    return mode != PlacementMode::no_final_noise_layer || layer + 1 < depth;
  }
};

NoisePlacement noiseless_placement(PlacementMode mode = PlacementMode::after_every_gate_with_final_layer);

// Gate positions only. Layer l of the brickwork pairs (0,1),(2,3),... when l
// is even and (1,2),(3,4),... when l is odd; qubits left unpaired get
// single-qubit gates. single_qubit gives every qubit its own gate in every
// layer.
struct CircuitShape {
  int n = 2;
  int depth = 1;
  Layout layout = Layout::brickwork;

  std::vector<std::vector<int>> layer_supports(int layer) const;
};

// strict rejects odd n >= 3; relaxed allows the open-boundary pattern for
// any n >= 1.
enum class Parity { strict, relaxed };
void validate_shape(const CircuitShape& shape, Parity parity);
void validate_placement(const NoisePlacement& placement, int n);

struct Gate {
  std::vector<int> qubits;
  MatXc unitary;
};

struct Circuit {
  CircuitShape shape;
  std::vector<std::vector<Gate>> layers;
  NoisePlacement placement;

  int n() const { return shape.n; }
  int depth() const { return shape.depth; }
};

double uniform01(CounterRng& rng);
MatXc sample_haar_unitary(int dim, CounterRng& rng);

Circuit build_circuit(const CircuitShape& shape, const NoisePlacement& placement, CounterRng& rng,
                      Parity parity = Parity::relaxed);
Circuit build_brickwork(int n, int depth, const NoisePlacement& placement, CounterRng& rng);

nlohmann::json circuit_to_json(const Circuit& circuit, bool include_unitaries = true);

}  // namespace rcs
