#include "rcs/circuit.hpp"

#include <cmath>
#include <numbers>

namespace rcs {

std::string to_string(Layout layout) {
  return layout == Layout::brickwork ? "brickwork" : "single_qubit";
}

std::string to_string(PlacementMode mode) {
  switch (mode) {
    case PlacementMode::after_every_gate_with_final_layer: return "after_every_gate_with_final_layer";
    case PlacementMode::no_final_noise_layer: return "no_final_noise_layer";
    case PlacementMode::fixed_final_rotations: return "fixed_final_rotations";
  }
  return "unknown";
}

Layout layout_from_string(const std::string& name) {
  if (name == "brickwork") return Layout::brickwork;
  if (name == "single_qubit") return Layout::single_qubit;
  throw ParameterError("unknown layout '" + name + "'");
}

PlacementMode placement_mode_from_string(const std::string& name) {
  for (auto m : {PlacementMode::after_every_gate_with_final_layer, PlacementMode::no_final_noise_layer,
                 PlacementMode::fixed_final_rotations}) {
    if (to_string(m) == name) return m;
  }
  throw ParameterError("unknown placement mode '" + name + "'");
}

NoisePlacement noiseless_placement(PlacementMode mode) {
  NoisePlacement p;
  p.mode = mode;
  return p;
}

std::vector<std::vector<int>> CircuitShape::layer_supports(int layer) const {
  std::vector<std::vector<int>> out;
  if (layout == Layout::single_qubit || n == 1) {
    for (int j = 0; j < n; ++j) out.push_back({j});
    return out;
  }
  int j = 0;
  if (layer % 2 == 1) out.push_back({j++});
  for (; j + 1 < n; j += 2) out.push_back({j, j + 1});
  if (j < n) out.push_back({j});
  return out;
}

void validate_shape(const CircuitShape& shape, Parity parity) {
  if (shape.n < 1) throw ParameterError("n must be at least 1");
  if (shape.depth < 1) throw ParameterError("depth must be at least 1");
  if (parity == Parity::strict && shape.n % 2 != 0) {
    throw ParameterError("brickwork circuits need an even number of qubits");
  }
}

void validate_placement(const NoisePlacement& placement, int n) {
  const bool rotations = placement.mode == PlacementMode::fixed_final_rotations;
  if (rotations && placement.final_rotations.size() != static_cast<std::size_t>(n)) {
    throw ParameterError("fixed_final_rotations needs exactly one (theta, phi) pair per qubit");
  }
  if (!rotations && !placement.final_rotations.empty()) {
    throw ParameterError("final rotations given but placement mode is " + to_string(placement.mode));
  }
}

double uniform01(CounterRng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

namespace {

// Box-Muller, written out so sampled circuits do not depend on the
// standard library's distribution implementation.
cdouble complex_gaussian(CounterRng& rng) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  const double radius = std::sqrt(-std::log(u1));  // std normal pair scaled by 1/sqrt(2)
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace

MatXc sample_haar_unitary(int dim, CounterRng& rng) {
  if (dim != 2 && dim != 4) throw DimensionError("Haar sampling supports dimension 2 or 4");
  MatXc g(dim, dim);
  for (int c = 0; c < dim; ++c)
    for (int r = 0; r < dim; ++r) g(r, c) = complex_gaussian(rng);
  Eigen::HouseholderQR<MatXc> qr(g);
  MatXc q = qr.householderQ();
  const MatXc& r = qr.matrixQR();
  for (int k = 0; k < dim; ++k) {
    const cdouble d = r(k, k);
    const double mag = std::abs(d);
    q.col(k) *= mag > 0.0 ? d / mag : cdouble(1.0);
  }
  return q;
}

Circuit build_circuit(const CircuitShape& shape, const NoisePlacement& placement, CounterRng& rng,
                      Parity parity) {
  validate_shape(shape, parity);
  validate_placement(placement, shape.n);
  Circuit c;
  c.shape = shape;
  c.placement = placement;
  c.layers.resize(static_cast<std::size_t>(shape.depth));
  for (int l = 0; l < shape.depth; ++l) {
    for (auto& support : shape.layer_supports(l)) {
      const int dim = support.size() == 1 ? 2 : 4;
      c.layers[l].push_back(Gate{std::move(support), sample_haar_unitary(dim, rng)});
    }
  }
  return c;
}

Circuit build_brickwork(int n, int depth, const NoisePlacement& placement, CounterRng& rng) {
  return build_circuit(CircuitShape{n, depth, Layout::brickwork}, placement, rng, Parity::strict);
}

nlohmann::json circuit_to_json(const Circuit& circuit, bool include_unitaries) {
  nlohmann::json layers = nlohmann::json::array();
  for (std::size_t l = 0; l < circuit.layers.size(); ++l) {
    for (const auto& g : circuit.layers[l]) {
      nlohmann::json gate{{"layer", l}, {"qubits", g.qubits}};
      if (include_unitaries) {
        nlohmann::json rows = nlohmann::json::array();
        for (Eigen::Index r = 0; r < g.unitary.rows(); ++r) {
          nlohmann::json row = nlohmann::json::array();
          for (Eigen::Index k = 0; k < g.unitary.cols(); ++k) {
            row.push_back({g.unitary(r, k).real(), g.unitary(r, k).imag()});
          }
          rows.push_back(row);
        }
        gate["unitary"] = rows;
      }
      layers.push_back(gate);
    }
  }
  nlohmann::json rotations = nlohmann::json::array();
  for (const auto& r : circuit.placement.final_rotations) rotations.push_back({r.theta, r.phi});
  return {{"n", circuit.n()},
          {"depth", circuit.depth()},
          {"layout", to_string(circuit.shape.layout)},
          {"placement", to_string(circuit.placement.mode)},
          {"channel", circuit.placement.channel.spec()},
          {"final_rotations", rotations},
          {"gates", layers}};
}

}  // namespace rcs
