#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "rcs/channel.hpp"
#include "rcs/circuit.hpp"

namespace rcs {

// Weights over {I, S}^n label strings, indexed like bitstrings (bit set = S).
struct StatMechState {
  int n = 0;
  Eigen::VectorXd weights;
};

// Two-qubit Haar projection of a product label pair. Returned weights are
// indexed II, IS, SI, SS.
std::array<double, 4> pair_collapse(int left, int right);

// x_m in (1/10)(2I + S) + x_m (I - 2S).
struct WernerStateValue {
  double closed = 0.0;
  double iterated = 0.0;
  bool closed_form_valid = true;  // false when a + 2b = 0

  double value() const { return closed_form_valid ? closed : iterated; }
};
WernerStateValue werner_state(double a, double b, int m);

// M^m(I) = x I + y S and M^m(S) = z I + w S for the twirled doubled noise.
struct SequenceCoeffs {
  double x = 1.0;
  double y = 0.0;
  double z = 0.0;
  double w = 1.0;
  bool closed_form = true;  // false when a = 0 forced the iteration fallback
};
SequenceCoeffs sequence_coeffs(double a, double b, int m);
SequenceCoeffs sequence_coeffs_iterated(double a, double b, int m);
// Same coefficients from the 4x4 two-copy matrices of an actual channel.
SequenceCoeffs sequence_coeffs_from_channel(const Channel& ch, int m);

// All-single-qubit-gate ensemble with no final noise: (3/10 - x_{d-1})^n.
double modified_ensemble_second_moment(int n, int d, double a, double b);

// prod_j e_j with e_j = (1 + r)^2 for x_j = 0 and (1 - r)^2 for x_j = 1.
double last_layer_correction(std::string_view bits, double r);

struct MonotonicityRecord {
  double exact = 0.0;     // two-qubit-gate ensemble, no final noise
  double modified = 0.0;  // closed form for the single-qubit-gate ensemble
  double slack = 0.0;     // modified - exact
  bool holds = false;
  bool closed_form = true;
};
MonotonicityRecord monotonicity_check(const CircuitShape& shape, const Channel& ch, std::uint64_t x);

// Second moment E[p_x^2] by label-string dynamic programming: per-site (a, b)
// rule between layers, pair collapse at two-qubit gates.
double trajectory_second_moment(const CircuitShape& shape, const Channel& ch, PlacementMode mode,
                                std::uint64_t x);
// Label weights right after the first gate layer, starting from |0...0>.
StatMechState initial_label_state(const CircuitShape& shape);

}  // namespace rcs
