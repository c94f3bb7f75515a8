#pragma once

#include "rcs/circuit.hpp"

namespace rcs {

inline constexpr int kMaxPropagateQubits = 16;

// Exact gate-averaged moments of an ensemble shape. The doubled state is kept
// as a weighted sum over {I, S} label strings: every Haar gate projects its
// support onto span{I, S}, and each site carries the noise-evolved images of
// its current I and S operators.
struct SecondMoments {
  int n = 0;
  Eigen::VectorXd per_string;  // E[p_x q_x] for each x
  double collision_sum = 0.0;  // sum over x

  // 2^n E[sum_x p_x^2] - 1 when both copies are the same ensemble.
  double scaled_collision() const;
  // 2^n E[sum_x p_x q_x]: the ensemble XEB when one copy is ideal.
  double scaled_cross() const;
};

SecondMoments two_copy_moment_propagate(const CircuitShape& shape, const NoisePlacement& placement);
// Copies share gates but can differ in noise and final rotations.
SecondMoments cross_moment_propagate(const CircuitShape& shape, const NoisePlacement& first,
                                     const NoisePlacement& second);

// Exact E[p_x] for every x.
Eigen::VectorXd first_moment_propagate(const CircuitShape& shape, const NoisePlacement& placement);

// Label-string weights just after the last gate layer and the per-site
// readout factors <xx|O_j(label)|xx>, exposed for the stat-mech cross-checks.
struct LabelState {
  int n = 0;
  Eigen::VectorXd weights;                   // indexed like bitstrings, 1 = S
  std::vector<Eigen::Matrix2d> site_readout; // (label, x_j)
};
LabelState label_propagate(const CircuitShape& shape, const NoisePlacement& first, const NoisePlacement& second);

}  // namespace rcs
