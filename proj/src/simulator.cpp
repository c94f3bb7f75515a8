#include "rcs/simulator.hpp"

#include <string>

namespace rcs {

DensityMatrix::DensityMatrix(int n, MatXc rho) : n_(n), rho_(std::move(rho)) {
  const Eigen::Index dim = Eigen::Index(1) << n;
  if (rho_.rows() != dim || rho_.cols() != dim) throw DimensionError("density matrix size does not match n");
}

DensityMatrix DensityMatrix::zero_state(int n) {
  if (n < 1 || n > kMaxSimQubits) {
    throw DimensionError("simulator supports 1 to " + std::to_string(kMaxSimQubits) + " qubits");
  }
  const Eigen::Index dim = Eigen::Index(1) << n;
  MatXc rho = MatXc::Zero(dim, dim);
  rho(0, 0) = 1.0;
  return DensityMatrix(n, std::move(rho));
}

double DensityMatrix::purity() const { return (rho_.transpose().cwiseProduct(rho_)).sum().real(); }

DensityInvariants DensityMatrix::check() const {
  DensityInvariants inv;
  inv.hermiticity_error = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
  inv.trace_error = std::abs(rho_.trace() - cdouble(1.0));
  const MatXc herm = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<MatXc> es(herm, Eigen::EigenvaluesOnly);
  inv.min_eigenvalue = es.eigenvalues().minCoeff();
  return inv;
}

DensityMatrix simulate(const Circuit& circuit) { return simulate(circuit, circuit.placement); }

DensityMatrix simulate(const Circuit& circuit, const NoisePlacement& placement) {
  validate_placement(placement, circuit.n());
  const int n = circuit.n();
  DensityMatrix state = DensityMatrix::zero_state(n);
  MatXc& rho = state.matrix();
  const Mat4c& superop = placement.channel.superoperator();
  const bool identity_noise = superop.isIdentity(0.0);
  for (int l = 0; l < circuit.depth(); ++l) {
    const bool noisy = placement.noisy_layer(l, circuit.depth()) && !identity_noise;
    for (const auto& gate : circuit.layers[l]) {
      apply_local_unitary(rho, n, gate.qubits, gate.unitary);
      if (!noisy) continue;
      for (int q : gate.qubits) apply_local_superoperator(rho, n, q, superop);
    }
  }
  if (placement.mode == PlacementMode::fixed_final_rotations) {
    for (int j = 0; j < n; ++j) {
      const auto& r = placement.final_rotations[j];
      apply_local_unitary(rho, n, {j}, rotation_unitary(r.theta, r.phi));
    }
  }
  return state;
}

}  // namespace rcs
