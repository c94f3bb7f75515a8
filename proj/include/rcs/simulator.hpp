#pragma once

#include "rcs/circuit.hpp"

namespace rcs {

struct DensityInvariants {
  double hermiticity_error = 0.0;
  double trace_error = 0.0;
  double min_eigenvalue = 0.0;

  bool ok() const { return hermiticity_error <= 1e-10 && trace_error <= 1e-10 && min_eigenvalue >= -1e-9; }
};

class DensityMatrix {
 public:
  DensityMatrix(int n, MatXc rho);
  static DensityMatrix zero_state(int n);

  int n() const { return n_; }
  const MatXc& matrix() const { return rho_; }
  MatXc& matrix() { return rho_; }

  double purity() const;
  // Full eigendecomposition; only cheap for small n.
  DensityInvariants check() const;

 private:
  int n_;
  MatXc rho_;
};

// Runs the circuit from |0...0> under its own noise placement, or under an
// override that keeps the sampled gates (ideal or surrogate runs).
DensityMatrix simulate(const Circuit& circuit);
DensityMatrix simulate(const Circuit& circuit, const NoisePlacement& placement);

}  // namespace rcs
