#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rcs/simulator.hpp"

namespace rcs {

inline constexpr double kConditioningFloor = 1e-14;

// Probabilities over bitstrings; x_1 (qubit 0) is the most significant bit of
// the index.
struct OutputDistribution {
  int n = 0;
  Eigen::VectorXd p;

  double operator()(std::uint64_t index) const { return p(static_cast<Eigen::Index>(index)); }
  double at(std::string_view bits) const;
};

OutputDistribution output_distribution(const DensityMatrix& rho);
OutputDistribution uniform_distribution(int n);

std::string to_bitstring(std::uint64_t index, int n);
std::uint64_t parse_bitstring(std::string_view bits, int n);
int hamming_weight(std::uint64_t index);

double marginal(const OutputDistribution& dist, const std::vector<int>& qubits, const std::vector<int>& values);
// Pattern over {0, 1, *}, one character per qubit.
double marginal(const OutputDistribution& dist, std::string_view pattern);

// Pr(X_i = value | X_j = values_j for j in cond). Throws DegenerateConditioning
// when the conditioning event has probability below kConditioningFloor.
double conditional(const OutputDistribution& dist, int qubit, int value, const std::vector<int>& cond_qubits,
                   const std::vector<int>& cond_values);

// "0[1]*1": bracketed position is the target, other digits condition,
// '*' are summed over.
struct ConditionalPattern {
  int target = 0;
  int value = 0;
  std::vector<int> cond_qubits;
  std::vector<int> cond_values;
};
ConditionalPattern parse_conditional_pattern(std::string_view pattern, int n);
double conditional(const OutputDistribution& dist, const ConditionalPattern& pattern);

// P[J] = Pr(X_j = x_j for all j in J) for every subset J, with J encoded as
// an index mask in the same bit order as bitstrings.
std::vector<double> agreeing_marginals(const OutputDistribution& dist, std::uint64_t x);

struct XebValue {
  double raw = 0.0;      // 2^n sum_x p_ideal(x) p_noisy(x)
  double shifted = 0.0;  // raw - 1
};
XebValue xeb(const OutputDistribution& ideal, const OutputDistribution& noisy);

double collision_sum(const OutputDistribution& dist);
// 2^n sum_x p_x^2 - 1.
double scaled_collision(const OutputDistribution& dist);
// 2^n sum_x (p_x - 2^-n)^2.
double uniform_distance(const OutputDistribution& dist);

}  // namespace rcs
