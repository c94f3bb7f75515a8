#include "rcs/distribution.hpp"

#include <bit>
#include <cmath>

namespace rcs {

namespace {

void check_qubit(int q, int n) {
  if (q < 0 || q >= n) throw ParameterError("qubit index out of range");
}

std::uint64_t bit_of(int qubit, int n) { return std::uint64_t(1) << (n - 1 - qubit); }

}  // namespace

double OutputDistribution::at(std::string_view bits) const { return (*this)(parse_bitstring(bits, n)); }

OutputDistribution output_distribution(const DensityMatrix& rho) {
  return {rho.n(), rho.matrix().diagonal().real()};
}

OutputDistribution uniform_distribution(int n) {
  const Eigen::Index dim = Eigen::Index(1) << n;
  return {n, Eigen::VectorXd::Constant(dim, 1.0 / static_cast<double>(dim))};
}

std::string to_bitstring(std::uint64_t index, int n) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int j = 0; j < n; ++j) {
    if (index & bit_of(j, n)) s[j] = '1';
  }
  return s;
}

std::uint64_t parse_bitstring(std::string_view bits, int n) {
  if (static_cast<int>(bits.size()) != n) throw ParameterError("bitstring length must equal n");
  std::uint64_t index = 0;
  for (int j = 0; j < n; ++j) {
    if (bits[j] == '1') {
      index |= bit_of(j, n);
    } else if (bits[j] != '0') {
      throw ParameterError("bitstring must contain only 0 and 1");
    }
  }
  return index;
}

int hamming_weight(std::uint64_t index) { return std::popcount(index); }

double marginal(const OutputDistribution& dist, const std::vector<int>& qubits, const std::vector<int>& values) {
  if (qubits.size() != values.size()) throw ParameterError("qubits and values differ in length");
  std::uint64_t mask = 0, want = 0;
  for (std::size_t k = 0; k < qubits.size(); ++k) {
    check_qubit(qubits[k], dist.n);
    const auto b = bit_of(qubits[k], dist.n);
    if (mask & b) throw ParameterError("repeated qubit in marginal");
    mask |= b;
    if (values[k]) want |= b;
  }
  double s = 0.0;
  for (Eigen::Index y = 0; y < dist.p.size(); ++y) {
    if ((static_cast<std::uint64_t>(y) & mask) == want) s += dist.p(y);
  }
  return s;
}

double marginal(const OutputDistribution& dist, std::string_view pattern) {
  if (static_cast<int>(pattern.size()) != dist.n) throw ParameterError("pattern length must equal n");
  std::vector<int> qubits, values;
  for (int j = 0; j < dist.n; ++j) {
    if (pattern[j] == '*') continue;
    if (pattern[j] != '0' && pattern[j] != '1') throw ParameterError("pattern must use 0, 1 and *");
    qubits.push_back(j);
    values.push_back(pattern[j] - '0');
  }
  return marginal(dist, qubits, values);
}

double conditional(const OutputDistribution& dist, int qubit, int value, const std::vector<int>& cond_qubits,
                   const std::vector<int>& cond_values) {
  check_qubit(qubit, dist.n);
  for (int q : cond_qubits) {
    if (q == qubit) throw ParameterError("target qubit appears in the conditioning set");
  }
  const double den = marginal(dist, cond_qubits, cond_values);
  if (den < kConditioningFloor) throw DegenerateConditioning("conditioning event has probability below 1e-14");
  auto qubits = cond_qubits;
  auto values = cond_values;
  qubits.push_back(qubit);
  values.push_back(value);
  return marginal(dist, qubits, values) / den;
}

ConditionalPattern parse_conditional_pattern(std::string_view pattern, int n) {
  ConditionalPattern out;
  int pos = 0;
  bool have_target = false;
  for (std::size_t k = 0; k < pattern.size(); ++k) {
    const char ch = pattern[k];
    if (ch == '[') {
      if (have_target || k + 2 >= pattern.size() || pattern[k + 2] != ']' ||
          (pattern[k + 1] != '0' && pattern[k + 1] != '1')) {
        throw ParameterError("conditional pattern needs exactly one [0] or [1]");
      }
      out.target = pos;
      out.value = pattern[k + 1] - '0';
      have_target = true;
      k += 2;
    } else if (ch == '0' || ch == '1') {
      out.cond_qubits.push_back(pos);
      out.cond_values.push_back(ch - '0');
    } else if (ch != '*') {
      throw ParameterError("conditional pattern must use 0, 1, * and one [b]");
    }
    ++pos;
  }
  if (!have_target) throw ParameterError("conditional pattern needs exactly one [0] or [1]");
  if (pos != n) throw ParameterError("conditional pattern length must equal n");
  return out;
}

double conditional(const OutputDistribution& dist, const ConditionalPattern& pattern) {
  return conditional(dist, pattern.target, pattern.value, pattern.cond_qubits, pattern.cond_values);
}

std::vector<double> agreeing_marginals(const OutputDistribution& dist, std::uint64_t x) {
  const std::uint64_t size = std::uint64_t(1) << dist.n;
  const std::uint64_t full = size - 1;
  std::vector<double> f(size, 0.0);
  for (std::uint64_t y = 0; y < size; ++y) f[~(x ^ y) & full] += dist.p(static_cast<Eigen::Index>(y));
  // Sum over supersets of each mask.
  for (int b = 0; b < dist.n; ++b) {
    const std::uint64_t bit = std::uint64_t(1) << b;
    for (std::uint64_t m = 0; m < size; ++m) {
      if (!(m & bit)) f[m] += f[m | bit];
    }
  }
  return f;
}

XebValue xeb(const OutputDistribution& ideal, const OutputDistribution& noisy) {
  if (ideal.n != noisy.n || ideal.p.size() != noisy.p.size()) throw DimensionError("xeb: distributions differ in size");
  XebValue v;
  v.raw = std::ldexp(ideal.p.dot(noisy.p), ideal.n);
  v.shifted = v.raw - 1.0;
  return v;
}

double collision_sum(const OutputDistribution& dist) { return dist.p.squaredNorm(); }

double scaled_collision(const OutputDistribution& dist) { return std::ldexp(collision_sum(dist), dist.n) - 1.0; }

double uniform_distance(const OutputDistribution& dist) {
  const double u = std::ldexp(1.0, -dist.n);
  return std::ldexp((dist.p.array() - u).matrix().squaredNorm(), dist.n);
}

}  // namespace rcs
