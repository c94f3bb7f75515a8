#pragma once

#include <cstdint>
#include <span>

namespace rcs {

// Welford accumulator with Chan's merge.
class RunningStats {
 public:
  void push(double x);
  void merge(const RunningStats& other);

  std::uint64_t count() const { return count_; }
  double mean() const { return mean_; }
  // Unbiased sample variance.
  double variance() const;
  double std_error() const;

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// Reduces values in a fixed binary tree over index order, so the result does
// not depend on how the values were produced.
RunningStats pairwise_stats(std::span<const double> values);

// Standard error from the Wilson score interval half-width at z = 1.
double wilson_std_error(std::uint64_t successes, std::uint64_t trials);

}  // namespace rcs
