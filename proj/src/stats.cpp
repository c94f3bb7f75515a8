#include "rcs/stats.hpp"

#include <cmath>

namespace rcs {

void RunningStats::push(double x) {
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (x - mean_);
}

void RunningStats::merge(const RunningStats& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(count_), nb = static_cast<double>(other.count_);
  const double n = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ += delta * nb / n;
  m2_ += other.m2_ + delta * delta * na * nb / n;
  count_ += other.count_;
}

double RunningStats::variance() const {
  return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
}

double RunningStats::std_error() const {
  return count_ > 0 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
}

RunningStats pairwise_stats(std::span<const double> values) {
  constexpr std::size_t kLeaf = 64;
  RunningStats s;
  if (values.size() <= kLeaf) {
    for (double v : values) s.push(v);
    return s;
  }
  const std::size_t half = values.size() / 2;
  s = pairwise_stats(values.first(half));
  s.merge(pairwise_stats(values.subspan(half)));
  return s;
}

double wilson_std_error(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) return 0.0;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  // Half-width of the z = 1 Wilson interval.
  return std::sqrt(p * (1.0 - p) / n + 1.0 / (4.0 * n * n)) / (1.0 + 1.0 / n);
}

}  // namespace rcs
