#include <gtest/gtest.h>

#include <cmath>

#include "rcs/distribution.hpp"

using namespace rcs;

namespace {

OutputDistribution from_values(int n, std::vector<double> v) {
  OutputDistribution d;
  d.n = n;
  d.p = Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  return d;
}

// Random normalized distribution from a fixed stream.
OutputDistribution random_distribution(int n, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  const auto size = std::size_t(1) << n;
  std::vector<double> v(size);
  double s = 0.0;
  for (auto& x : v) s += (x = uniform01(rng));
  for (auto& x : v) x /= s;
  return from_values(n, v);
}

}  // namespace

TEST(Distribution, BitstringRoundTrip) {
  for (std::uint64_t i = 0; i < 32; ++i) EXPECT_EQ(parse_bitstring(to_bitstring(i, 5), 5), i);
  EXPECT_EQ(to_bitstring(1, 3), "001");
  EXPECT_THROW(parse_bitstring("012", 3), ParameterError);
  EXPECT_THROW(parse_bitstring("01", 3), ParameterError);
  EXPECT_EQ(hamming_weight(0b1011), 3);
}

TEST(Distribution, MarginalsByHand) {
  // p(00) = .1, p(01) = .2, p(10) = .3, p(11) = .4
  const auto d = from_values(2, {0.1, 0.2, 0.3, 0.4});
  EXPECT_NEAR(marginal(d, "0*"), 0.3, 1e-15);
  EXPECT_NEAR(marginal(d, "1*"), 0.7, 1e-15);
  EXPECT_NEAR(marginal(d, "*1"), 0.6, 1e-15);
  EXPECT_NEAR(marginal(d, "**"), 1.0, 1e-15);
  EXPECT_NEAR(marginal(d, "10"), 0.3, 1e-15);
  EXPECT_NEAR(conditional(d, 1, 1, {0}, {1}), 0.4 / 0.7, 1e-15);
  EXPECT_NEAR(conditional(d, parse_conditional_pattern("0[1]", 2)), 0.2 / 0.3, 1e-15);
  EXPECT_NEAR(conditional(d, parse_conditional_pattern("[0]*", 2)), 0.3, 1e-15);
}

TEST(Distribution, MarginalsSumToOne) {
  const auto d = random_distribution(4, 3);
  double total = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) total += marginal(d, {0, 3}, {a, b});
  EXPECT_NEAR(total, 1.0, 1e-14);
  EXPECT_NEAR(marginal(d, "*0*1") + marginal(d, "*1*1"), marginal(d, "***1"), 1e-15);
}

TEST(Distribution, ConditionalsArePmfs) {
  const auto d = random_distribution(4, 4);
  const double c0 = conditional(d, 2, 0, {0, 3}, {1, 0});
  const double c1 = conditional(d, 2, 1, {0, 3}, {1, 0});
  EXPECT_NEAR(c0 + c1, 1.0, 1e-14);
  EXPECT_NEAR(c1, marginal(d, "1*10") / marginal(d, "1**0"), 1e-14);
}

TEST(Distribution, DegenerateConditioningThrows) {
  const auto d = from_values(2, {1.0, 0.0, 0.0, 0.0});
  EXPECT_THROW(conditional(d, 1, 0, {0}, {1}), DegenerateConditioning);
  EXPECT_NO_THROW(conditional(d, 1, 0, {0}, {0}));
  EXPECT_THROW(conditional(d, 0, 0, {0}, {0}), ParameterError);
}

TEST(Distribution, BadPatterns) {
  EXPECT_THROW(parse_conditional_pattern("0*1", 3), ParameterError);
  EXPECT_THROW(parse_conditional_pattern("[0][1]", 2), ParameterError);
  EXPECT_THROW(parse_conditional_pattern("[2]*", 2), ParameterError);
  const auto d = random_distribution(2, 5);
  EXPECT_THROW(marginal(d, "0x"), ParameterError);
  EXPECT_THROW(marginal(d, "0**"), ParameterError);
}

TEST(Distribution, AgreeingMarginalsBruteForce) {
  const int n = 4;
  const auto d = random_distribution(n, 6);
  for (std::uint64_t x : {0ull, 5ull, 15ull}) {
    const auto f = agreeing_marginals(d, x);
    ASSERT_EQ(f.size(), 16u);
    for (std::uint64_t mask = 0; mask < 16; ++mask) {
      double s = 0.0;
      for (std::uint64_t y = 0; y < 16; ++y) {
        if (((x ^ y) & mask) == 0) s += d(y);
      }
      EXPECT_NEAR(f[mask], s, 1e-14);
    }
    EXPECT_NEAR(f[0], 1.0, 1e-14);
    EXPECT_NEAR(f[15], d(x), 1e-15);
  }
}

TEST(Distribution, XebAndCollision) {
  const auto u = uniform_distribution(3);
  const auto d = random_distribution(3, 7);
  EXPECT_NEAR(xeb(u, d).raw, 1.0, 1e-14);
  EXPECT_NEAR(xeb(u, d).shifted, 0.0, 1e-14);
  EXPECT_NEAR(xeb(d, d).raw, 8 * d.p.squaredNorm(), 1e-14);
  EXPECT_NEAR(scaled_collision(u), 0.0, 1e-14);
  EXPECT_NEAR(collision_sum(from_values(1, {1.0, 0.0})), 1.0, 1e-15);
  EXPECT_THROW(xeb(u, random_distribution(2, 1)), DimensionError);
}

TEST(Distribution, UniformIdentity) {
  // 2^n sum (p - 2^-n)^2 = 2^n sum p^2 - 1 for any normalized p.
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto d = random_distribution(1 + static_cast<int>(s % 6), 100 + s);
    EXPECT_NEAR(uniform_distance(d), scaled_collision(d), 1e-12);
  }
}
