#include <gtest/gtest.h>

#include <cmath>

#include "rcs/circuit.hpp"
#include "rcs/distribution.hpp"
#include "rcs/simulator.hpp"
#include "rcs/stats.hpp"

using namespace rcs;

namespace {

NoisePlacement noisy(const ChannelSpec& spec, PlacementMode mode = PlacementMode::after_every_gate_with_final_layer) {
  NoisePlacement p;
  p.mode = mode;
  p.channel = make_channel(spec);
  return p;
}

}  // namespace

TEST(Haar, SampledMatricesAreUnitary) {
  for (int dim : {2, 4}) {
    CounterRng rng(1, static_cast<std::uint64_t>(dim));
    const MatXc u = sample_haar_unitary(dim, rng);
    EXPECT_LT((u * u.adjoint() - MatXc::Identity(dim, dim)).norm(), 1e-12);
  }
}

TEST(Haar, FirstAndSecondMomentsOfAnEntry) {
  // E|U_00|^2 = 1/d, E|U_00|^4 = 2/(d(d+1)).
  for (int dim : {2, 4}) {
    const int samples = 40000;
    std::vector<double> m2(samples), m4(samples);
    for (int s = 0; s < samples; ++s) {
      CounterRng rng(2, static_cast<std::uint64_t>(s));
      const double a = std::norm(sample_haar_unitary(dim, rng)(0, 0));
      m2[s] = a;
      m4[s] = a * a;
    }
    const auto s2 = pairwise_stats(m2), s4 = pairwise_stats(m4);
    EXPECT_LE(std::abs(s2.mean() - 1.0 / dim), 3 * s2.std_error());
    EXPECT_LE(std::abs(s4.mean() - 2.0 / (dim * (dim + 1))), 3 * s4.std_error());
  }
}

TEST(Haar, SameStreamSameMatrix) {
  CounterRng a(5, 17), b(5, 17), c(5, 18);
  const MatXc ua = sample_haar_unitary(4, a);
  EXPECT_EQ((ua - sample_haar_unitary(4, b)).norm(), 0.0);
  EXPECT_GT((ua - sample_haar_unitary(4, c)).norm(), 0.1);
}

TEST(Shape, BrickworkSupports) {
  CircuitShape s{6, 3, Layout::brickwork};
  EXPECT_EQ(s.layer_supports(0), (std::vector<std::vector<int>>{{0, 1}, {2, 3}, {4, 5}}));
  EXPECT_EQ(s.layer_supports(1), (std::vector<std::vector<int>>{{0}, {1, 2}, {3, 4}, {5}}));
  CircuitShape odd{5, 2, Layout::brickwork};
  EXPECT_EQ(odd.layer_supports(0), (std::vector<std::vector<int>>{{0, 1}, {2, 3}, {4}}));
  EXPECT_EQ(odd.layer_supports(1), (std::vector<std::vector<int>>{{0}, {1, 2}, {3, 4}}));
  CircuitShape single{3, 1, Layout::single_qubit};
  EXPECT_EQ(single.layer_supports(0), (std::vector<std::vector<int>>{{0}, {1}, {2}}));
}

TEST(Shape, Validation) {
  CounterRng rng(1, 0);
  EXPECT_THROW(build_brickwork(3, 2, noiseless_placement(), rng), ParameterError);
  EXPECT_NO_THROW(build_circuit({3, 2, Layout::brickwork}, noiseless_placement(), rng));
  EXPECT_THROW(build_circuit({0, 2, Layout::brickwork}, noiseless_placement(), rng), ParameterError);
  EXPECT_THROW(build_circuit({2, 0, Layout::brickwork}, noiseless_placement(), rng), ParameterError);
  NoisePlacement rot = noiseless_placement(PlacementMode::fixed_final_rotations);
  EXPECT_THROW(build_circuit({2, 1, Layout::brickwork}, rot, rng), ParameterError);
  rot.final_rotations = {{0.1, 0.0}, {0.2, 0.0}};
  EXPECT_NO_THROW(build_circuit({2, 1, Layout::brickwork}, rot, rng));
  EXPECT_THROW(placement_mode_from_string("sometimes"), ParameterError);
}

TEST(Shape, SingleBrickIsOneGate) {
  CounterRng rng(1, 0);
  const Circuit c = build_brickwork(2, 1, noiseless_placement(), rng);
  ASSERT_EQ(c.layers.size(), 1u);
  ASSERT_EQ(c.layers[0].size(), 1u);
  EXPECT_EQ(c.layers[0][0].qubits, (std::vector<int>{0, 1}));
  EXPECT_EQ(c.layers[0][0].unitary.rows(), 4);
}

TEST(Simulator, InvariantsHoldUnderNoise) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    CounterRng rng(3, s);
    const Circuit c = build_brickwork(4, 4, noisy(ChannelSpec::amp_then_dep(0.3, 0.2)), rng);
    const DensityMatrix rho = simulate(c);
    EXPECT_TRUE(rho.check().ok());
    EXPECT_LE(rho.purity(), 1.0 + 1e-12);
    EXPECT_NEAR(output_distribution(rho).p.sum(), 1.0, 1e-12);
  }
}

TEST(Simulator, NoiselessStateIsPure) {
  CounterRng rng(4, 0);
  const DensityMatrix rho = simulate(build_brickwork(4, 3, noiseless_placement(), rng));
  EXPECT_NEAR(rho.purity(), 1.0, 1e-12);
}

TEST(Simulator, FullDampingResetsToZero) {
  // q = 1 sends every qubit to |0> after the last gate.
  CounterRng rng(5, 0);
  const auto dist = output_distribution(simulate(build_brickwork(4, 3, noisy(ChannelSpec::amp_damp(1.0)), rng)));
  EXPECT_NEAR(dist.at("0000"), 1.0, 1e-12);
  EXPECT_NEAR(dist.at("1111"), 0.0, 1e-12);
}

TEST(Simulator, BitOrderPutsQubitZeroFirst) {
  // X on qubit 0 only: the outcome is 10.
  Circuit c;
  c.shape = {2, 1, Layout::single_qubit};
  c.placement = noiseless_placement();
  MatXc x = pauli<double>(1);
  c.layers = {{Gate{{0}, x}, Gate{{1}, MatXc::Identity(2, 2)}}};
  const auto dist = output_distribution(simulate(c));
  EXPECT_NEAR(dist.at("10"), 1.0, 1e-14);
  EXPECT_EQ(parse_bitstring("10", 2), 2u);
  EXPECT_EQ(to_bitstring(2, 2), "10");
}

TEST(Simulator, OverridePlacementKeepsGates) {
  CounterRng rng(6, 0);
  const Circuit c = build_brickwork(2, 2, noisy(ChannelSpec::depolarizing(1.0)), rng);
  // Fully depolarized output is uniform; the ideal run on the same gates is not.
  const auto noisy_dist = output_distribution(simulate(c));
  EXPECT_NEAR(noisy_dist.at("01"), 0.25, 1e-12);
  const auto ideal = output_distribution(simulate(c, noiseless_placement()));
  EXPECT_NEAR(ideal.p.sum(), 1.0, 1e-12);
  EXPECT_GT(std::abs(ideal.at("01") - 0.25), 1e-6);
}

TEST(Simulator, NoFinalLayerSkipsLastNoise) {
  // With only the last layer's noise removed, depth 1 is noiseless.
  CounterRng a(7, 0), b(7, 0);
  const Circuit c = build_brickwork(2, 1, noisy(ChannelSpec::amp_damp(0.9), PlacementMode::no_final_noise_layer), a);
  const Circuit ref = build_brickwork(2, 1, noiseless_placement(), b);
  EXPECT_LT((simulate(c).matrix() - simulate(ref).matrix()).norm(), 1e-12);
}

TEST(Hiding, NoiselessProbabilitiesDoNotDependOnTheString) {
  const int samples = 4000;
  std::vector<double> p0(samples), p1(samples);
  for (int s = 0; s < samples; ++s) {
    CounterRng rng(8, static_cast<std::uint64_t>(s));
    const auto dist = output_distribution(simulate(build_brickwork(4, 3, noiseless_placement(), rng)));
    p0[s] = dist.at("0000");
    p1[s] = dist.at("1111");
  }
  const auto a = pairwise_stats(p0), b = pairwise_stats(p1);
  const double se = std::hypot(a.std_error(), b.std_error());
  EXPECT_LE(std::abs(a.mean() - b.mean()), 3 * se);
  EXPECT_LE(std::abs(a.mean() - 1.0 / 16), 3 * a.std_error());
}

TEST(Hiding, AmplitudeDampingBreaksIt) {
  const int samples = 4000;
  std::vector<double> p0(samples), p1(samples);
  for (int s = 0; s < samples; ++s) {
    CounterRng rng(9, static_cast<std::uint64_t>(s));
    const auto dist = output_distribution(simulate(build_brickwork(4, 3, noisy(ChannelSpec::amp_damp(0.3)), rng)));
    p0[s] = dist.at("0000");
    p1[s] = dist.at("1111");
  }
  const auto a = pairwise_stats(p0), b = pairwise_stats(p1);
  EXPECT_GT(a.mean() - b.mean(), 5 * std::hypot(a.std_error(), b.std_error()));
}

TEST(Circuit, JsonHasLayers) {
  CounterRng rng(10, 0);
  const auto j = circuit_to_json(build_brickwork(4, 2, noiseless_placement(), rng), false);
  EXPECT_EQ(j.at("gates").size(), 5u);  // 2 bricks, then 0 | 12 | 3
  EXPECT_FALSE(j.at("gates")[0].contains("unitary"));
}
