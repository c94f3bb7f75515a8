#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rcs/channel.hpp"
#include "rcs/circuit.hpp"
#include "rcs/stats.hpp"

using namespace rcs;

namespace {

// Written out directly from the channel definitions, independent of the
// library's Kraus construction.
Mat2c amp_damp_oracle(const Mat2c& x, double q) {
  Mat2c out;
  out << x(0, 0) + q * x(1, 1), std::sqrt(1 - q) * x(0, 1), std::sqrt(1 - q) * x(1, 0), (1 - q) * x(1, 1);
  return out;
}

Mat2c depolarizing_oracle(const Mat2c& x, double p) {
  return (1 - p) * x + p * x.trace() * Mat2c::Identity() / 2.0;
}

Mat2c random_operator(CounterRng& rng) {
  Mat2c a;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) a(i, j) = cdouble(2 * uniform01(rng) - 1, 2 * uniform01(rng) - 1);
  return a;
}

Mat2c random_hermitian(CounterRng& rng) {
  const Mat2c a = random_operator(rng);
  return (a + a.adjoint()) / 2.0;
}

}  // namespace

TEST(Channel, AmpDampMatchesDefinition) {
  CounterRng rng(3, 0);
  for (double q : {0.0, 0.2, 0.7, 1.0}) {
    const Channel ch = make_channel(ChannelSpec::amp_damp(q));
    for (int k = 0; k < 10; ++k) {
      const Mat2c x = random_operator(rng);
      EXPECT_LT((ch.apply(x) - amp_damp_oracle(x, q)).norm(), 1e-12);
      EXPECT_LT((ch.kraus()->apply(x) - amp_damp_oracle(x, q)).norm(), 1e-12);
    }
  }
}

TEST(Channel, DepolarizingMatchesDefinition) {
  CounterRng rng(4, 0);
  for (double p : {0.0, 0.3, 1.0}) {
    const Channel ch = make_channel(ChannelSpec::depolarizing(p));
    for (int k = 0; k < 10; ++k) {
      const Mat2c x = random_operator(rng);
      EXPECT_LT((ch.apply(x) - depolarizing_oracle(x, p)).norm(), 1e-12);
    }
  }
}

TEST(Channel, CompositionOrderMatchesNames) {
  CounterRng rng(5, 0);
  const double q = 0.3, p = 0.2;
  const Channel ad = make_channel(ChannelSpec::amp_then_dep(q, p));
  const Channel da = make_channel(ChannelSpec::dep_then_amp(q, p));
  for (int k = 0; k < 10; ++k) {
    const Mat2c x = random_operator(rng);
    EXPECT_LT((ad.apply(x) - amp_damp_oracle(depolarizing_oracle(x, p), q)).norm(), 1e-12);
    EXPECT_LT((da.apply(x) - depolarizing_oracle(amp_damp_oracle(x, q), p)).norm(), 1e-12);
  }
}

TEST(Channel, CptpRoundTripRandomParameters) {
  CounterRng rng(6, 0);
  for (int k = 0; k < 1000; ++k) {
    const double q = uniform01(rng), p = uniform01(rng);
    const auto spec = k % 2 ? ChannelSpec::amp_then_dep(q, p) : ChannelSpec::dep_then_amp(q, p);
    const Channel ch = make_channel(spec);
    ASSERT_TRUE(ch.cptp());
    EXPECT_LT(ch.kraus()->completeness_error(), kCompletenessTolerance);
    EXPECT_GE(ch.min_choi_eigenvalue(), -kChoiTolerance);
  }
}

TEST(Channel, AdjointDualityAndUnitality) {
  CounterRng rng(7, 0);
  const std::vector<ChannelSpec> specs{ChannelSpec::amp_damp(0.4), ChannelSpec::depolarizing(0.3),
                                       ChannelSpec::amp_then_dep(0.2, 0.5), ChannelSpec::dep_then_amp(0.6, 0.1)};
  for (const auto& spec : specs) {
    const Channel ch = make_channel(spec);
    for (int k = 0; k < 100; ++k) {
      const Mat2c a = random_hermitian(rng), b = random_hermitian(rng);
      EXPECT_LT(std::abs((a * ch.apply(b)).trace() - (ch.apply_adjoint(a) * b).trace()), 1e-12);
    }
    EXPECT_LT((ch.apply_adjoint(Mat2c::Identity()) - Mat2c::Identity()).norm(), 1e-12);
  }
}

TEST(Channel, PtmCompositionIsMatrixProduct) {
  for (double q : {0.1, 0.5, 0.9}) {
    for (double p : {0.0, 0.4, 1.0}) {
      const KrausChannel a = amplitude_damping_kraus(q), d = depolarizing_kraus(p);
      EXPECT_LT((ptm_of(compose(a, d)).matrix() - (ptm_of(a) * ptm_of(d)).matrix()).norm(), 1e-10);
      EXPECT_LT((ptm_of(compose(d, a)).matrix() - (ptm_of(d) * ptm_of(a)).matrix()).norm(), 1e-10);
    }
  }
}

TEST(Channel, AmpDampPtmEntries) {
  const double q = 0.36;
  const auto r = make_channel(ChannelSpec::amp_damp(q)).ptm().matrix();
  EXPECT_NEAR(r(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(r(1, 1), std::sqrt(1 - q), 1e-12);
  EXPECT_NEAR(r(2, 2), std::sqrt(1 - q), 1e-12);
  EXPECT_NEAR(r(3, 3), 1 - q, 1e-12);
  EXPECT_NEAR(r(3, 0), q, 1e-12);  // N(I) = I + q Z
  EXPECT_NEAR(r(0, 3), 0.0, 1e-12);
}

TEST(Channel, AdjointZExpansion) {
  // N^dagger(Z) = r I + (1-q)(1-p) Z with r = q or q(1-p).
  for (double q : {0.0, 0.25, 0.8}) {
    for (double p : {0.0, 0.3, 0.9}) {
      const Mat2c z = pauli<double>(3);
      const Mat2c ad = make_channel(ChannelSpec::amp_then_dep(q, p)).apply_adjoint(z);
      const Mat2c da = make_channel(ChannelSpec::dep_then_amp(q, p)).apply_adjoint(z);
      EXPECT_LT((ad - (q * Mat2c::Identity() + (1 - q) * (1 - p) * z)).norm(), 1e-12);
      EXPECT_LT((da - (q * (1 - p) * Mat2c::Identity() + (1 - q) * (1 - p) * z)).norm(), 1e-12);
    }
  }
}

TEST(Channel, RValue) {
  EXPECT_NEAR(r_value(make_channel(ChannelSpec::amp_then_dep(0.3, 0.2))), 0.3, 1e-12);
  EXPECT_NEAR(r_value(make_channel(ChannelSpec::dep_then_amp(0.3, 0.2))), 0.3 * 0.8, 1e-12);
  EXPECT_NEAR(r_value(ChannelSpec::dep_then_amp(0.3, 0.2)), 0.24, 1e-15);
  EXPECT_EQ(r_value(make_channel(ChannelSpec::depolarizing(0.5))), 0.0);
}

TEST(Channel, RejectsBadParameters) {
  EXPECT_THROW(make_channel(ChannelSpec::amp_damp(-0.1)), ParameterError);
  EXPECT_THROW(make_channel(ChannelSpec::depolarizing(1.5)), ParameterError);
  EXPECT_THROW(make_channel(ChannelSpec::amp_then_dep(std::nan(""), 0.1)), ParameterError);
  Eigen::Matrix4d bad = Eigen::Matrix4d::Identity();
  bad(0, 3) = 0.2;  // not trace preserving
  EXPECT_THROW(make_channel(ChannelSpec::general(bad)), ParameterError);
  EXPECT_THROW(make_channel(ChannelSpec{ChannelKind::general_ptm, 0, 0, {}}), ParameterError);
}

TEST(Channel, NonCptpGeneralMapIsFlaggedNotRejected) {
  // Transpose map: trace preserving, positive, not completely positive.
  Eigen::Matrix4d t = Eigen::Matrix4d::Identity();
  t(2, 2) = -1.0;
  const Channel ch = make_channel(ChannelSpec::general(t));
  EXPECT_FALSE(ch.cptp());
  EXPECT_LT(ch.min_choi_eigenvalue(), -0.1);
  EXPECT_THROW(ch.require_cptp(), CptpViolation);
  EXPECT_THROW(twirl_strength(ch), CptpViolation);
}

TEST(Channel, GeneralPtmRoundTripsThroughKraus) {
  CounterRng rng(8, 0);
  const MatXc v = sample_haar_unitary(4, rng).leftCols(2);
  const KrausChannel k({v.topRows(2), v.bottomRows(2)});
  const Channel ch = make_channel(ChannelSpec::general(ptm_of(k).matrix()));
  ASSERT_TRUE(ch.cptp());
  ASSERT_TRUE(ch.kraus().has_value());
  EXPECT_LT(ch.kraus()->completeness_error(), 1e-10);
  for (int i = 0; i < 5; ++i) {
    const Mat2c x = random_operator(rng);
    EXPECT_LT((ch.kraus()->apply(x) - k.apply(x)).norm(), 1e-10);
  }
}

TEST(Channel, SuperoperatorAgreesWithApply) {
  CounterRng rng(9, 0);
  const Channel ch = make_channel(ChannelSpec::amp_then_dep(0.35, 0.15));
  const Mat4c l = ch.superoperator();
  for (int k = 0; k < 5; ++k) {
    const Mat2c x = random_operator(rng);
    Eigen::Vector4cd vx;
    vx << x(0, 0), x(0, 1), x(1, 0), x(1, 1);
    const Eigen::Vector4cd y = l * vx;
    const Mat2c nx = ch.apply(x);
    EXPECT_LT(std::abs(y(0) - nx(0, 0)) + std::abs(y(1) - nx(0, 1)) + std::abs(y(2) - nx(1, 0)) +
                  std::abs(y(3) - nx(1, 1)),
              1e-12);
  }
}

TEST(Channel, WernerTwirlMatchesWeingarten) {
  CounterRng rng(10, 0);
  for (int k = 0; k < 20; ++k) {
    Mat4c x;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) x(i, j) = cdouble(uniform01(rng) - 0.5, uniform01(rng) - 0.5);
    const auto a = werner_twirl(x);
    const auto b = haar_twirl(x, 2);
    EXPECT_LT(std::abs(a.alpha - b.alpha), 1e-12);
    EXPECT_LT(std::abs(a.beta - b.beta), 1e-12);
  }
  // Fixed points of the twirl.
  const auto id = werner_twirl(Mat4c::Identity());
  EXPECT_NEAR(id.alpha.real(), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(id.beta), 0.0, 1e-14);
  const auto sw = werner_twirl(swap_operator());
  EXPECT_NEAR(std::abs(sw.alpha), 0.0, 1e-14);
  EXPECT_NEAR(sw.beta.real(), 1.0, 1e-14);
}

TEST(Channel, WernerTwirlMatchesMonteCarlo) {
  // 10^5 sampled single-qubit Haar unitaries on both copies.
  const Channel ch = make_channel(ChannelSpec::amp_then_dep(0.4, 0.2));
  const Mat4c x = apply_doubled(ch, Mat4c::Identity());
  const int samples = 100000;
  std::vector<double> alpha(samples), beta(samples);
  for (int s = 0; s < samples; ++s) {
    CounterRng rng(11, static_cast<std::uint64_t>(s));
    const MatXc u = sample_haar_unitary(2, rng);
    Mat4c uu;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) uu.block<2, 2>(2 * a, 2 * b) = u(a, b) * u;
    const Mat4c y = uu * x * uu.adjoint();
    alpha[s] = y(1, 1).real();
    beta[s] = y(1, 2).real();
  }
  const auto closed = werner_twirl(x);
  const auto sa = pairwise_stats(alpha), sb = pairwise_stats(beta);
  ASSERT_GT(sa.std_error(), 0.0);
  EXPECT_LE(std::abs(sa.mean() - closed.alpha.real()), 3 * sa.std_error());
  EXPECT_LE(std::abs(sb.mean() - closed.beta.real()), 3 * sb.std_error());
}

TEST(Channel, PairCoefficientCMatchesClosedForm) {
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const double p = i / 9.0, q = j / 9.0;
      const double c = 1 - (1 - p) * (1 - p) * (1 - q) * (1 - q / 3);
      EXPECT_NEAR(werner_pair_coeffs(make_channel(ChannelSpec::amp_then_dep(q, p))).c, c, 1e-10);
      EXPECT_NEAR(werner_pair_coeffs(make_channel(ChannelSpec::dep_then_amp(q, p))).c, c, 1e-10);
    }
  }
}

TEST(Channel, PairCoefficientsAmpDamp) {
  // Twirl of N(I) (x) N(I) with N(I) = I + qZ: Tr X = 4, Tr XS = 2 + 2q^2, so the
  // S weight is 2q^2/3 and a = q^2/3.
  const double q = 0.3;
  const Channel ch = make_channel(ChannelSpec::amp_damp(q));
  const auto pc = werner_pair_coeffs(ch);
  EXPECT_NEAR(pc.a, q * q / 3, 1e-12);
  EXPECT_NEAR(pc.c, 1 - (1 - q) * (1 - q / 3), 1e-12);
  EXPECT_NEAR(pc.a + 2 * pc.b, pc.c, 1e-15);
}

TEST(Channel, IteratedOverlapMatchesClosedForms) {
  for (double q : {0.1, 0.4, 0.9}) {
    for (double p : {0.05, 0.3, 0.8}) {
      const double lam = (1 - p) * (1 - q);
      const double k_ad = (q + p / 2 * (1 - q)) / (1 - lam);
      const double k_da = (p / 2 + (1 - p) * q) / (1 - lam);
      const auto ad = iterated_zero_overlap(make_channel(ChannelSpec::amp_then_dep(q, p)), 12);
      const auto da = iterated_zero_overlap(make_channel(ChannelSpec::dep_then_amp(q, p)), 12);
      ASSERT_TRUE(ad.closed_form_valid);
      ASSERT_TRUE(da.closed_form_valid);
      EXPECT_NEAR(ad.kappa, k_ad, 1e-12);
      EXPECT_NEAR(ad.tau, 1 - k_ad, 1e-12);
      EXPECT_NEAR(ad.lambda, lam, 1e-12);
      EXPECT_NEAR(da.kappa, k_da, 1e-12);
      EXPECT_NEAR(da.lambda, lam, 1e-12);
      for (int d = 0; d <= 12; ++d) {
        EXPECT_NEAR(ad.sequence[d], k_ad + (1 - k_ad) * std::pow(lam, d), 1e-12);
        EXPECT_NEAR(da.sequence[d], k_da + (1 - k_da) * std::pow(lam, d), 1e-12);
      }
      EXPECT_GE(ad.kappa, 0.5 - 1e-12);
      EXPECT_LE(ad.kappa, 1 + 1e-12);
    }
  }
  // Pure depolarizing: kappa = tau = 1/2, lambda = 1 - p.
  const auto dep = iterated_zero_overlap(make_channel(ChannelSpec::depolarizing(0.2)), 5);
  EXPECT_NEAR(dep.kappa, 0.5, 1e-12);
  EXPECT_NEAR(dep.tau, 0.5, 1e-12);
  EXPECT_NEAR(dep.lambda, 0.8, 1e-12);
}

TEST(Channel, IteratedOverlapBruteForce) {
  // Apply the channel d times to |0><0| directly.
  const Channel ch = make_channel(ChannelSpec::amp_then_dep(0.25, 0.15));
  const auto o = iterated_zero_overlap(ch, 6);
  Mat2c rho = Mat2c::Zero();
  rho(0, 0) = 1.0;
  for (int d = 0; d <= 6; ++d) {
    EXPECT_NEAR(o.sequence[d], rho(0, 0).real(), 1e-13);
    rho = amp_damp_oracle(depolarizing_oracle(rho, 0.15), 0.25);
  }
}

TEST(Channel, ConjugatedChannelBias) {
  // After U(theta, phi), N(I) picks up t03 = q cos 2 theta.
  const double q = 0.45;
  for (double theta : {0.0, 0.3, std::numbers::pi / 8, std::numbers::pi / 4}) {
    for (double phi : {0.0, 1.1}) {
      const Channel eff = effective_rotation_noise(q, theta, phi);
      EXPECT_NEAR(r_value(eff), q * std::cos(2 * theta), 1e-12);
      const Mat2c u = rotation_unitary(theta, phi);
      EXPECT_LT((u * u.adjoint() - Mat2c::Identity()).norm(), 1e-14);
      // N(I) = I + q U Z U^dagger: trace 2 and a Bloch vector of length q.
      const Mat2c shift = eff.apply(Mat2c::Identity()) - Mat2c::Identity();
      EXPECT_NEAR(std::abs(shift.trace()), 0.0, 1e-12);
      EXPECT_NEAR((shift * shift).trace().real() / 2, q * q, 1e-12);
    }
  }
}

TEST(Channel, TwirlStrength) {
  EXPECT_NEAR(twirl_strength(make_channel(ChannelSpec::depolarizing(0.3))), 0.3, 1e-12);
  const double q = 0.4;
  EXPECT_NEAR(twirl_strength(make_channel(ChannelSpec::amp_damp(q))),
              1 - (2 * std::sqrt(1 - q) + (1 - q)) / 3, 1e-12);
}

TEST(Channel, JsonRoundTrip) {
  const ChannelSpec s = ChannelSpec::dep_then_amp(0.125, 0.5);
  const nlohmann::json j = s;
  const auto back = j.get<ChannelSpec>();
  EXPECT_EQ(back.kind, s.kind);
  EXPECT_EQ(back.q, s.q);
  EXPECT_EQ(back.p, s.p);
  EXPECT_THROW(channel_kind_from_string("bitflip"), ParameterError);
}
