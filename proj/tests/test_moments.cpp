#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rcs/moments.hpp"

using namespace rcs;

namespace {

double binom(int n, int k) { return std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0)); }

}  // namespace

TEST(FirstMoment, SumsToOne) {
  for (int n : {1, 3, 6, 10}) {
    for (double r : {0.0, 0.2, 0.9}) {
      double s = 0.0;
      for (int w = 0; w <= n; ++w) s += binom(n, w) * first_moment(n, w, r);
      EXPECT_NEAR(s, 1.0, 1e-12);
    }
  }
}

TEST(FirstMoment, DecreasesWithWeight) {
  for (int w = 0; w < 8; ++w) EXPECT_GT(first_moment(8, w, 0.3), first_moment(8, w + 1, 0.3));
  EXPECT_NEAR(first_moment(5, 2, 0.0), 1.0 / 32, 1e-15);
}

TEST(FirstMoment, OrderingsUseTheirBias) {
  EXPECT_NEAR(first_moment(3, 1, ChannelKind::amp_then_dep, 0.5, 0.2), first_moment(3, 1, 0.2), 1e-15);
  EXPECT_NEAR(first_moment(3, 1, ChannelKind::dep_then_amp, 0.5, 0.2), first_moment(3, 1, 0.1), 1e-15);
  EXPECT_NEAR(marginal_first_moment(2, 1, ChannelKind::dep_then_amp, 0.5, 0.2), (1 - 0.01) / 4, 1e-15);
  EXPECT_NEAR(conditional_first_moment(0, 0.3), 0.65, 1e-15);
  EXPECT_NEAR(conditional_first_moment(1, 0.3), 0.35, 1e-15);
}

TEST(FirstMoment, LogDomainAgrees) {
  for (int w : {0, 10, 40}) EXPECT_NEAR(log_first_moment(40, w, 0.25), std::log(first_moment(40, w, 0.25)), 1e-10);
  EXPECT_TRUE(std::isfinite(log_first_moment(5000, 2000, 0.3)));
  EXPECT_THROW(first_moment(3, 4, 0.1), ParameterError);
}

TEST(CollisionBound, WorkedValue) {
  EXPECT_NEAR(collision_lower_bound(4, 0.1), 0.04060401, 1e-15);
  EXPECT_EQ(collision_lower_bound(7, 0.0), 0.0);
  EXPECT_NEAR(log_collision_lower_bound(4, 0.1), std::log(0.04060401), 1e-12);
  EXPECT_NEAR(collision_lower_bound_general(3, -0.2), collision_lower_bound(3, 0.2), 1e-15);
}

TEST(CollisionBound, RotationsUseSmallestBias) {
  const std::vector<double> thetas{0.1, 0.6, 0.3};
  double m = 1.0;
  for (double t : thetas) m = std::min(m, std::abs(std::cos(2 * t)));
  EXPECT_NEAR(collision_lower_bound_rotations(3, 0.5, thetas), std::pow(1 + 0.25 * m * m, 3) - 1, 1e-14);
}

TEST(SecondMoment, ParametersMatchClosedForms) {
  for (double p : {0.0, 0.2, 0.7}) {
    for (double q : {0.1, 0.5, 1.0}) {
      for (auto order : {ChannelKind::amp_then_dep, ChannelKind::dep_then_amp}) {
        const double r = order == ChannelKind::amp_then_dep ? q : q * (1 - p);
        const double c = 1 - (1 - p) * (1 - p) * (1 - q) * (1 - q / 3);
        const auto s = second_moment_params(order, p, q);
        EXPECT_NEAR(s.r, r, 1e-15);
        EXPECT_NEAR(s.c, c, 1e-15);
        EXPECT_NEAR(s.mu, 0.25 + r * r / (12 * c), 1e-15);
        EXPECT_NEAR(s.nu, 1.0 / 12 - r * r / (12 * c), 1e-15);
        EXPECT_NEAR(s.eta, 1 - r * r, 1e-15);
        for (int n : {2, 6}) {
          for (int d : {1, 5}) {
            const double b = std::pow(s.mu * s.eta, n) * std::exp(n * s.nu / s.mu * std::exp(-c * (d - 1)));
            EXPECT_NEAR(second_moment_bound(n, d, s), b, 1e-14 * b);
            if (b > 0) {
              EXPECT_NEAR(log_second_moment_bound(n, d, s), std::log(b), 1e-12);
            }
          }
        }
      }
    }
  }
  EXPECT_THROW(second_moment_params(ChannelKind::amp_then_dep, 0.0, 0.0), UnsupportedRegime);
}

TEST(SecondMoment, ParametersAreConsistent) {
  // mu + nu = 1/3, and with nu > 0 the bound falls with depth.
  const auto s = second_moment_params(ChannelKind::dep_then_amp, 0.3, 0.4);
  EXPECT_NEAR(s.mu + s.nu, 1.0 / 3, 1e-15);
  EXPECT_GT(second_moment_bound(4, 1, s), second_moment_bound(4, 10, s));
}

TEST(SecondMoment, RegimeMeansBoundBeatsUniform) {
  // The regime predicate is exactly the condition mu eta < 1/4.
  for (int i = 1; i <= 40; ++i) {
    for (int j = 0; j <= 40; ++j) {
      const double q = i / 40.0, p = j / 40.0;
      for (auto order : {ChannelKind::amp_then_dep, ChannelKind::dep_then_amp}) {
        const auto s = second_moment_params(order, p, q);
        EXPECT_EQ(regime_check(order, p, q), s.mu * s.eta < 0.25) << "p=" << p << " q=" << q;
      }
    }
  }
}

TEST(GeneralNoise, PairCoefficientsMatchWernerMap) {
  for (double q : {0.1, 0.6}) {
    for (double p : {0.0, 0.3}) {
      for (auto spec : {ChannelSpec::amp_then_dep(q, p), ChannelSpec::dep_then_amp(q, p)}) {
        const Channel ch = make_channel(spec);
        const auto g = general_noise_params(ch.ptm());
        const auto w = werner_pair_coeffs(ch);
        EXPECT_NEAR(g.a, w.a, 1e-12);
        EXPECT_NEAR(g.b, w.b, 1e-12);
        EXPECT_NEAR(g.c, w.c, 1e-12);
        EXPECT_NEAR(g.mu + g.nu, 1.0 / 3, 1e-12);
      }
    }
  }
}

TEST(GeneralNoise, IdentityIsOutsideTheRegime) {
  const auto g = general_noise_params(PauliTransferMap());
  EXPECT_TRUE(std::isnan(g.mu));
  EXPECT_FALSE(regime_check_general(g));
}

TEST(Lightcone, Terms) {
  const int n = 6, w = 2, d = 3;
  const double r = 0.2, kappa = 0.7, tau = 0.3, lambda = 0.5;
  const auto t = lightcone_terms(n, w, r, d, kappa, tau, lambda);
  EXPECT_NEAR(t.expected_a_sigma, 2 * w * r - n * r, 1e-15);
  const double shift = kappa - 0.5 + tau * std::pow(lambda, d);
  EXPECT_NEAR(t.z_square_lower, 4 * shift * shift / std::pow(30.0, d), 1e-18);
  EXPECT_NEAR(t.neglogp_lower,
              n * std::numbers::ln2 + t.expected_a_sigma + n / (4 * std::pow(4.0, d)) * t.z_square_lower, 1e-14);
  EXPECT_THROW(lightcone_terms(n, w, r, d, 0.4, tau, lambda), ParameterError);
}

TEST(Tail, PaleyZygmundAndMarkov) {
  EXPECT_NEAR(paley_zygmund_bound(0.5, 0.5, 0.5), 0.125, 1e-15);
  EXPECT_THROW(paley_zygmund_bound(1.0, 0.5, 0.5), ParameterError);
  EXPECT_THROW(paley_zygmund_bound(0.5, 0.5, 1.0), ParameterError);
  EXPECT_NEAR(chebyshev_tail_bound(2, 0.01, 0.5), 1 - 16 * 0.01 / 0.25, 1e-15);
}

TEST(LastLayer, FirstMomentAndRegime) {
  const double q = 0.4, theta = 0.3;
  EXPECT_NEAR(last_layer_first_moment(q, theta, 0), 0.5 + q * std::cos(2 * theta) / 2, 1e-15);
  EXPECT_NEAR(last_layer_first_moment(q, theta, 0) + last_layer_first_moment(q, theta, 1), 1.0, 1e-15);
  EXPECT_NEAR(bias(q, std::numbers::pi / 4), 0.0, 1e-15);
  const double floor = 4 - std::sqrt(15.0);
  const double at = std::acos(floor) / 2;
  EXPECT_TRUE(last_layer_regime({at - 1e-6, 0.0}));
  EXPECT_FALSE(last_layer_regime({at + 1e-6, 0.0}));
  EXPECT_THROW(last_layer_first_moment(q, theta, 2), ParameterError);
}

TEST(Formulas, DispatchAndErrors) {
  const auto p = evaluate_formula("collision_bound", {{"n", 4}, {"r", 0.1}});
  EXPECT_NEAR(p.value, 0.04060401, 1e-15);
  EXPECT_FALSE(p.log_domain);
  EXPECT_TRUE(evaluate_formula("collision_bound", {{"n", 100}, {"r", 0.1}}).log_domain);
  const auto s = evaluate_formula("second_moment_bound", {{"n", 4}, {"d", 3}, {"p", 0.1}, {"q", 0.3}});
  EXPECT_TRUE(s.details.contains("mu"));
  EXPECT_THROW(evaluate_formula("nope", nlohmann::json::object()), ParameterError);
  EXPECT_THROW(evaluate_formula("first_moment", {{"n", 4}}), ParameterError);
  for (const auto& id : formula_ids()) EXPECT_FALSE(id.empty());
}
