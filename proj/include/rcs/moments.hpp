#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "rcs/channel.hpp"

namespace rcs {

// Above this many qubits the log-domain evaluators are the canonical output.
inline constexpr int kLogDomainThreshold = 50;

// (1 - r)^w (1 + r)^(n - w) / 2^n.
double first_moment(int n, int weight, double r);
double first_moment(int n, int weight, ChannelKind order, double p, double q);
double log_first_moment(int n, int weight, double r);
// Same form for a substring y of length |y| and weight w_y.
double marginal_first_moment(int length, int weight, double r);
double marginal_first_moment(int length, int weight, ChannelKind order, double p, double q);
// E[Pr(X_i = x_i | ...)] = <x_i|N(I)|x_i> / 2 = (1 +- r) / 2.
double conditional_first_moment(int bit, double r);

double collision_lower_bound(int n, double r);
double collision_lower_bound_general(int n, double t03);
double collision_lower_bound_rotations(int n, double q, const std::vector<double>& thetas);
// log of (1 + x)^n - 1 with x = r^2, stable for large n.
double log_collision_lower_bound(int n, double r);

struct SecondMomentParams {
  double mu = 0.0;
  double nu = 0.0;
  double eta = 0.0;  // 1 - r^2
  double c = 0.0;
  double r = 0.0;
};

// Standard orderings only. (p, q) = (0, 0) throws UnsupportedRegime.
SecondMomentParams second_moment_params(ChannelKind order, double p, double q);
double second_moment_bound(int n, int d, const SecondMomentParams& params);
double log_second_moment_bound(int n, int d, const SecondMomentParams& params);

bool regime_check(ChannelKind order, double p, double q);

struct GeneralNoiseParams {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double mu = 0.0;  // NaN when the unital block has unit norm (identity-like maps)
  double nu = 0.0;
  double eta = 0.0;  // square-root-max form, distinct from SecondMomentParams::eta
};

GeneralNoiseParams general_noise_params(const PauliTransferMap& t);
bool regime_check_general(const GeneralNoiseParams& params);

struct LightconeTerms {
  double expected_a_sigma = 0.0;
  double z_square_lower = 0.0;
  double neglogp_lower = 0.0;
};
LightconeTerms lightcone_terms(int n, int weight, double r, int d, double kappa, double tau, double lambda);

// Finite-n stand-in for the low-depth limit statement: lower bound on
// E[-log p_x], the Chebyshev deviation k = n^0.01 sqrt(2n), and the implied
// probability that p_x < 2^-n.
struct LowDepthDiagnostic {
  double mean_lower = 0.0;
  double deviation = 0.0;
  double implied_probability = 0.0;
};
LowDepthDiagnostic low_depth_diagnostic(int n, int weight, double r, int d, double kappa, double tau,
                                        double lambda);

double paley_zygmund_bound(double mean, double second_moment, double alpha);
// Lower bound on Pr[p_x < alpha / 2^n] given E[p_x^2], by Markov on p_x^2.
double chebyshev_tail_bound(int n, double second_moment, double alpha);

double last_layer_first_moment(double q, double theta, int bit);
double bias(double q, double theta);
bool last_layer_regime(const std::vector<double>& thetas);

// A closed-form evaluation with its inputs, for self-describing output rows.
struct Prediction {
  std::string formula;
  nlohmann::json inputs;
  double value = 0.0;
  bool log_domain = false;
  nlohmann::json details = nlohmann::json::object();
};

std::vector<std::string> formula_ids();
// Throws ParameterError for unknown formulas or missing inputs.
Prediction evaluate_formula(const std::string& formula, const nlohmann::json& inputs);

}  // namespace rcs
