#include "rcs/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace rcs {

namespace {

void check_weight(int n, int weight) {
  if (n < 1) throw ParameterError("n must be at least 1");
  if (weight < 0 || weight > n) throw ParameterError("weight must lie in [0, n]");
}

void check_bias(double r, const char* name) {
  if (!std::isfinite(r) || r < -1.0 || r > 1.0) throw ParameterError(std::string(name) + " must lie in [-1, 1]");
}

double standard_r(ChannelKind order, double p, double q) {
  if (order == ChannelKind::general_ptm) throw ParameterError("a standard channel ordering is required");
  return r_value(ChannelSpec{order, q, p, {}});
}

// Reduce the single-channel kinds to the two compositions.
void normalize(ChannelKind& order, double& p, double& q) {
  if (order == ChannelKind::amp_damp) {
    order = ChannelKind::amp_then_dep;
    p = 0.0;
  } else if (order == ChannelKind::depolarizing) {
    order = ChannelKind::amp_then_dep;
    q = 0.0;
  }
}

double log_expm1_pow(int n, double x) {
  // log((1 + x)^n - 1)
  const double s = n * std::log1p(x);
  return s > 30.0 ? s + std::log1p(-std::exp(-s)) : std::log(std::expm1(s));
}

}  // namespace

double first_moment(int n, int weight, double r) {
  check_weight(n, weight);
  check_bias(r, "r");
  if (n > kLogDomainThreshold) return std::exp(log_first_moment(n, weight, r));
  return std::pow(1.0 - r, weight) * std::pow(1.0 + r, n - weight) / std::ldexp(1.0, n);
}

double first_moment(int n, int weight, ChannelKind order, double p, double q) {
  return first_moment(n, weight, standard_r(order, p, q));
}

double log_first_moment(int n, int weight, double r) {
  check_weight(n, weight);
  check_bias(r, "r");
  return weight * std::log1p(-r) + (n - weight) * std::log1p(r) - n * std::numbers::ln2;
}

double marginal_first_moment(int length, int weight, double r) { return first_moment(length, weight, r); }

double marginal_first_moment(int length, int weight, ChannelKind order, double p, double q) {
  return first_moment(length, weight, standard_r(order, p, q));
}

double conditional_first_moment(int bit, double r) {
  check_bias(r, "r");
  if (bit != 0 && bit != 1) throw ParameterError("bit must be 0 or 1");
  return 0.5 * (bit == 0 ? 1.0 + r : 1.0 - r);
}

double collision_lower_bound(int n, double r) {
  check_bias(r, "r");
  if (n < 1) throw ParameterError("n must be at least 1");
  return std::expm1(n * std::log1p(r * r));
}

double collision_lower_bound_general(int n, double t03) { return collision_lower_bound(n, t03); }

double collision_lower_bound_rotations(int n, double q, const std::vector<double>& thetas) {
  if (thetas.empty()) throw ParameterError("at least one rotation angle is required");
  double worst = std::numeric_limits<double>::infinity();
  for (double th : thetas) worst = std::min(worst, std::abs(std::cos(2.0 * th)));
  return collision_lower_bound(n, q * worst);
}

double log_collision_lower_bound(int n, double r) {
  check_bias(r, "r");
  if (r == 0.0) return -std::numeric_limits<double>::infinity();
  return log_expm1_pow(n, r * r);
}

SecondMomentParams second_moment_params(ChannelKind order, double p, double q) {
  normalize(order, p, q);
  const double r = standard_r(order, p, q);
  if (p == 0.0 && q == 0.0) throw UnsupportedRegime("the noiseless case (p, q) = (0, 0) is excluded");
  SecondMomentParams s;
  s.r = r;
  s.c = 1.0 - (1.0 - p) * (1.0 - p) * (1.0 - q) * (1.0 - q / 3.0);
  s.mu = 0.25 + r * r / (12.0 * s.c);
  s.nu = 1.0 / 12.0 - r * r / (12.0 * s.c);
  s.eta = 1.0 - r * r;
  return s;
}

double log_second_moment_bound(int n, int d, const SecondMomentParams& s) {
  if (n < 1 || d < 1) throw ParameterError("n and d must be at least 1");
  return n * (std::log(s.mu) + std::log(s.eta)) + n * (s.nu / s.mu) * std::exp(-s.c * (d - 1));
}

double second_moment_bound(int n, int d, const SecondMomentParams& s) {
  if (n < 1 || d < 1) throw ParameterError("n and d must be at least 1");
  if (n > kLogDomainThreshold) return std::exp(log_second_moment_bound(n, d, s));
  return std::pow(s.mu, n) * std::pow(s.eta, n) * std::exp(n * (s.nu / s.mu) * std::exp(-s.c * (d - 1)));
}

bool regime_check(ChannelKind order, double p, double q) {
  normalize(order, p, q);
  if (standard_r(order, p, q) == 0.0) return false;
  const double s = (1.0 - p) * (1.0 - p);
  if (order == ChannelKind::amp_then_dep) {
    if (q == 1.0) return true;  // left side diverges
    return (q * q + 2.0) / ((q - 3.0) * (q - 1.0)) > s;
  }
  return q > 0.75 - 1.0 / (2.0 * s);
}

GeneralNoiseParams general_noise_params(const PauliTransferMap& t) {
  auto sq = [&](int i, int j) { return t.coeff(i, j) * t.coeff(i, j); };
  const double big_a = sq(0, 1) + sq(0, 2) + sq(0, 3);
  double big_t = 0.0;
  for (int i = 1; i < 4; ++i)
    for (int j = 1; j < 4; ++j) big_t += sq(i, j);
  GeneralNoiseParams g;
  g.a = big_a / 3.0;
  g.b = 0.5 - (big_a + big_t) / 6.0;
  g.c = g.a + 2.0 * g.b;
  const double den = big_t - 3.0;
  if (den == 0.0) {
    g.mu = g.nu = std::numeric_limits<double>::quiet_NaN();
  } else {
    g.mu = (-big_a + big_t - 3.0) / (4.0 * den);
    g.nu = (3.0 * big_a + big_t - 3.0) / (12.0 * den);
  }
  const double shifted = (1.0 + t.coeff(0, 3)) * (1.0 + t.coeff(0, 3));
  g.eta = std::sqrt(std::max(shifted, 0.5 * (sq(1, 3) + sq(2, 3) + sq(3, 3)) + 0.5 * shifted));
  return g;
}

bool regime_check_general(const GeneralNoiseParams& g) {
  if (!std::isfinite(g.mu) || !std::isfinite(g.nu)) return false;
  const double prod = 4.0 * g.mu * g.eta;
  return g.mu >= 0.0 && g.nu >= 0.0 && g.c > 0.0 && g.c <= 1.0 && prod >= 0.0 && prod < 1.0;
}

LightconeTerms lightcone_terms(int n, int weight, double r, int d, double kappa, double tau, double lambda) {
  check_weight(n, weight);
  if (d < 0) throw ParameterError("depth must be non-negative");
  if (kappa < 0.5) throw ParameterError("kappa must be at least 1/2");
  LightconeTerms t;
  t.expected_a_sigma = 2.0 * weight * r - n * r;
  const double shift = kappa - 0.5 + tau * std::pow(lambda, d);
  t.z_square_lower = 4.0 * shift * shift / std::pow(30.0, d);
  t.neglogp_lower =
      n * std::numbers::ln2 + t.expected_a_sigma + n / (4.0 * std::pow(4.0, d)) * t.z_square_lower;
  return t;
}

LowDepthDiagnostic low_depth_diagnostic(int n, int weight, double r, int d, double kappa, double tau,
                                        double lambda) {
  const auto t = lightcone_terms(n, weight, r, d, kappa, tau, lambda);
  LowDepthDiagnostic out;
  out.mean_lower = t.neglogp_lower;
  out.deviation = std::pow(n, 0.01) * std::sqrt(2.0 * n);
  out.implied_probability = 1.0 - std::pow(n, -0.02);
  return out;
}

double paley_zygmund_bound(double mean, double second_moment, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
  if (second_moment < mean * mean || second_moment <= 0.0) {
    throw ParameterError("second moment is smaller than the squared mean");
  }
  return (1.0 - alpha) * (1.0 - alpha) * mean * mean / second_moment;
}

double chebyshev_tail_bound(int n, double second_moment, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("alpha must lie in (0, 1]");
  return 1.0 - std::ldexp(second_moment, 2 * n) / (alpha * alpha);
}

double last_layer_first_moment(double q, double theta, int bit) {
  if (bit != 0 && bit != 1) throw ParameterError("bit must be 0 or 1");
  const double b = bias(q, theta);
  return 0.5 + (bit == 0 ? 0.5 : -0.5) * b;
}

double bias(double q, double theta) {
  if (!std::isfinite(q) || q < 0.0 || q > 1.0) throw ParameterError("q must lie in [0, 1]");
  return q * std::cos(2.0 * theta);
}

bool last_layer_regime(const std::vector<double>& thetas) {
  const double floor = 4.0 - std::sqrt(15.0);
  return std::all_of(thetas.begin(), thetas.end(),
                     [&](double th) { return std::abs(std::cos(2.0 * th)) > floor; });
}

namespace {

int get_int(const nlohmann::json& in, const char* key) {
  if (!in.contains(key)) throw ParameterError(std::string("missing input '") + key + "'");
  return in.at(key).get<int>();
}

double get_double(const nlohmann::json& in, const char* key) {
  if (!in.contains(key)) throw ParameterError(std::string("missing input '") + key + "'");
  return in.at(key).get<double>();
}

double r_input(const nlohmann::json& in) {
  if (in.contains("r")) return in.at("r").get<double>();
  return standard_r(channel_kind_from_string(in.value("order", std::string("amp_then_dep"))),
                    in.value("p", 0.0), in.value("q", 0.0));
}

std::vector<double> thetas_input(const nlohmann::json& in) {
  if (!in.contains("thetas")) throw ParameterError("missing input 'thetas'");
  return in.at("thetas").get<std::vector<double>>();
}

}  // namespace

std::vector<std::string> formula_ids() {
  return {"first_moment",        "marginal_first_moment",   "conditional_first_moment", "collision_bound",
          "collision_bound_general", "collision_bound_rotations", "second_moment_bound",  "regime",
          "lightcone_terms",     "paley_zygmund",           "chebyshev_tail",          "last_layer_first_moment",
          "bias",                "last_layer_regime"};
}

Prediction evaluate_formula(const std::string& formula, const nlohmann::json& in) {
  Prediction out{formula, in, 0.0, false, nlohmann::json::object()};
  if (formula == "first_moment" || formula == "marginal_first_moment") {
    const int n = get_int(in, "n");
    const int w = get_int(in, "w");
    const double r = r_input(in);
    if (n > kLogDomainThreshold) {
      out.value = log_first_moment(n, w, r);
      out.log_domain = true;
    } else {
      out.value = first_moment(n, w, r);
    }
  } else if (formula == "conditional_first_moment") {
    out.value = conditional_first_moment(get_int(in, "bit"), r_input(in));
  } else if (formula == "collision_bound" || formula == "collision_bound_general") {
    const int n = get_int(in, "n");
    const double r = formula == "collision_bound" ? r_input(in) : get_double(in, "t03");
    if (n > kLogDomainThreshold) {
      out.value = log_collision_lower_bound(n, r);
      out.log_domain = true;
    } else {
      out.value = collision_lower_bound(n, r);
    }
  } else if (formula == "collision_bound_rotations") {
    out.value = collision_lower_bound_rotations(get_int(in, "n"), get_double(in, "q"), thetas_input(in));
  } else if (formula == "second_moment_bound") {
    const auto order = channel_kind_from_string(in.value("order", std::string("amp_then_dep")));
    const auto s = second_moment_params(order, in.value("p", 0.0), in.value("q", 0.0));
    const int n = get_int(in, "n");
    const int d = get_int(in, "d");
    if (n > kLogDomainThreshold) {
      out.value = log_second_moment_bound(n, d, s);
      out.log_domain = true;
    } else {
      out.value = second_moment_bound(n, d, s);
    }
    out.details["mu"] = s.mu;
    out.details["nu"] = s.nu;
    out.details["eta"] = s.eta;
    out.details["c"] = s.c;
  } else if (formula == "regime") {
    const auto order = channel_kind_from_string(in.value("order", std::string("amp_then_dep")));
    out.value = regime_check(order, in.value("p", 0.0), in.value("q", 0.0)) ? 1.0 : 0.0;
  } else if (formula == "lightcone_terms") {
    const auto t = lightcone_terms(get_int(in, "n"), get_int(in, "w"), r_input(in), get_int(in, "d"),
                                   get_double(in, "kappa"), get_double(in, "tau"), get_double(in, "lambda"));
    out.value = t.neglogp_lower;
    out.details["expected_a_sigma"] = t.expected_a_sigma;
    out.details["z_square_lower"] = t.z_square_lower;
  } else if (formula == "paley_zygmund") {
    out.value = paley_zygmund_bound(get_double(in, "mean"), get_double(in, "second"), get_double(in, "alpha"));
  } else if (formula == "chebyshev_tail") {
    out.value = chebyshev_tail_bound(get_int(in, "n"), get_double(in, "second"), get_double(in, "alpha"));
  } else if (formula == "last_layer_first_moment") {
    out.value = last_layer_first_moment(get_double(in, "q"), get_double(in, "theta"), get_int(in, "bit"));
  } else if (formula == "bias") {
    out.value = bias(get_double(in, "q"), get_double(in, "theta"));
  } else if (formula == "last_layer_regime") {
    out.value = last_layer_regime(thetas_input(in)) ? 1.0 : 0.0;
  } else {
    throw ParameterError("unknown formula '" + formula + "'");
  }
  return out;
}

}  // namespace rcs
