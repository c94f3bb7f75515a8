#include "rcs/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>

#include "rcs/harness.hpp"
#include "rcs/moments.hpp"
#include "rcs/statmech.hpp"
#include "rcs/stats.hpp"
#include "rcs/two_copy.hpp"

namespace rcs {

namespace {

constexpr double kExactTol = 1e-10;
constexpr double kRecursionTol = 1e-12;
constexpr double kSeMargin = 3.0;
constexpr double kNegativeControlMargin = 5.0;

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const char* order_name(ChannelKind k) { return k == ChannelKind::amp_then_dep ? "amp_then_dep" : "dep_then_amp"; }

ChannelSpec ordered(ChannelKind k, double q, double p) {
  return k == ChannelKind::amp_then_dep ? ChannelSpec::amp_then_dep(q, p) : ChannelSpec::dep_then_amp(q, p);
}

class Rows {
 public:
  explicit Rows(std::string suite) : suite_(std::move(suite)) {}

  // Exact relation with absolute tolerance.
  void exact(const std::string& check, const std::string& params, double value, double target,
             const std::string& relation, double tol) {
    VerifyRow r{suite_, check, params, value, target, relation, 0.0, "abs", false};
    if (relation == "==") {
      r.margin = std::abs(value - target);
      r.pass = r.margin <= tol;
    } else {
      r.margin = relation == ">=" ? value - target : target - value;
      r.pass = r.margin >= -tol;
    }
    rows.push_back(r);
  }

  // Monte Carlo relation at kSeMargin standard errors.
  void estimate(const std::string& check, const std::string& params, double value, double se, double target,
                const std::string& relation, double k = kSeMargin) {
    if (!(se > 0.0)) {
      exact(check, params, value, target, relation, 1e-12 * std::max(1.0, std::abs(target)));
      return;
    }
    VerifyRow r{suite_, check, params, value, target, relation, 0.0, "se", false};
    if (relation == "==") {
      r.margin = std::abs(value - target) / se;
      r.pass = r.margin <= k;
    } else {
      r.margin = (relation == ">=" ? value - target : target - value) / se;
      r.pass = r.margin >= -k;
    }
    rows.push_back(r);
  }

  void records(const std::string& params, const ExperimentResult& res) {
    for (const auto& rec : res.records) {
      const std::string check = rec.estimator + ":" + rec.bitstring;
      if (rec.reference) estimate(check, params, rec.value, rec.std_error, *rec.reference, "==");
      if (rec.bound && rec.relation != Relation::none) {
        estimate(check + ":bound", params, rec.value, rec.std_error, *rec.bound,
                 rec.relation == Relation::at_least ? ">=" : "<=");
      }
    }
    if (!res.reliable) {
      exact("exclusion_rate", params, res.exclusion_rate, 0.10, "<=", 0.0);
    }
  }

  std::vector<VerifyRow> rows;

 private:
  std::string suite_;
};

ExperimentConfig base_config(const VerifyOptions& opts, int n, int depth, std::uint64_t samples) {
  ExperimentConfig cfg;
  cfg.n = opts.n.value_or(n);
  cfg.depth = opts.depth.value_or(depth);
  cfg.samples = opts.samples.value_or(samples);
  cfg.seed = opts.seed;
  cfg.workers = opts.workers;
  cfg.margin = kSeMargin;
  return cfg;
}

std::vector<int> range_or(const std::optional<int>& fixed, int lo, int hi) {
  if (fixed) return {*fixed};
  std::vector<int> out;
  for (int v = lo; v <= hi; ++v) out.push_back(v);
  return out;
}

Mat2c random_hermitian(CounterRng& rng) {
  Mat2c a;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) a(i, j) = cdouble(2.0 * uniform01(rng) - 1.0, 2.0 * uniform01(rng) - 1.0);
  }
  return (a + a.adjoint()) / 2.0;
}

// --- suites ------------------------------------------------------------------

std::vector<VerifyRow> channel_algebra(const VerifyOptions& opts) {
  Rows out("channel_algebra");
  CounterRng rng(opts.seed, 0xa15e);
  for (auto kind : {ChannelKind::amp_then_dep, ChannelKind::dep_then_amp}) {
    double cptp = 0.0, duality = 0.0, unital = 0.0, compose_err = 0.0, expand = 0.0, pair_c = 0.0;
    for (int i = 0; i < 10; ++i) {
      for (int j = 0; j < 10; ++j) {
        const double p = i / 9.0, q = j / 9.0;
        const Channel ch = make_channel(ordered(kind, q, p));
        cptp = std::max({cptp, ch.kraus()->completeness_error(), -ch.min_choi_eigenvalue()});
        for (int t = 0; t < 4; ++t) {
          const Mat2c a = random_hermitian(rng), b = random_hermitian(rng);
          duality = std::max(duality, std::abs((a * ch.apply(b)).trace() - (ch.apply_adjoint(a) * b).trace()));
        }
        unital = std::max(unital, (ch.apply_adjoint(Mat2c::Identity()) - Mat2c::Identity()).norm());

        const KrausChannel amp = amplitude_damping_kraus(q), dep = depolarizing_kraus(p);
        const bool amp_last = kind == ChannelKind::amp_then_dep;
        const Eigen::Matrix4d composed = ptm_of(amp_last ? compose(amp, dep) : compose(dep, amp)).matrix();
        const Eigen::Matrix4d product =
            amp_last ? (ptm_of(amp) * ptm_of(dep)).matrix() : (ptm_of(dep) * ptm_of(amp)).matrix();
        compose_err = std::max({compose_err, (composed - product).norm(), (composed - ch.ptm().matrix()).norm()});

        const double r = amp_last ? q : q * (1.0 - p);
        const Mat2c expected = r * Mat2c::Identity() + (1.0 - q) * (1.0 - p) * pauli<double>(3);
        expand = std::max(expand, (ch.apply_adjoint(pauli<double>(3)) - expected).norm());

        const double c = 1.0 - (1.0 - p) * (1.0 - p) * (1.0 - q) * (1.0 - q / 3.0);
        pair_c = std::max(pair_c, std::abs(werner_pair_coeffs(ch).c - c));
      }
    }
    const std::string params = fmt("order=%s,grid=10x10", order_name(kind));
    out.exact("cptp", params, cptp, 0.0, "==", kExactTol);
    out.exact("adjoint_duality", params, duality, 0.0, "==", kExactTol);
    out.exact("adjoint_unital", params, unital, 0.0, "==", kExactTol);
    out.exact("ptm_composition", params, compose_err, 0.0, "==", kExactTol);
    out.exact("adjoint_z_expansion", params, expand, 0.0, "==", kExactTol);
    out.exact("pair_c", params, pair_c, 0.0, "==", kExactTol);
  }
  return out.rows;
}

std::vector<VerifyRow> first_moments(const VerifyOptions& opts) {
  Rows out("first_moments");
  ExperimentConfig cfg = base_config(opts, 4, 4, 20000);
  cfg.channel = ChannelSpec::amp_then_dep(0.2, 0.1);
  cfg.targets = {"px", "marginal", "conditional"};
  cfg.bitstrings.kind = BitstringSelector::Kind::all;
  const std::string params = fmt("n=%d,d=%d,q=0.2,p=0.1,samples=%llu,seed=%llu", cfg.n, cfg.depth,
                                 static_cast<unsigned long long>(cfg.samples),
                                 static_cast<unsigned long long>(cfg.seed));
  out.records(params, run_experiment(cfg));

  // Exact gate average against the closed form.
  const NoisePlacement placement = make_placement(cfg);
  const Eigen::VectorXd exact = first_moment_propagate({cfg.n, cfg.depth, cfg.layout}, placement);
  const double r = r_value(placement.channel);
  double err = 0.0;
  for (Eigen::Index x = 0; x < exact.size(); ++x) {
    err = std::max(err, std::abs(exact(x) - first_moment(cfg.n, hamming_weight(static_cast<std::uint64_t>(x)), r)));
  }
  out.exact("exact_first_moment", fmt("n=%d,d=%d,q=0.2,p=0.1", cfg.n, cfg.depth), err, 0.0, "==", 1e-12);
  return out.rows;
}

std::vector<VerifyRow> collision_bounds(const VerifyOptions& opts) {
  Rows out("collision_bounds");
  const std::vector<std::pair<double, double>> grid{{0.1, 0.1}, {0.1, 0.5}, {0.1, 0.9}, {0.5, 0.1}, {0.5, 0.5},
                                                    {0.5, 0.9}, {0.9, 0.1}, {0.9, 0.5}, {0.9, 0.9}, {0.0, 0.3},
                                                    {0.3, 0.0}, {0.0, 1.0}};  // (p, q)
  for (auto kind : {ChannelKind::amp_then_dep, ChannelKind::dep_then_amp}) {
    for (int n : range_or(opts.n, 2, 5)) {
      for (int d : range_or(opts.depth, 1, 6)) {
        double worst = std::numeric_limits<double>::infinity(), value = 0.0, bound = 0.0;
        for (auto [p, q] : grid) {
          NoisePlacement placement;
          placement.channel = make_channel(ordered(kind, q, p));
          const double z = two_copy_moment_propagate({n, d, Layout::brickwork}, placement).scaled_collision();
          const double lb = collision_lower_bound(n, r_value(placement.channel));
          if (z - lb < worst) {
            worst = z - lb;
            value = z;
            bound = lb;
          }
        }
        out.exact("upper_bound", fmt("order=%s,n=%d,d=%d,worst_of=%zu", order_name(kind), n, d, grid.size()),
                  value, bound, ">=", 1e-12);
      }
    }
  }

  // Random physical maps from Stinespring isometries.
  const int n = opts.n.value_or(4), d = opts.depth.value_or(3);
  for (int k = 0; k < 20; ++k) {
    CounterRng rng(opts.seed, 0xc011 + static_cast<std::uint64_t>(k));
    const MatXc v = sample_haar_unitary(4, rng).leftCols(2);
    const KrausChannel kraus({v.topRows(2), v.bottomRows(2)});
    NoisePlacement placement;
    placement.channel = make_channel(ChannelSpec::general(ptm_of(kraus).matrix()));
    const double t03 = placement.channel.coeff(0, 3);
    const double z = two_copy_moment_propagate({n, d, Layout::brickwork}, placement).scaled_collision();
    out.exact("general_bound", fmt("map=%d,n=%d,d=%d,t03=%.6f", k, n, d, t03), z,
              collision_lower_bound_general(n, t03), ">=", 1e-12);
  }
  return out.rows;
}

std::vector<VerifyRow> second_moment_chain(const VerifyOptions& opts) {
  Rows out("second_moment_chain");
  const std::vector<int> ns = opts.n ? std::vector<int>{*opts.n} : std::vector<int>{2, 4};
  for (auto kind : {ChannelKind::amp_then_dep, ChannelKind::dep_then_amp}) {
    for (int n : ns) {
      for (int d : range_or(opts.depth, 2, 8)) {
        double ub_slack = std::numeric_limits<double>::infinity(), ub_value = 0.0, ub_bound = 0.0;
        double mono_slack = ub_slack, mono_value = 0.0, mono_bound = 0.0;
        double pipe_slack = ub_slack, pipe_value = 0.0, pipe_bound = 0.0;
        for (double p : {0.1, 0.3, 0.5}) {
          for (double q : {0.2, 0.5, 0.8}) {
            const Channel ch = make_channel(ordered(kind, q, p));
            const CircuitShape shape{n, d, Layout::brickwork};
            NoisePlacement placement;
            placement.channel = ch;
            const SecondMoments exact = two_copy_moment_propagate(shape, placement);
            const double bound = second_moment_bound(n, d, second_moment_params(kind, p, q));
            const auto pc = werner_pair_coeffs(ch);
            const double modified = modified_ensemble_second_moment(n, d, pc.a, pc.b);
            const double r = r_value(ch);
            for (std::uint64_t x = 0; x < (std::uint64_t(1) << n); ++x) {
              const double e = exact.per_string(static_cast<Eigen::Index>(x));
              if (2 * hamming_weight(x) >= n && bound - e < ub_slack) {
                ub_slack = bound - e;
                ub_value = e;
                ub_bound = bound;
              }
              const double pipeline = modified * last_layer_correction(to_bitstring(x, n), r);
              if (pipeline - e < pipe_slack) {
                pipe_slack = pipeline - e;
                pipe_value = e;
                pipe_bound = pipeline;
              }
              const auto mono = monotonicity_check(shape, ch, x);
              if (mono.slack < mono_slack) {
                mono_slack = mono.slack;
                mono_value = mono.exact;
                mono_bound = mono.modified;
              }
            }
          }
        }
        const std::string params = fmt("order=%s,n=%d,d=%d,points=9", order_name(kind), n, d);
        out.exact("upper_bound", params, ub_value, ub_bound, "<=", 1e-12);
        // Nonnegative slack is required, so no tolerance here.
        out.exact("monotonicity", params, mono_value, mono_bound, "<=", 0.0);
        out.exact("pipeline", params, pipe_value, pipe_bound, "<=", 1e-12);
      }
    }
  }

  // Trajectory dynamic program against the doubled-state propagation.
  double worst = 0.0;
  for (int n = 2; n <= 3; ++n) {
    for (int d = 1; d <= 6; ++d) {
      for (auto mode : {PlacementMode::after_every_gate_with_final_layer, PlacementMode::no_final_noise_layer}) {
        const Channel ch = make_channel(ChannelSpec::amp_then_dep(0.3, 0.2));
        NoisePlacement placement;
        placement.mode = mode;
        placement.channel = ch;
        const CircuitShape shape{n, d, Layout::brickwork};
        const SecondMoments exact = two_copy_moment_propagate(shape, placement);
        for (std::uint64_t x = 0; x < (std::uint64_t(1) << n); ++x) {
          worst = std::max(worst, std::abs(trajectory_second_moment(shape, ch, mode, x) -
                                           exact.per_string(static_cast<Eigen::Index>(x))));
        }
      }
    }
  }
  out.exact("trajectory_dp", "n<=3,d<=6,q=0.3,p=0.2", worst, 0.0, "==", 1e-12);
  return out.rows;
}

std::vector<VerifyRow> statmech_recursions(const VerifyOptions& opts) {
  Rows out("statmech_recursions");
  double prop = 0.0, seq = 0.0, from_channel = 0.0, cons_xy = 0.0, cons_zw = 0.0;
  double pos1 = std::numeric_limits<double>::infinity(), pos2 = pos1;
  for (auto kind : {ChannelKind::amp_then_dep, ChannelKind::dep_then_amp}) {
    for (int i = 0; i < 10; ++i) {
      for (int j = 0; j < 10; ++j) {
        const double p = i / 9.0, q = j / 9.0;
        const Channel ch = make_channel(ordered(kind, q, p));
        const auto pc = werner_pair_coeffs(ch);
        for (int m = 0; m <= 50; ++m) {
          const auto v = werner_state(pc.a, pc.b, m);
          if (v.closed_form_valid) prop = std::max(prop, std::abs(v.closed - v.iterated));
          const auto it = sequence_coeffs_iterated(pc.a, pc.b, m);
          const auto cf = sequence_coeffs(pc.a, pc.b, m);
          seq = std::max({seq, std::abs(cf.x - it.x), std::abs(cf.y - it.y), std::abs(cf.z - it.z),
                          std::abs(cf.w - it.w)});
          for (const auto& s : {it, cf}) {
            cons_xy = std::max(cons_xy, std::abs(s.x + s.y / 2.0 - 1.0));
            cons_zw = std::max(cons_zw, std::abs(s.z + s.w / 2.0 - 0.5));
            const double u = s.x + s.y, vv = s.z + s.w;
            pos1 = std::min(pos1, 2.0 * vv - u);
            pos2 = std::min(pos2, 2.0 * u - vv - 1.0);
          }
          if (m <= 20) {
            const auto ch_seq = sequence_coeffs_from_channel(ch, m);
            from_channel = std::max({from_channel, std::abs(ch_seq.x - it.x), std::abs(ch_seq.y - it.y),
                                     std::abs(ch_seq.z - it.z), std::abs(ch_seq.w - it.w)});
          }
        }
      }
    }
  }
  const std::string grid = "both orders,grid=10x10,m<=50";
  out.exact("werner_state_closed_vs_iterated", grid, prop, 0.0, "==", kRecursionTol);
  out.exact("sequence_closed_vs_iterated", grid, seq, 0.0, "==", kRecursionTol);
  out.exact("sequence_from_channel", "both orders,grid=10x10,m<=20", from_channel, 0.0, "==", kRecursionTol);
  out.exact("conservation_xy", grid, cons_xy, 0.0, "==", kRecursionTol);
  out.exact("conservation_zw_half", grid, cons_zw, 0.0, "==", kRecursionTol);
  out.exact("positivity_2v_minus_u", grid, pos1, 0.0, ">=", kRecursionTol);
  out.exact("positivity_2u_minus_v", grid, pos2, 0.0, ">=", kRecursionTol);

  // Werner coefficients by sampling single-qubit Haar unitaries on both copies.
  const std::uint64_t samples = opts.samples.value_or(100000);
  const Mat4c swap = swap_operator();
  const std::vector<ChannelSpec> specs{ChannelSpec::amp_then_dep(0.3, 0.1), ChannelSpec::dep_then_amp(0.4, 0.2)};
  for (std::size_t c = 0; c < specs.size(); ++c) {
    const Channel ch = make_channel(specs[c]);
    for (int which = 0; which < 2; ++which) {
      const Mat4c x = apply_doubled(ch, which == 0 ? Mat4c(Mat4c::Identity()) : swap);
      std::vector<double> alpha(samples), beta(samples);
      for (std::uint64_t s = 0; s < samples; ++s) {
        CounterRng rng(opts.seed, 0x3e7e00000000ULL + (c * 2 + which) * samples + s);
        const MatXc u = sample_haar_unitary(2, rng);
        Mat4c uu;
        for (int a = 0; a < 2; ++a) {
          for (int b = 0; b < 2; ++b) uu.block<2, 2>(2 * a, 2 * b) = u(a, b) * u;
        }
        const Mat4c y = uu * x * uu.adjoint();
        alpha[s] = y(1, 1).real();
        beta[s] = y(1, 2).real();
      }
      const auto closed = werner_twirl(x);
      const auto sa = pairwise_stats(alpha), sb = pairwise_stats(beta);
      const std::string params = fmt("channel=%s(q=%g,p=%g),X=%s,samples=%llu", to_string(specs[c].kind).c_str(),
                                     specs[c].q, specs[c].p, which == 0 ? "NN(I)" : "NN(S)",
                                     static_cast<unsigned long long>(samples));
      out.estimate("werner_alpha_mc", params, sa.mean(), sa.std_error(), closed.alpha.real(), "==");
      out.estimate("werner_beta_mc", params, sb.mean(), sb.std_error(), closed.beta.real(), "==");
    }
  }
  return out.rows;
}

std::vector<VerifyRow> lightcone(const VerifyOptions& opts) {
  Rows out("lightcone");
  for (int d : range_or(opts.depth, 1, 4)) {
    ExperimentConfig cfg = base_config(opts, 4, d, 20000);
    cfg.depth = d;
    cfg.channel = ChannelSpec::amp_then_dep(0.2, 0.1);
    cfg.targets = {"zsq", "neglogp_var", "asigma"};
    cfg.bitstrings.kind = BitstringSelector::Kind::list;
    // One string per Hamming weight.
    for (int w = 0; w <= cfg.n; ++w) {
      cfg.bitstrings.items.push_back(std::string(static_cast<std::size_t>(w), '1') +
                                     std::string(static_cast<std::size_t>(cfg.n - w), '0'));
    }
    const std::string params = fmt("n=%d,d=%d,q=0.2,p=0.1,samples=%llu,seed=%llu", cfg.n, d,
                                   static_cast<unsigned long long>(cfg.samples),
                                   static_cast<unsigned long long>(cfg.seed));
    out.records(params, run_experiment(cfg));

    const auto overlap = iterated_zero_overlap(make_channel(cfg.channel), d);
    double err = 0.0;
    for (int k = 0; k <= d; ++k) {
      err = std::max(err, std::abs(overlap.sequence[k] - (overlap.kappa + overlap.tau * std::pow(overlap.lambda, k))));
    }
    out.exact("overlap_closed_form", fmt("q=0.2,p=0.1,d<=%d", d), err, 0.0, "==", 1e-12);
  }
  return out.rows;
}

std::vector<VerifyRow> last_layer(const VerifyOptions& opts) {
  Rows out("last_layer");
  const double q = 0.4, phi = 0.3;
  const double pi = std::numbers::pi;
  for (double theta : {0.0, pi / 8, pi / 6, pi / 4}) {
    ExperimentConfig cfg = base_config(opts, 1, 4, 20000);
    cfg.n = 1;
    cfg.channel = ChannelSpec::amp_damp(q);
    cfg.placement = PlacementMode::fixed_final_rotations;
    cfg.final_rotations = {{theta, phi}};
    cfg.targets = {"px"};
    cfg.bitstrings.kind = BitstringSelector::Kind::all;
    const std::string params = fmt("n=1,d=%d,q=%g,theta=%.6f,samples=%llu,seed=%llu", cfg.depth, q, theta,
                                   static_cast<unsigned long long>(cfg.samples),
                                   static_cast<unsigned long long>(cfg.seed));
    const auto res = run_experiment(cfg);
    for (const auto& rec : res.records) {
      const int b = rec.bitstring == "1";
      const double formula = 0.5 + (b ? -1.0 : 1.0) * q * std::cos(2.0 * theta) / 2.0;
      out.estimate("px:" + rec.bitstring, params, rec.value, rec.std_error, formula, "==");
    }
    const Eigen::VectorXd exact = first_moment_propagate({1, cfg.depth, Layout::brickwork}, make_placement(cfg));
    out.exact("exact_first_moment", fmt("n=1,d=%d,q=%g,theta=%.6f", cfg.depth, q, theta), exact(0),
              0.5 + q * std::cos(2.0 * theta) / 2.0, "==", 1e-12);
  }

  const std::vector<std::vector<double>> theta_sets{
      {0.0, pi / 8, pi / 6}, {pi / 8, pi / 8, pi / 8}, {pi / 6, pi / 4 - 0.1, 0.2}, {pi / 4, 0.0, 0.0}};
  const int n = 3;
  for (std::size_t s = 0; s < theta_sets.size(); ++s) {
    double worst = std::numeric_limits<double>::infinity(), value = 0.0, bound = 0.0;
    for (double qq : {0.2, 0.5, 0.8}) {
      for (int d : range_or(opts.depth, 1, 5)) {
        NoisePlacement placement;
        placement.mode = PlacementMode::fixed_final_rotations;
        placement.channel = make_channel(ChannelSpec::amp_damp(qq));
        for (double t : theta_sets[s]) placement.final_rotations.push_back({t, phi});
        const double z = two_copy_moment_propagate({n, d, Layout::brickwork}, placement).scaled_collision();
        const double lb = collision_lower_bound_rotations(n, qq, theta_sets[s]);
        if (z - lb < worst) {
          worst = z - lb;
          value = z;
          bound = lb;
        }
      }
    }
    out.exact("rotation_bound", fmt("n=3,thetas=%zu,q in {0.2,0.5,0.8},d<=5", s), value, bound, ">=", 1e-12);
  }
  return out.rows;
}

std::vector<VerifyRow> twirl_xeb(const VerifyOptions& opts) {
  Rows out("twirl_xeb");
  ExperimentConfig cfg = base_config(opts, 3, 4, 20000);
  cfg.channel = ChannelSpec::amp_then_dep(0.5, 0.1);
  cfg.placement = PlacementMode::no_final_noise_layer;
  cfg.targets = {"xeb", "xeb_twirled", "xeb_twirl_gap", "collision_twirl_gap"};
  const std::string params = fmt("n=%d,d=%d,q=0.5,p=0.1,placement=no_final_noise_layer,samples=%llu,seed=%llu",
                                 cfg.n, cfg.depth, static_cast<unsigned long long>(cfg.samples),
                                 static_cast<unsigned long long>(cfg.seed));
  const auto res = run_experiment(cfg);
  for (const auto& rec : res.records) {
    if (rec.estimator == "collision_twirl_gap") {
      // Negative control: the gap must be resolved, not matched.
      VerifyRow r{"twirl_xeb", "collision_twirl_gap", params, rec.value, 0.0, "!=", rec.margin, "se",
                  rec.margin > kNegativeControlMargin};
      out.rows.push_back(r);
    } else if (rec.reference) {
      out.estimate(rec.estimator + ":" + rec.bitstring, params, rec.value, rec.std_error, *rec.reference, "==");
    }
  }

  const NoisePlacement noisy = make_placement(cfg);
  NoisePlacement ideal = noisy, surrogate = noisy;
  ideal.channel = identity_channel();
  surrogate.channel = make_channel(ChannelSpec::depolarizing(twirl_strength(noisy.channel)));
  const CircuitShape shape{cfg.n, cfg.depth, cfg.layout};
  const std::string exact_params = fmt("n=%d,d=%d,q=0.5,p=0.1", cfg.n, cfg.depth);
  out.exact("exact_xeb_twirl", exact_params, cross_moment_propagate(shape, ideal, noisy).scaled_cross(),
            cross_moment_propagate(shape, ideal, surrogate).scaled_cross(), "==", 1e-12);
  return out.rows;
}

std::vector<VerifyRow> uniform_identity(const VerifyOptions& opts) {
  Rows out("uniform_identity");
  ExperimentConfig cfg = base_config(opts, 3, 4, 500);
  cfg.channel = ChannelSpec::amp_then_dep(0.2, 0.1);
  cfg.targets = {"uniform_identity"};
  const auto res = run_experiment(cfg);
  for (const auto& rec : res.records) {
    out.exact("max_identity_gap", fmt("n=%d,d=%d,circuits=%llu,seed=%llu", cfg.n, cfg.depth,
                                      static_cast<unsigned long long>(cfg.samples),
                                      static_cast<unsigned long long>(cfg.seed)),
              rec.value, 0.0, "==", 1e-12);
  }
  return out.rows;
}

using SuiteFn = std::vector<VerifyRow> (*)(const VerifyOptions&);

const std::vector<std::pair<std::string, SuiteFn>>& suites() {
  static const std::vector<std::pair<std::string, SuiteFn>> s{
      {"channel_algebra", channel_algebra},         {"first_moments", first_moments},
      {"collision_bounds", collision_bounds},       {"second_moment_chain", second_moment_chain},
      {"statmech_recursions", statmech_recursions}, {"lightcone", lightcone},
      {"last_layer", last_layer},                   {"twirl_xeb", twirl_xeb},
      {"uniform_identity", uniform_identity}};
  return s;
}

}  // namespace

std::vector<std::string> suite_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, _] : suites()) ids.push_back(id);
  ids.push_back("all");
  return ids;
}

std::vector<VerifyRow> verify_suite(const std::string& id, const VerifyOptions& opts) {
  if (id == "all") {
    std::vector<VerifyRow> rows;
    for (const auto& [name, fn] : suites()) {
      auto part = fn(opts);
      rows.insert(rows.end(), part.begin(), part.end());
    }
    return rows;
  }
  for (const auto& [name, fn] : suites()) {
    if (name == id) return fn(opts);
  }
  throw ConfigError("unknown suite '" + id + "'");
}

void write_verify_csv(std::ostream& out, const std::vector<VerifyRow>& rows) {
  out << "suite,check,params,value,target,relation,margin,margin_unit,verdict\n";
  for (const auto& r : rows) {
    out << r.suite << ',' << r.check << ",\"" << r.params << "\"," << format_double(r.value) << ','
        << format_double(r.target) << ',' << r.relation << ',' << format_double(r.margin) << ',' << r.margin_unit
        << ',' << (r.pass ? "pass" : "fail") << '\n';
  }
}

bool all_pass(const std::vector<VerifyRow>& rows) {
  return std::all_of(rows.begin(), rows.end(), [](const VerifyRow& r) { return r.pass; });
}

}  // namespace rcs
