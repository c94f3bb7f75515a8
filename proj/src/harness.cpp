#include "rcs/harness.hpp"

#include <algorithm>
#include <bit>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <span>
#include <thread>

#include "rcs/moments.hpp"
#include "rcs/rng.hpp"
#include "rcs/simulator.hpp"
#include "rcs/stats.hpp"
#include "rcs/two_copy.hpp"

#ifndef RCS_VERSION
#define RCS_VERSION "unknown"
#endif

namespace rcs {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::not_applicable: return "n/a";
  }
  return "n/a";
}

void judge(EstimateRecord& rec, double k) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  bool checked = false, ok = true;
  const double se = rec.std_error;
  if (rec.reference) {
    checked = true;
    const double diff = std::abs(rec.value - *rec.reference);
    if (se > 0.0) {
      rec.margin = diff / se;
      ok = ok && rec.margin <= k;
    } else {
      const bool close = diff <= 1e-12 * std::max(1.0, std::abs(*rec.reference));
      rec.margin = close ? 0.0 : inf;
      ok = ok && close;
    }
  }
  if (rec.bound && rec.relation != Relation::none) {
    checked = true;
    const double slack = rec.relation == Relation::at_least ? rec.value - *rec.bound : *rec.bound - rec.value;
    double m;
    if (se > 0.0) {
      m = slack / se;
      ok = ok && m >= -k;
    } else {
      const bool holds = slack >= -1e-12 * std::max(1.0, std::abs(*rec.bound));
      m = holds ? inf : -inf;
      ok = ok && holds;
    }
    if (!rec.reference) rec.margin = m;
  }
  rec.verdict = checked ? (ok ? Verdict::pass : Verdict::fail) : Verdict::not_applicable;
}

void parallel_for_index(std::uint64_t count, int workers, const std::function<void(std::uint64_t)>& f) {
  if (workers <= 1 || count <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const auto n = static_cast<std::uint64_t>(workers) < count ? workers : static_cast<int>(count);
  for (int t = 0; t < n; ++t) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

LogProbSample logprob_sample(const OutputDistribution& dist, std::uint64_t x) {
  const int n = dist.n;
  const std::uint64_t size = std::uint64_t(1) << n;
  const std::uint64_t full = size - 1;
  const auto marg = agreeing_marginals(dist, x);
  LogProbSample s;
  for (std::uint64_t j = 0; j < full; ++j) {
    if (marg[j] < kConditioningFloor) {
      s.excluded = true;
      return s;
    }
  }
  if (!(marg[full] > 0.0)) {
    s.excluded = true;
    return s;
  }
  s.neglogp = -std::log(marg[full]);
  s.z_expect.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    s.z_expect[i] = 2.0 * marg[std::uint64_t(1) << (n - 1 - i)] - 1.0;
  }
  // Average over orderings: the step that adds qubit i to the set J occurs in
  // a fraction |J|! (n - |J| - 1)! / n! of all permutations.
  std::vector<double> weight(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    weight[k] = std::exp(std::lgamma(k + 1.0) + std::lgamma(n - k) - std::lgamma(n + 1.0));
  }
  double total = 0.0;
  for (std::uint64_t j = 0; j < full; ++j) {
    const int k = std::popcount(j);
    for (int i = 0; i < n; ++i) {
      const std::uint64_t b = std::uint64_t(1) << (n - 1 - i);
      if (j & b) continue;
      const double z = 2.0 * marg[j | b] / marg[j] - 1.0;
      total -= weight[k] * z;
    }
  }
  s.a_sigma_mean = total;
  return s;
}

double a_sigma_brute_force(const OutputDistribution& dist, std::uint64_t x) {
  const int n = dist.n;
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const std::string bits = to_bitstring(x, n);
  double sum = 0.0;
  std::uint64_t count = 0;
  do {
    std::vector<int> qubits, values;
    for (int i : order) {
      const double pr = conditional(dist, i, bits[i] - '0', qubits, values);
      sum -= 2.0 * pr - 1.0;
      qubits.push_back(i);
      values.push_back(bits[i] - '0');
    }
    ++count;
  } while (std::next_permutation(order.begin(), order.end()));
  return sum / static_cast<double>(count);
}

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

double placement_bias(const NoisePlacement& placement, int qubit, int depth) {
  // <0|N_eff(I)|0> - 1 for the last operation touching this qubit.
  if (!placement.noisy_layer(depth - 1, depth)) return 0.0;
  if (placement.mode == PlacementMode::fixed_final_rotations) {
    const auto& r = placement.final_rotations[qubit];
    return r_value(conjugated(placement.channel, rotation_unitary(r.theta, r.phi)));
  }
  return r_value(placement.channel);
}

double site_factor(const ExperimentConfig& cfg, const NoisePlacement& placement, int qubit, int bit) {
  if (placement.mode == PlacementMode::fixed_final_rotations && cfg.channel.kind == ChannelKind::amp_damp) {
    return last_layer_first_moment(cfg.channel.q, placement.final_rotations[qubit].theta, bit);
  }
  return conditional_first_moment(bit, placement_bias(placement, qubit, cfg.depth));
}

struct SampleView {
  const OutputDistribution& noisy;
  const OutputDistribution* ideal;
  const OutputDistribution* surrogate;
  const std::vector<LogProbSample>& logprob;
};

enum class Aggregate { mean, fraction, variance, max_value };

struct Slot {
  EstimateRecord proto;
  Aggregate agg = Aggregate::mean;
  bool diagnostic = false;
  bool uses_logprob = false;
  std::function<double(const SampleView&)> eval;
};

bool standard_final_noise(const ExperimentConfig& cfg) {
  return cfg.channel.is_standard() && cfg.placement == PlacementMode::after_every_gate_with_final_layer &&
         cfg.layout == Layout::brickwork;
}

}  // namespace

double reference_first_moment(const ExperimentConfig& cfg, const NoisePlacement& placement, std::string_view pattern) {
  int length = 0, weight = 0;
  for (char c : pattern) {
    if (c == '*') continue;
    ++length;
    weight += c == '1';
  }
  if (placement.mode == PlacementMode::after_every_gate_with_final_layer) {
    return marginal_first_moment(length, weight, r_value(placement.channel));
  }
  double v = 1.0;
  for (int j = 0; j < cfg.n; ++j) {
    if (pattern[j] == '*') continue;
    v *= site_factor(cfg, placement, j, pattern[j] - '0');
  }
  return v;
}

double reference_conditional(const ExperimentConfig& cfg, const NoisePlacement& placement, int qubit, int bit) {
  return site_factor(cfg, placement, qubit, bit);
}

std::string run_id(const ExperimentConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(config_to_json(cfg, false).dump())));
  return buf;
}

std::string artifact_version() { return RCS_VERSION; }

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const NoisePlacement placement = make_placement(cfg);
  const CircuitShape shape{cfg.n, cfg.depth, cfg.layout};
  const double k = cfg.margin;
  const auto has = [&](const char* t) { return std::find(cfg.targets.begin(), cfg.targets.end(), t) != cfg.targets.end(); };

  const bool need_ideal = has("xeb") || has("xeb_twirled") || has("xeb_twirl_gap");
  const bool need_surrogate = has("xeb_twirled") || has("xeb_twirl_gap") || has("collision_twirl_gap");
  NoisePlacement ideal = placement;
  ideal.channel = identity_channel();
  NoisePlacement surrogate = placement;
  if (need_surrogate) surrogate.channel = make_channel(ChannelSpec::depolarizing(twirl_strength(placement.channel)));

  const auto bitstrings = selected_bitstrings(cfg);
  std::vector<std::uint64_t> indices;
  for (const auto& b : bitstrings) indices.push_back(parse_bitstring(b, cfg.n));

  std::optional<SecondMoments> exact2;
  if (has("px2") || has("collision") || has("tail")) exact2 = two_copy_moment_propagate(shape, placement);
  std::optional<SecondMoments> exact_xeb;
  if (need_ideal) exact_xeb = cross_moment_propagate(shape, ideal, placement);

  std::optional<SecondMomentParams> smp;
  if (standard_final_noise(cfg) && !(cfg.channel.p == 0.0 && cfg.channel.q == 0.0)) {
    smp = second_moment_params(cfg.channel.kind, cfg.channel.p, cfg.channel.q);
  }

  std::vector<Slot> slots;
  auto add = [&](Slot s) { slots.push_back(std::move(s)); };

  for (const auto& target : cfg.targets) {
    if (target == "px") {
      for (std::size_t b = 0; b < bitstrings.size(); ++b) {
        Slot s;
        s.proto.estimator = "px";
        s.proto.bitstring = bitstrings[b];
        s.proto.reference = reference_first_moment(cfg, placement, bitstrings[b]);
        const auto x = indices[b];
        s.eval = [x](const SampleView& v) { return v.noisy(x); };
        add(std::move(s));
      }
    } else if (target == "marginal") {
      for (const auto& pat : selected_marginals(cfg)) {
        Slot s;
        s.proto.estimator = "marginal";
        s.proto.bitstring = pat;
        s.proto.reference = reference_first_moment(cfg, placement, pat);
        s.eval = [pat](const SampleView& v) { return marginal(v.noisy, pat); };
        add(std::move(s));
      }
    } else if (target == "conditional") {
      for (const auto& pat : selected_conditionals(cfg)) {
        const auto cp = parse_conditional_pattern(pat, cfg.n);
        Slot s;
        s.proto.estimator = "conditional";
        s.proto.bitstring = pat;
        s.proto.reference = reference_conditional(cfg, placement, cp.target, cp.value);
        s.uses_logprob = true;  // underflowing conditions are excluded, not fatal
        s.eval = [cp](const SampleView& v) {
          try {
            return conditional(v.noisy, cp);
          } catch (const DegenerateConditioning&) {
            return std::numeric_limits<double>::quiet_NaN();
          }
        };
        add(std::move(s));
      }
    } else if (target == "px2") {
      for (std::size_t b = 0; b < bitstrings.size(); ++b) {
        Slot s;
        s.proto.estimator = "px2";
        s.proto.bitstring = bitstrings[b];
        const auto x = indices[b];
        s.proto.reference = exact2->per_string(static_cast<Eigen::Index>(x));
        if (smp && 2 * hamming_weight(x) >= cfg.n) {
          s.proto.bound = second_moment_bound(cfg.n, cfg.depth, *smp);
          s.proto.relation = Relation::at_most;
        }
        s.eval = [x](const SampleView& v) { return v.noisy(x) * v.noisy(x); };
        add(std::move(s));
      }
    } else if (target == "collision") {
      Slot s;
      s.proto.estimator = "collision";
      s.proto.reference = exact2->scaled_collision();
      if (cfg.placement != PlacementMode::no_final_noise_layer) {
        double t = 1.0;
        for (int j = 0; j < cfg.n; ++j) t = std::min(t, std::abs(placement_bias(placement, j, cfg.depth)));
        s.proto.bound = collision_lower_bound_general(cfg.n, t);
        s.proto.relation = Relation::at_least;
      }
      s.eval = [](const SampleView& v) { return scaled_collision(v.noisy); };
      add(std::move(s));
    } else if (target == "uniform_identity") {
      Slot s;
      s.proto.estimator = "uniform_identity";
      s.proto.bound = 1e-12;
      s.proto.relation = Relation::at_most;
      s.agg = Aggregate::max_value;
      s.eval = [](const SampleView& v) { return std::abs(uniform_distance(v.noisy) - scaled_collision(v.noisy)); };
      add(std::move(s));
    } else if (target == "xeb") {
      Slot s;
      s.proto.estimator = "xeb";
      s.proto.reference = exact_xeb->scaled_cross();
      s.eval = [](const SampleView& v) { return xeb(*v.ideal, v.noisy).raw; };
      add(std::move(s));
    } else if (target == "xeb_twirled") {
      Slot s;
      s.proto.estimator = "xeb_twirled";
      s.proto.reference = exact_xeb->scaled_cross();
      s.eval = [](const SampleView& v) { return xeb(*v.ideal, *v.surrogate).raw; };
      add(std::move(s));
    } else if (target == "xeb_twirl_gap") {
      Slot s;
      s.proto.estimator = "xeb_twirl_gap";
      s.proto.reference = 0.0;
      s.eval = [](const SampleView& v) { return xeb(*v.ideal, v.noisy).raw - xeb(*v.ideal, *v.surrogate).raw; };
      add(std::move(s));
    } else if (target == "collision_twirl_gap") {
      Slot s;
      s.proto.estimator = "collision_twirl_gap";
      s.proto.reference = 0.0;
      s.diagnostic = true;
      s.eval = [](const SampleView& v) { return scaled_collision(v.noisy) - scaled_collision(*v.surrogate); };
      add(std::move(s));
    } else if (target == "tail") {
      const double threshold = cfg.alpha / std::ldexp(1.0, cfg.n);
      for (std::size_t b = 0; b < bitstrings.size(); ++b) {
        Slot s;
        const auto x = indices[b];
        s.proto.estimator = "tail";
        s.proto.bitstring = bitstrings[b];
        const double second = smp && 2 * hamming_weight(x) >= cfg.n
                                  ? second_moment_bound(cfg.n, cfg.depth, *smp)
                                  : exact2->per_string(static_cast<Eigen::Index>(x));
        s.proto.bound = chebyshev_tail_bound(cfg.n, second, cfg.alpha);
        s.proto.relation = Relation::at_least;
        s.agg = Aggregate::fraction;
        s.eval = [x, threshold](const SampleView& v) { return v.noisy(x) < threshold ? 1.0 : 0.0; };
        add(std::move(s));
      }
    } else if (target == "neglogp" || target == "neglogp_var" || target == "asigma") {
      std::optional<IteratedOverlap> overlap;
      if (standard_final_noise(cfg)) overlap = iterated_zero_overlap(placement.channel, cfg.depth);
      const double r = r_value(placement.channel);
      for (std::size_t b = 0; b < bitstrings.size(); ++b) {
        Slot s;
        s.proto.estimator = target;
        s.proto.bitstring = bitstrings[b];
        s.uses_logprob = true;
        const int w = hamming_weight(indices[b]);
        if (target == "neglogp") {
          if (overlap && overlap->closed_form_valid) {
            s.proto.bound = lightcone_terms(cfg.n, w, r, cfg.depth, overlap->kappa, overlap->tau, overlap->lambda)
                                .neglogp_lower;
            s.proto.relation = Relation::at_least;
          }
          s.eval = [b](const SampleView& v) { return v.logprob[b].excluded ? NAN : v.logprob[b].neglogp; };
        } else if (target == "neglogp_var") {
          s.proto.bound = 2.0 * cfg.n;
          s.proto.relation = Relation::at_most;
          s.agg = Aggregate::variance;
          s.eval = [b](const SampleView& v) { return v.logprob[b].excluded ? NAN : v.logprob[b].neglogp; };
        } else {
          if (placement.mode == PlacementMode::after_every_gate_with_final_layer) {
            s.proto.reference = 2.0 * w * r - cfg.n * r;
          }
          s.eval = [b](const SampleView& v) { return v.logprob[b].excluded ? NAN : v.logprob[b].a_sigma_mean; };
        }
        add(std::move(s));
      }
    } else if (target == "zsq") {
      std::optional<IteratedOverlap> overlap;
      if (standard_final_noise(cfg)) overlap = iterated_zero_overlap(placement.channel, cfg.depth);
      for (int i = 0; i < cfg.n; ++i) {
        Slot s;
        s.proto.estimator = "zsq";
        std::string pat(static_cast<std::size_t>(cfg.n), '*');
        pat[i] = 'Z';
        s.proto.bitstring = pat;
        if (overlap && overlap->closed_form_valid) {
          s.proto.bound = lightcone_terms(cfg.n, 0, 0.0, cfg.depth, overlap->kappa, overlap->tau, overlap->lambda)
                              .z_square_lower;
          s.proto.relation = Relation::at_least;
        }
        std::string zero(static_cast<std::size_t>(cfg.n), '*');
        zero[i] = '0';
        s.eval = [zero](const SampleView& v) {
          const double z = 2.0 * marginal(v.noisy, zero) - 1.0;
          return z * z;
        };
        add(std::move(s));
      }
    }
  }

  const bool need_logprob = std::any_of(slots.begin(), slots.end(), [](const Slot& s) {
    return s.uses_logprob && s.proto.estimator != "conditional";
  });
  const std::uint64_t samples = cfg.samples;
  const std::size_t cells = slots.size() * static_cast<std::size_t>(samples);
  if (cells > (std::size_t(1) << 26)) {
    throw ConfigError("too many estimator cells; reduce samples or bitstrings");
  }
  std::vector<double> values(cells, 0.0);  // slot-major

  parallel_for_index(samples, cfg.workers, [&](std::uint64_t i) {
    CounterRng rng(cfg.seed, i);
    const Circuit circuit = build_circuit(shape, placement, rng);
    const OutputDistribution noisy = output_distribution(simulate(circuit));
    std::optional<OutputDistribution> ideal_dist, surrogate_dist;
    if (need_ideal) ideal_dist = output_distribution(simulate(circuit, ideal));
    if (need_surrogate) surrogate_dist = output_distribution(simulate(circuit, surrogate));
    std::vector<LogProbSample> lp;
    if (need_logprob) {
      for (auto x : indices) lp.push_back(logprob_sample(noisy, x));
    }
    const SampleView view{noisy, ideal_dist ? &*ideal_dist : nullptr, surrogate_dist ? &*surrogate_dist : nullptr, lp};
    for (std::size_t s = 0; s < slots.size(); ++s) values[s * samples + i] = slots[s].eval(view);
  });

  ExperimentResult result;
  result.run_id = run_id(cfg);
  result.config = cfg;
  std::uint64_t excluded_cells = 0, logprob_cells = 0;
  for (std::size_t s = 0; s < slots.size(); ++s) {
    const std::span<const double> all(values.data() + s * samples, samples);
    std::vector<double> kept;
    kept.reserve(samples);
    for (double v : all) {
      if (!std::isnan(v)) kept.push_back(v);
    }
    if (slots[s].uses_logprob) {
      logprob_cells += samples;
      excluded_cells += samples - kept.size();
    }
    EstimateRecord rec = slots[s].proto;
    rec.samples = kept.size();
    const RunningStats st = pairwise_stats(kept);
    switch (slots[s].agg) {
      case Aggregate::mean:
        rec.value = st.mean();
        rec.std_error = st.std_error();
        break;
      case Aggregate::fraction: {
        const auto hits = static_cast<std::uint64_t>(std::llround(st.mean() * static_cast<double>(kept.size())));
        rec.value = st.mean();
        rec.std_error = wilson_std_error(hits, kept.size());
        break;
      }
      case Aggregate::variance: {
        rec.value = st.variance();
        double m4 = 0.0;
        for (double v : kept) m4 += std::pow(v - st.mean(), 4);
        m4 /= static_cast<double>(std::max<std::size_t>(kept.size(), 1));
        const double s4 = rec.value * rec.value;
        rec.std_error = kept.size() > 1 ? std::sqrt(std::max(m4 - s4, 0.0) / static_cast<double>(kept.size())) : 0.0;
        break;
      }
      case Aggregate::max_value:
        rec.value = kept.empty() ? 0.0 : *std::max_element(kept.begin(), kept.end());
        rec.std_error = 0.0;
        break;
    }
    judge(rec, k);
    if (slots[s].diagnostic) rec.verdict = Verdict::not_applicable;
    result.records.push_back(std::move(rec));
  }
  result.excluded = excluded_cells;
  result.exclusion_rate = logprob_cells ? static_cast<double>(excluded_cells) / static_cast<double>(logprob_cells) : 0.0;
  result.reliable = result.exclusion_rate <= 0.10;
  return result;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv_header(std::ostream& out) {
  out << "run_id,n,depth,kind,q,p,estimator,bitstring,value,std_error,reference,bound,verdict,margin,samples,seed\n";
}

void write_csv(std::ostream& out, const ExperimentResult& result, bool header) {
  if (header) write_csv_header(out);
  const auto& cfg = result.config;
  for (const auto& r : result.records) {
    out << result.run_id << ',' << cfg.n << ',' << cfg.depth << ',' << to_string(cfg.channel.kind) << ','
        << format_double(cfg.channel.q) << ',' << format_double(cfg.channel.p) << ',' << r.estimator << ','
        << r.bitstring << ',' << format_double(r.value) << ',' << format_double(r.std_error) << ','
        << (r.reference ? format_double(*r.reference) : "") << ',' << (r.bound ? format_double(*r.bound) : "")
        << ',' << to_string(r.verdict) << ',' << format_double(r.margin) << ',' << r.samples << ',' << cfg.seed
        << '\n';
  }
}

nlohmann::json sidecar_json(const ExperimentResult& result) {
  std::size_t failed = 0;
  for (const auto& r : result.records) failed += r.verdict == Verdict::fail;
  return {{"run_id", result.run_id},
          {"version", artifact_version()},
          {"config", config_to_json(result.config, true)},
          {"records", result.records.size()},
          {"failed", failed},
          {"excluded", result.excluded},
          {"exclusion_rate", result.exclusion_rate},
          {"reliable", result.reliable}};
}

}  // namespace rcs
