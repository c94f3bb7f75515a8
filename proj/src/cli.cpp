#include "rcs/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "rcs/harness.hpp"
#include "rcs/moments.hpp"
#include "rcs/simulator.hpp"
#include "rcs/statmech.hpp"
#include "rcs/two_copy.hpp"
#include "rcs/verify.hpp"

namespace rcs {

namespace {

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + out_path + "'");
  out << text;
}

int default_workers() {
  const char* env = std::getenv("RCS_WORKERS");
  if (!env || !*env) return 1;
  try {
    std::size_t used = 0;
    const int w = std::stoi(env, &used);
    if (used != std::string(env).size() || w < 1) throw std::invalid_argument("bad");
    return w;
  } catch (const std::exception&) {
    throw ConfigError("RCS_WORKERS must be a positive integer");
  }
}

nlohmann::json complex_matrix(const MatXc& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json real_matrix(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

// Channel flags shared by several subcommands.
struct ChannelFlags {
  std::string kind;
  double q = 0.0;
  double p = 0.0;
  std::vector<double> t;
  CLI::Option* kind_opt = nullptr;
  CLI::Option* q_opt = nullptr;
  CLI::Option* p_opt = nullptr;
  CLI::Option* t_opt = nullptr;

  void add(CLI::App* app) {
    kind_opt = app->add_option("--kind", kind, "amp_damp | depolarizing | amp_then_dep | dep_then_amp | general_ptm");
    q_opt = app->add_option("--q", q, "amplitude damping strength");
    p_opt = app->add_option("--p", p, "depolarizing strength");
    t_opt = app->add_option("--t", t, "16 comma-separated PTM entries R(i,j), row-major")->delimiter(',');
  }

  bool given() const { return kind_opt->count() || q_opt->count() || p_opt->count() || t_opt->count(); }

  void apply(ChannelSpec& spec) const {
    if (kind_opt->count()) spec.kind = channel_kind_from_string(kind);
    if (q_opt->count()) spec.q = q;
    if (p_opt->count()) spec.p = p;
    if (t_opt->count()) {
      if (t.size() != 16) throw ConfigError("--t needs 16 values");
      Eigen::Matrix4d r;
      for (int i = 0; i < 16; ++i) r(i / 4, i % 4) = t[static_cast<std::size_t>(i)];
      spec.t = r;
    }
  }
};

// Experiment flags; each one overrides the config file when given.
struct ExperimentFlags {
  std::string config_path;
  std::string out;
  ChannelFlags channel;
  int n = 0, depth = 0, workers = 0;
  std::string placement, layout, rotations, bitstrings;
  std::uint64_t samples = 0, seed = 0;
  std::vector<std::string> targets;
  double alpha = 1.0, margin = 3.0;
  std::map<std::string, CLI::Option*> opts;

  void add(CLI::App* app) {
    app->add_option("--config", config_path, "experiment config JSON");
    app->add_option("--out", out, "output path (default stdout)");
    channel.add(app);
    opts["n"] = app->add_option("--n", n, "qubits");
    opts["depth"] = app->add_option("--depth", depth, "circuit depth");
    opts["placement"] = app->add_option(
        "--placement", placement, "after_every_gate_with_final_layer | no_final_noise_layer | fixed_final_rotations");
    opts["rotations"] = app->add_option("--rotations", rotations, "final rotations theta:phi,theta:phi,...");
    opts["samples"] = app->add_option("--samples", samples, "circuit samples");
    opts["seed"] = app->add_option("--seed", seed, "64-bit seed");
    opts["targets"] = app->add_option("--targets", targets, "comma-separated estimator ids")->delimiter(',');
    opts["bitstrings"] = app->add_option("--bitstrings", bitstrings, "all | hamming_ge_half | comma-separated list");
    opts["alpha"] = app->add_option("--alpha", alpha, "tail threshold alpha");
    opts["workers"] = app->add_option("--workers", workers, "worker threads (default RCS_WORKERS or 1)");
    opts["layout"] = app->add_option("--layout", layout, "brickwork | single_qubit");
    opts["margin"] = app->add_option("--margin", margin, "verdict margin in standard errors");
  }

  bool has(const char* key) const { return opts.at(key)->count() > 0; }

  ExperimentConfig build() const {
    nlohmann::json j = config_path.empty() ? nlohmann::json::object() : read_json_file(config_path);
    const bool workers_in_config = j.is_object() && j.contains("workers");
    ExperimentConfig cfg = config_from_json(j);
    if (!workers_in_config) cfg.workers = default_workers();
    try {
      channel.apply(cfg.channel);
      if (has("n")) cfg.n = n;
      if (has("depth")) cfg.depth = depth;
      if (has("placement")) cfg.placement = placement_mode_from_string(placement);
      if (has("rotations")) {
        cfg.final_rotations.clear();
        std::stringstream ss(rotations);
        std::string item;
        while (std::getline(ss, item, ',')) {
          const auto colon = item.find(':');
          if (colon == std::string::npos) throw ConfigError("rotation '" + item + "' must be theta:phi");
          cfg.final_rotations.push_back({std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
        }
      }
      if (has("samples")) cfg.samples = samples;
      if (has("seed")) cfg.seed = seed;
      if (has("targets")) cfg.targets = targets;
      if (has("bitstrings")) {
        if (bitstrings == "all") {
          cfg.bitstrings = {BitstringSelector::Kind::all, {}};
        } else if (bitstrings == "hamming_ge_half") {
          cfg.bitstrings = {BitstringSelector::Kind::hamming_ge_half, {}};
        } else {
          cfg.bitstrings.kind = BitstringSelector::Kind::list;
          cfg.bitstrings.items.clear();
          std::stringstream ss(bitstrings);
          std::string item;
          while (std::getline(ss, item, ',')) cfg.bitstrings.items.push_back(item);
        }
      }
      if (has("alpha")) cfg.alpha = alpha;
      if (has("workers")) cfg.workers = workers;
      if (has("layout")) cfg.layout = layout_from_string(layout);
      if (has("margin")) cfg.margin = margin;
    } catch (const ParameterError& e) {
      throw ConfigError(e.what());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("bad numeric value: ") + e.what());
    }
    return cfg;
  }
};

// --- channel ---------------------------------------------------------------

struct ChannelCmd {
  std::string config_path, out;
  ChannelFlags flags;
  std::vector<std::string> show{"ptm", "adjoint-z", "kappa-tau-lambda", "werner", "general"};
  int depth = 8;
};

int run_channel(const ChannelCmd& c) {
  ChannelSpec spec;
  if (!c.config_path.empty()) {
    const auto j = read_json_file(c.config_path);
    try {
      spec = j.contains("channel") ? j.at("channel").get<ChannelSpec>() : j.get<ChannelSpec>();
    } catch (const std::exception& e) {
      throw ConfigError(std::string("channel config: ") + e.what());
    }
  }
  c.flags.apply(spec);
  const Channel ch = make_channel(spec);
  nlohmann::json rep{{"channel", spec},
                     {"cptp", ch.cptp()},
                     {"min_choi_eigenvalue", ch.min_choi_eigenvalue()},
                     {"t03", ch.coeff(0, 3)},
                     {"r", r_value(ch)}};
  for (const auto& s : c.show) {
    if (s == "ptm") {
      rep["ptm"] = real_matrix(ch.ptm().matrix());
    } else if (s == "adjoint-z") {
      const Mat2c z = ch.apply_adjoint(pauli<double>(3));
      nlohmann::json coeffs = nlohmann::json::array();
      for (int k = 0; k < 4; ++k) coeffs.push_back((pauli<double>(k) * z).trace().real() / 2.0);
      rep["adjoint_z"] = coeffs;  // coefficients on I, X, Y, Z
    } else if (s == "kappa-tau-lambda") {
      const auto o = iterated_zero_overlap(ch, c.depth);
      rep["overlap"] = {{"kappa", o.kappa},
                        {"tau", o.tau},
                        {"lambda", o.lambda},
                        {"closed_form_valid", o.closed_form_valid},
                        {"sequence", o.sequence}};
    } else if (s == "werner") {
      ch.require_cptp();
      const auto pc = werner_pair_coeffs(ch);
      rep["werner"] = {{"a", pc.a}, {"b", pc.b}, {"c", pc.c}, {"twirl_strength", twirl_strength(ch)}};
    } else if (s == "general") {
      const auto g = general_noise_params(ch.ptm());
      rep["general"] = {{"a", g.a},     {"b", g.b},     {"c", g.c},
                        {"mu", g.mu},   {"nu", g.nu},   {"eta", g.eta},
                        {"regime", regime_check_general(g)}};
    } else if (s == "kraus") {
      nlohmann::json ks = nlohmann::json::array();
      if (ch.kraus()) {
        for (const auto& k : ch.kraus()->operators()) ks.push_back(complex_matrix(k));
      }
      rep["kraus"] = ks;
    } else if (s == "choi") {
      rep["choi"] = complex_matrix(ch.ptm().choi());
    } else {
      throw ConfigError("unknown --show item '" + s + "'");
    }
  }
  emit(c.out, rep.dump(2) + "\n");
  std::cerr << to_string(spec.kind) << ": r = " << format_double(r_value(ch)) << (ch.cptp() ? "" : " (not CPTP)")
            << "\n";
  return kExitOk;
}

// --- simulate ---------------------------------------------------------------

int run_simulate(const ExperimentFlags& f, std::uint64_t sample, bool show_circuit) {
  ExperimentConfig cfg = f.build();
  if (cfg.n < 1 || cfg.n > kMaxSimQubits) throw ConfigError("n out of range");
  if (cfg.depth < 1) throw ConfigError("depth must be at least 1");
  const NoisePlacement placement = make_placement(cfg);
  placement.channel.require_cptp();
  CounterRng rng(cfg.seed, sample);
  const Circuit circuit = build_circuit({cfg.n, cfg.depth, cfg.layout}, placement, rng);
  const DensityMatrix rho = simulate(circuit);
  const OutputDistribution dist = output_distribution(rho);
  const auto inv = rho.check();
  nlohmann::json probs = nlohmann::json::object();
  for (Eigen::Index x = 0; x < dist.p.size(); ++x) probs[to_bitstring(static_cast<std::uint64_t>(x), cfg.n)] = dist.p(x);
  nlohmann::json rep{{"n", cfg.n},
                     {"depth", cfg.depth},
                     {"seed", cfg.seed},
                     {"sample", sample},
                     {"channel", cfg.channel},
                     {"placement", to_string(cfg.placement)},
                     {"probabilities", probs},
                     {"purity", rho.purity()},
                     {"scaled_collision", scaled_collision(dist)},
                     {"uniform_distance", uniform_distance(dist)},
                     {"invariants",
                      {{"hermiticity_error", inv.hermiticity_error},
                       {"trace_error", inv.trace_error},
                       {"min_eigenvalue", inv.min_eigenvalue},
                       {"ok", inv.ok()}}}};
  if (show_circuit) rep["circuit"] = circuit_to_json(circuit);
  emit(f.out, rep.dump(2) + "\n");
  std::cerr << "simulated n=" << cfg.n << " depth=" << cfg.depth << " sample=" << sample
            << (inv.ok() ? "" : " (density invariants violated)") << "\n";
  return inv.ok() ? kExitOk : kExitFail;
}

// --- mc -----------------------------------------------------------------------

int run_mc(const ExperimentFlags& f, const std::string& sidecar_path) {
  const ExperimentConfig cfg = f.build();
  const ExperimentResult res = run_experiment(cfg);
  std::ostringstream csv;
  write_csv(csv, res);
  emit(f.out, csv.str());
  std::string sidecar = sidecar_path;
  if (sidecar.empty() && !f.out.empty() && f.out != "-") sidecar = f.out + ".json";
  if (!sidecar.empty()) emit(sidecar, sidecar_json(res).dump(2) + "\n");
  std::size_t pass = 0, fail = 0, na = 0;
  for (const auto& r : res.records) {
    if (r.verdict == Verdict::pass) ++pass;
    if (r.verdict == Verdict::fail) {
      ++fail;
      std::cerr << "FAIL " << r.estimator << " " << r.bitstring << " value=" << format_double(r.value)
                << " margin=" << format_double(r.margin) << "\n";
    }
    if (r.verdict == Verdict::not_applicable) ++na;
  }
  std::cerr << "run " << res.run_id << ": " << pass << " pass, " << fail << " fail, " << na << " n/a";
  if (!res.reliable) std::cerr << " (unreliable: exclusion rate " << format_double(res.exclusion_rate) << ")";
  std::cerr << "\n";
  return fail == 0 && res.reliable ? kExitOk : kExitFail;
}

// --- closedform -----------------------------------------------------------------

struct ClosedFormCmd {
  std::string config_path, out, formula, order;
  std::map<std::string, int> ints{{"n", 0}, {"w", 0}, {"d", 0}, {"bit", 0}};
  std::map<std::string, double> doubles{{"r", 0.0},     {"p", 0.0},      {"q", 0.0},   {"t03", 0.0},
                                        {"kappa", 0.0}, {"tau", 0.0},    {"lambda", 0.0}, {"mean", 0.0},
                                        {"second", 0.0}, {"alpha", 0.0}, {"theta", 0.0}};
  std::vector<double> thetas;
  std::map<std::string, CLI::Option*> opts;
};

int run_closedform(ClosedFormCmd& c) {
  nlohmann::json in = c.config_path.empty() ? nlohmann::json::object() : read_json_file(c.config_path);
  if (!in.is_object()) throw ConfigError("closedform config must be a JSON object");
  std::string formula = in.value("formula", std::string());
  in.erase("formula");
  if (!c.formula.empty()) formula = c.formula;
  if (formula.empty()) throw ConfigError("--formula is required (one of " + [] {
                          std::string s;
                          for (const auto& f : formula_ids()) s += (s.empty() ? "" : ", ") + f;
                          return s;
                        }() + ")");
  for (const auto& [k, v] : c.ints) {
    if (c.opts[k]->count()) in[k] = v;
  }
  for (const auto& [k, v] : c.doubles) {
    if (c.opts[k]->count()) in[k] = v;
  }
  if (c.opts["order"]->count()) in["order"] = c.order;
  if (c.opts["thetas"]->count()) in["thetas"] = c.thetas;
  Prediction pred;
  try {
    pred = evaluate_formula(formula, in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad input: ") + e.what());
  }
  nlohmann::json rep{{"formula", pred.formula},
                     {"inputs", pred.inputs},
                     {"value", pred.value},
                     {"log_domain", pred.log_domain},
                     {"details", pred.details}};
  emit(c.out, rep.dump(2) + "\n");
  std::cerr << formula << (pred.log_domain ? " (log) = " : " = ") << format_double(pred.value) << "\n";
  return kExitOk;
}

// --- statmech -------------------------------------------------------------------

struct StatMechCmd {
  std::string config_path, out, x;
  ChannelFlags flags;
  double a = 0.0, b = 0.0;
  int m = 10, n = 4, d = 4;
  CLI::Option *a_opt = nullptr, *b_opt = nullptr, *n_opt = nullptr, *d_opt = nullptr;
};

int run_statmech(const StatMechCmd& c) {
  ChannelSpec spec;
  int n = 4, d = 4;
  bool have_channel = false;
  if (!c.config_path.empty()) {
    const auto j = read_json_file(c.config_path);
    try {
      if (j.contains("channel")) {
        spec = j.at("channel").get<ChannelSpec>();
        have_channel = true;
      }
      n = j.value("n", n);
      d = j.value("depth", d);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("statmech config: ") + e.what());
    }
  }
  if (c.flags.given()) have_channel = true;
  c.flags.apply(spec);
  if (c.n_opt->count()) n = c.n;
  if (c.d_opt->count()) d = c.d;
  const bool have_ab = c.a_opt->count() && c.b_opt->count();
  if (!have_ab && !have_channel) throw ConfigError("give --a and --b, or a channel");
  if (c.m < 0) throw ConfigError("--m must be non-negative");

  std::optional<Channel> ch;
  double a = c.a, b = c.b;
  if (have_channel) {
    ch = make_channel(spec);
    ch->require_cptp();
    if (!have_ab) {
      const auto pc = werner_pair_coeffs(*ch);
      a = pc.a;
      b = pc.b;
    }
  }
  const auto seq = sequence_coeffs(a, b, c.m);
  const auto ws = werner_state(a, b, c.m);
  nlohmann::json rep{{"a", a},
                     {"b", b},
                     {"c", a + 2.0 * b},
                     {"m", c.m},
                     {"sequence",
                      {{"x", seq.x}, {"y", seq.y}, {"z", seq.z}, {"w", seq.w}, {"closed_form", seq.closed_form}}},
                     {"werner_state",
                      {{"closed", ws.closed},
                       {"iterated", ws.iterated},
                       {"closed_form_valid", ws.closed_form_valid}}},
                     {"n", n},
                     {"depth", d},
                     {"modified_second_moment", modified_ensemble_second_moment(n, d, a, b)}};
  if (ch) rep["channel"] = spec;
  if (!c.x.empty()) {
    if (!ch) throw ConfigError("--x needs a channel");
    const std::uint64_t x = parse_bitstring(c.x, n);
    const CircuitShape shape{n, d, Layout::brickwork};
    const auto mono = monotonicity_check(shape, *ch, x);
    rep["x"] = c.x;
    rep["monotonicity"] = {{"exact", mono.exact}, {"modified", mono.modified}, {"slack", mono.slack},
                           {"holds", mono.holds}};
    rep["last_layer_correction"] = last_layer_correction(c.x, r_value(*ch));
    NoisePlacement placement;
    placement.channel = *ch;
    rep["exact_second_moment"] =
        two_copy_moment_propagate(shape, placement).per_string(static_cast<Eigen::Index>(x));
    if (n <= 3 && d <= 6) {
      rep["trajectory_second_moment"] =
          trajectory_second_moment(shape, *ch, PlacementMode::after_every_gate_with_final_layer, x);
    }
  }
  emit(c.out, rep.dump(2) + "\n");
  std::cerr << "a = " << format_double(a) << ", b = " << format_double(b) << "\n";
  return kExitOk;
}

// --- verify ---------------------------------------------------------------------

struct VerifyCmd {
  std::string config_path, out, suite;
  int n = 0, depth = 0, workers = 0;
  std::uint64_t samples = 0, seed = 1;
  CLI::Option *n_opt = nullptr, *depth_opt = nullptr, *samples_opt = nullptr, *seed_opt = nullptr,
              *workers_opt = nullptr, *suite_opt = nullptr;
};

int run_verify(const VerifyCmd& c) {
  VerifyOptions opts;
  std::string suite = "all";
  bool workers_set = false;
  if (!c.config_path.empty()) {
    const auto j = read_json_file(c.config_path);
    static const std::set<std::string> keys{"suite", "n", "depth", "samples", "seed", "workers"};
    for (const auto& [k, _] : j.items()) {
      if (!keys.count(k)) throw ConfigError("unknown verify config key '" + k + "'");
    }
    try {
      suite = j.value("suite", suite);
      if (j.contains("n")) opts.n = j.at("n").get<int>();
      if (j.contains("depth")) opts.depth = j.at("depth").get<int>();
      if (j.contains("samples")) opts.samples = j.at("samples").get<std::uint64_t>();
      if (j.contains("seed")) opts.seed = j.at("seed").get<std::uint64_t>();
      if (j.contains("workers")) {
        opts.workers = j.at("workers").get<int>();
        workers_set = true;
      }
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("verify config: ") + e.what());
    }
  }
  if (c.suite_opt->count()) suite = c.suite;
  if (c.n_opt->count()) opts.n = c.n;
  if (c.depth_opt->count()) opts.depth = c.depth;
  if (c.samples_opt->count()) opts.samples = c.samples;
  if (c.seed_opt->count()) opts.seed = c.seed;
  if (c.workers_opt->count()) {
    opts.workers = c.workers;
    workers_set = true;
  }
  if (!workers_set) opts.workers = default_workers();
  if (opts.workers < 1) throw ConfigError("workers must be at least 1");

  const auto rows = verify_suite(suite, opts);
  std::ostringstream csv;
  write_verify_csv(csv, rows);
  emit(c.out, csv.str());
  std::size_t fail = 0;
  for (const auto& r : rows) {
    if (!r.pass) {
      ++fail;
      std::cerr << "FAIL " << r.suite << " " << r.check << " [" << r.params << "] value=" << format_double(r.value)
                << " target=" << format_double(r.target) << " margin=" << format_double(r.margin) << " "
                << r.margin_unit << "\n";
    }
  }
  std::cerr << suite << ": " << rows.size() - fail << " pass, " << fail << " fail\n";
  return fail == 0 ? kExitOk : kExitFail;
}

// --- report ---------------------------------------------------------------------

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

int run_report(const std::string& config_path, std::vector<std::string> inputs, const std::string& out_path) {
  if (!config_path.empty()) {
    const auto j = read_json_file(config_path);
    if (!j.contains("inputs")) throw ConfigError("report config needs an \"inputs\" list");
    for (const auto& p : j.at("inputs")) inputs.push_back(p.get<std::string>());
  }
  if (inputs.empty()) throw ConfigError("no input CSV files given (--in)");
  std::string header;
  std::ostringstream merged;
  std::map<std::string, std::size_t> counts;
  for (const auto& path : inputs) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::string first;
    std::getline(in, first);
    if (header.empty()) {
      header = first;
      merged << header << '\n';
    } else if (first != header) {
      throw ConfigError("'" + path + "' has a different header");
    }
    const auto cols = split_csv_line(header);
    const auto it = std::find(cols.begin(), cols.end(), "verdict");
    if (it == cols.end()) throw ConfigError("'" + path + "' has no verdict column");
    const auto vcol = static_cast<std::size_t>(it - cols.begin());
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      merged << line << '\n';
      const auto fields = split_csv_line(line);
      if (fields.size() != cols.size()) throw ConfigError("malformed row in '" + path + "'");
      ++counts[fields[vcol]];
    }
  }
  emit(out_path, merged.str());
  for (const auto& [verdict, count] : counts) std::cerr << verdict << ": " << count << "\n";
  return counts.count("fail") ? kExitFail : kExitOk;
}

}  // namespace

int dispatch(int argc, char** argv) {
  CLI::App app{"Noisy random circuit moment laboratory", "rcs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", artifact_version());

  ChannelCmd channel_cmd;
  auto* channel = app.add_subcommand("channel", "Inspect a single-qubit noise channel");
  channel->add_option("--config", channel_cmd.config_path, "JSON with a channel object (or a full config)");
  channel->add_option("--out", channel_cmd.out, "output path (default stdout)");
  channel_cmd.flags.add(channel);
  channel->add_option("--show", channel_cmd.show, "ptm,adjoint-z,kappa-tau-lambda,werner,general,kraus,choi")
      ->delimiter(',');
  channel->add_option("--depth", channel_cmd.depth, "iterations for the overlap sequence");

  ExperimentFlags sim_flags;
  std::uint64_t sim_sample = 0;
  bool sim_circuit = false;
  auto* sim = app.add_subcommand("simulate", "Simulate one sampled circuit exactly");
  sim_flags.add(sim);
  sim->add_option("--sample", sim_sample, "sample index within the seed's stream");
  sim->add_flag("--circuit", sim_circuit, "include the sampled gates");

  ExperimentFlags mc_flags;
  std::string mc_sidecar;
  auto* mc = app.add_subcommand("mc", "Monte Carlo experiment, CSV output");
  mc_flags.add(mc);
  mc->add_option("--sidecar", mc_sidecar, "sidecar JSON path (default <out>.json)");

  ClosedFormCmd cf_cmd;
  auto* cf = app.add_subcommand("closedform", "Evaluate a closed-form expression");
  cf->add_option("--config", cf_cmd.config_path, "JSON object of inputs, may include \"formula\"");
  cf->add_option("--out", cf_cmd.out, "output path (default stdout)");
  cf->add_option("--formula", cf_cmd.formula, "formula id");
  for (auto& [k, v] : cf_cmd.ints) cf_cmd.opts[k] = cf->add_option("--" + k, v);
  for (auto& [k, v] : cf_cmd.doubles) cf_cmd.opts[k] = cf->add_option("--" + k, v);
  cf_cmd.opts["order"] = cf->add_option("--order", cf_cmd.order, "amp_then_dep | dep_then_amp");
  cf_cmd.opts["thetas"] = cf->add_option("--thetas", cf_cmd.thetas, "comma-separated angles")->delimiter(',');

  StatMechCmd sm_cmd;
  auto* sm = app.add_subcommand("statmech", "Pair coefficients, recursions and modified-ensemble values");
  sm->add_option("--config", sm_cmd.config_path, "JSON with channel, n, depth");
  sm->add_option("--out", sm_cmd.out, "output path (default stdout)");
  sm_cmd.flags.add(sm);
  sm_cmd.a_opt = sm->add_option("--a", sm_cmd.a, "pair coefficient a");
  sm_cmd.b_opt = sm->add_option("--b", sm_cmd.b, "pair coefficient b");
  sm->add_option("--m", sm_cmd.m, "recursion steps");
  sm_cmd.n_opt = sm->add_option("--n", sm_cmd.n, "qubits");
  sm_cmd.d_opt = sm->add_option("--depth", sm_cmd.d, "depth");
  sm->add_option("--x", sm_cmd.x, "bitstring for exact and monotonicity values");

  VerifyCmd v_cmd;
  auto* ver = app.add_subcommand("verify", "Run verification suites");
  ver->add_option("--config", v_cmd.config_path, "JSON with suite, n, depth, samples, seed, workers");
  ver->add_option("--out", v_cmd.out, "output path (default stdout)");
  v_cmd.suite_opt = ver->add_option("--suite", v_cmd.suite, "suite id or all");
  v_cmd.n_opt = ver->add_option("--n", v_cmd.n, "override qubit count");
  v_cmd.depth_opt = ver->add_option("--depth", v_cmd.depth, "override depth");
  v_cmd.samples_opt = ver->add_option("--samples", v_cmd.samples, "override sample count");
  v_cmd.seed_opt = ver->add_option("--seed", v_cmd.seed, "seed");
  v_cmd.workers_opt = ver->add_option("--workers", v_cmd.workers, "worker threads");

  std::string rep_config, rep_out;
  std::vector<std::string> rep_in;
  auto* rep = app.add_subcommand("report", "Merge result CSVs and summarise verdicts");
  rep->add_option("--config", rep_config, "JSON with an \"inputs\" list");
  rep->add_option("--out", rep_out, "output path (default stdout)");
  rep->add_option("--in", rep_in, "input CSV (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, std::cerr, std::cerr);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*channel) return run_channel(channel_cmd);
    if (*sim) return run_simulate(sim_flags, sim_sample, sim_circuit);
    if (*mc) return run_mc(mc_flags, mc_sidecar);
    if (*cf) return run_closedform(cf_cmd);
    if (*sm) return run_statmech(sm_cmd);
    if (*ver) return run_verify(v_cmd);
    if (*rep) return run_report(rep_config, rep_in, rep_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace rcs
