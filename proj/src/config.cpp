#include "rcs/config.hpp"

#include <algorithm>
#include <set>

#include "rcs/distribution.hpp"

namespace rcs {

namespace {

const std::set<std::string>& allowed_keys() {
  static const std::set<std::string> keys{"n",       "depth", "channel",    "placement", "final_rotations",
                                          "samples", "seed",  "targets",    "bitstrings", "alpha",
                                          "workers", "layout", "margin"};
  return keys;
}

bool is_full_bitstring(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1'; });
}

}  // namespace

std::vector<std::string> known_targets() {
  return {"px",          "marginal",     "conditional",         "px2",  "collision", "uniform_identity",
          "xeb",         "xeb_twirled",  "xeb_twirl_gap",       "collision_twirl_gap", "tail",
          "neglogp",     "neglogp_var",  "zsq",                 "asigma"};
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed_keys().count(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  ExperimentConfig cfg;
  try {
    if (j.contains("n")) cfg.n = j.at("n").get<int>();
    if (j.contains("depth")) cfg.depth = j.at("depth").get<int>();
    if (j.contains("channel")) cfg.channel = j.at("channel").get<ChannelSpec>();
    if (j.contains("placement")) cfg.placement = placement_mode_from_string(j.at("placement").get<std::string>());
    if (j.contains("final_rotations")) {
      for (const auto& r : j.at("final_rotations")) {
        if (!r.is_array() || r.size() != 2) throw ConfigError("final_rotations entries must be [theta, phi]");
        cfg.final_rotations.push_back({r[0].get<double>(), r[1].get<double>()});
      }
    }
    if (j.contains("samples")) {
      if (!j.at("samples").is_number_unsigned()) throw ConfigError("samples must be a non-negative integer");
      cfg.samples = j.at("samples").get<std::uint64_t>();
    }
    if (j.contains("seed")) {
      if (!j.at("seed").is_number_unsigned()) throw ConfigError("seed must be an unsigned 64-bit integer");
      cfg.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("targets")) cfg.targets = j.at("targets").get<std::vector<std::string>>();
    if (j.contains("bitstrings")) {
      const auto& b = j.at("bitstrings");
      if (b.is_string()) {
        const auto s = b.get<std::string>();
        if (s == "all") {
          cfg.bitstrings.kind = BitstringSelector::Kind::all;
        } else if (s == "hamming_ge_half") {
          cfg.bitstrings.kind = BitstringSelector::Kind::hamming_ge_half;
        } else {
          throw ConfigError("bitstrings must be a list, \"all\" or \"hamming_ge_half\"");
        }
      } else {
        cfg.bitstrings.kind = BitstringSelector::Kind::list;
        cfg.bitstrings.items = b.get<std::vector<std::string>>();
      }
    }
    if (j.contains("alpha")) cfg.alpha = j.at("alpha").get<double>();
    if (j.contains("workers")) cfg.workers = j.at("workers").get<int>();
    if (j.contains("layout")) cfg.layout = layout_from_string(j.at("layout").get<std::string>());
    if (j.contains("margin")) cfg.margin = j.at("margin").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

nlohmann::json config_to_json(const ExperimentConfig& cfg, bool include_workers) {
  nlohmann::json rot = nlohmann::json::array();
  for (const auto& r : cfg.final_rotations) rot.push_back({r.theta, r.phi});
  nlohmann::json bits;
  switch (cfg.bitstrings.kind) {
    case BitstringSelector::Kind::all: bits = "all"; break;
    case BitstringSelector::Kind::hamming_ge_half: bits = "hamming_ge_half"; break;
    case BitstringSelector::Kind::list: bits = cfg.bitstrings.items; break;
  }
  nlohmann::json j{{"n", cfg.n},
                   {"depth", cfg.depth},
                   {"channel", cfg.channel},
                   {"placement", to_string(cfg.placement)},
                   {"final_rotations", rot},
                   {"samples", cfg.samples},
                   {"seed", cfg.seed},
                   {"targets", cfg.targets},
                   {"bitstrings", bits},
                   {"alpha", cfg.alpha},
                   {"layout", to_string(cfg.layout)},
                   {"margin", cfg.margin}};
  if (include_workers) j["workers"] = cfg.workers;
  return j;
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.n < 1 || cfg.n > kMaxSimQubits) {
    throw ConfigError("n must lie in [1, " + std::to_string(kMaxSimQubits) + "]");
  }
  if (cfg.depth < 1) throw ConfigError("depth must be at least 1");
  if (cfg.samples < kMinSamples) throw ConfigError("samples must be at least 100");
  if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
  if (cfg.workers < 1) throw ConfigError("workers must be at least 1");
  if (!(cfg.margin > 0.0)) throw ConfigError("margin must be positive");
  if (cfg.targets.empty()) throw ConfigError("at least one target is required");
  const auto known = known_targets();
  for (const auto& t : cfg.targets) {
    if (std::find(known.begin(), known.end(), t) == known.end()) throw ConfigError("unknown target '" + t + "'");
  }
  try {
    const NoisePlacement placement = make_placement(cfg);
    placement.channel.require_cptp();
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  } catch (const CptpViolation& e) {
    throw ConfigError(std::string("channel: ") + e.what());
  }
  if (cfg.bitstrings.kind == BitstringSelector::Kind::list) {
    if (cfg.bitstrings.items.empty()) throw ConfigError("bitstring list is empty");
    for (const auto& s : cfg.bitstrings.items) {
      try {
        if (s.find('[') != std::string::npos) {
          parse_conditional_pattern(s, cfg.n);
        } else if (s.find('*') != std::string::npos) {
          marginal(uniform_distribution(cfg.n), s);
        } else {
          parse_bitstring(s, cfg.n);
        }
      } catch (const ParameterError& e) {
        throw ConfigError("bitstring '" + s + "': " + e.what());
      }
    }
  }
}

NoisePlacement make_placement(const ExperimentConfig& cfg) {
  NoisePlacement p;
  p.mode = cfg.placement;
  p.channel = make_channel(cfg.channel);
  p.final_rotations = cfg.final_rotations;
  validate_placement(p, cfg.n);
  return p;
}

std::vector<std::string> selected_bitstrings(const ExperimentConfig& cfg) {
  std::vector<std::string> out;
  if (cfg.bitstrings.kind == BitstringSelector::Kind::list) {
    for (const auto& s : cfg.bitstrings.items) {
      if (is_full_bitstring(s)) out.push_back(s);
    }
    return out;
  }
  const std::uint64_t size = std::uint64_t(1) << cfg.n;
  for (std::uint64_t x = 0; x < size; ++x) {
    if (cfg.bitstrings.kind == BitstringSelector::Kind::hamming_ge_half && 2 * hamming_weight(x) < cfg.n) continue;
    out.push_back(to_bitstring(x, cfg.n));
  }
  return out;
}

std::vector<std::string> selected_marginals(const ExperimentConfig& cfg) {
  std::vector<std::string> out;
  if (cfg.bitstrings.kind == BitstringSelector::Kind::list) {
    for (const auto& s : cfg.bitstrings.items) {
      if (s.find('*') != std::string::npos && s.find('[') == std::string::npos) out.push_back(s);
    }
    return out;
  }
  const std::string blank(static_cast<std::size_t>(cfg.n), '*');
  for (int i = 0; i < cfg.n; ++i) {
    for (char b : {'0', '1'}) {
      std::string s = blank;
      s[i] = b;
      out.push_back(s);
    }
  }
  for (int i = 0; i < cfg.n; ++i) {
    for (int k = i + 1; k < cfg.n; ++k) {
      for (int v = 0; v < 4; ++v) {
        std::string s = blank;
        s[i] = static_cast<char>('0' + (v >> 1));
        s[k] = static_cast<char>('0' + (v & 1));
        out.push_back(s);
      }
    }
  }
  return out;
}

std::vector<std::string> selected_conditionals(const ExperimentConfig& cfg) {
  std::vector<std::string> out;
  if (cfg.bitstrings.kind == BitstringSelector::Kind::list) {
    for (const auto& s : cfg.bitstrings.items) {
      if (s.find('[') != std::string::npos) out.push_back(s);
    }
    if (!out.empty()) return out;
  }
  for (const auto& x : selected_bitstrings(cfg)) {
    for (int i = 0; i < cfg.n; ++i) {
      std::string s = x.substr(0, static_cast<std::size_t>(i)) + "[" + x[i] + "]";
      s += std::string(static_cast<std::size_t>(cfg.n - i - 1), '*');
      out.push_back(s);
    }
  }
  return out;
}

}  // namespace rcs
