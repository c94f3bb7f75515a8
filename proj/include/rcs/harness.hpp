#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rcs/config.hpp"
#include "rcs/distribution.hpp"

namespace rcs {

enum class Verdict { pass, fail, not_applicable };
std::string to_string(Verdict v);

// How an estimate is compared with its reference or bound.
enum class Relation { none, at_least, at_most };

struct EstimateRecord {
  std::string estimator;
  std::string bitstring = "-";
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::optional<double> reference;
  std::optional<double> bound;
  Relation relation = Relation::none;
  Verdict verdict = Verdict::not_applicable;
  // |value - reference| / SE when there is a reference, otherwise the signed
  // distance to the bound in SE, positive on the side the relation asks for.
  double margin = 0.0;
};

// Checks value against the reference (equality) and the bound (relation),
// each with k standard errors of slack, and fills verdict and margin. Zero
// standard error means an exact comparison at 1e-12.
void judge(EstimateRecord& rec, double k);

struct ExperimentResult {
  std::string run_id;
  ExperimentConfig config;
  std::vector<EstimateRecord> records;
  std::uint64_t excluded = 0;  // circuits dropped by conditioning underflow
  double exclusion_rate = 0.0;
  bool reliable = true;  // false when more than 10% of circuits were excluded
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Runs f(i) for i in [0, count) over `workers` threads pulling indices from a
// shared counter. f must only write to storage owned by index i.
void parallel_for_index(std::uint64_t count, int workers, const std::function<void(std::uint64_t)>& f);

// Per-circuit quantities behind the log-probability targets.
struct LogProbSample {
  double neglogp = 0.0;
  double a_sigma_mean = 0.0;       // (1/n!) sum_sigma A_sigma, exact
  std::vector<double> z_expect;    // <Z_i> for each qubit
  bool excluded = false;
};
LogProbSample logprob_sample(const OutputDistribution& dist, std::uint64_t x);

// Same quantity by brute force over all n! orderings; test oracle for small n.
double a_sigma_brute_force(const OutputDistribution& dist, std::uint64_t x);

std::string run_id(const ExperimentConfig& cfg);
std::string artifact_version();

void write_csv_header(std::ostream& out);
void write_csv(std::ostream& out, const ExperimentResult& result, bool header = true);
nlohmann::json sidecar_json(const ExperimentResult& result);
std::string format_double(double v);

// Closed-form expectation of p_x (or a marginal pattern) under the run's
// noise placement.
double reference_first_moment(const ExperimentConfig& cfg, const NoisePlacement& placement, std::string_view pattern);
// E[Pr(X_i = b | ...)] for the run's placement.
double reference_conditional(const ExperimentConfig& cfg, const NoisePlacement& placement, int qubit, int bit);

}  // namespace rcs
