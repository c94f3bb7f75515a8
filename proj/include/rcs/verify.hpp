#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace rcs {

// Unset fields fall back to each suite's own grid.
struct VerifyOptions {
  std::optional<int> n;
  std::optional<int> depth;
  std::optional<std::uint64_t> samples;
  std::uint64_t seed = 1;
  int workers = 1;
};

// One checked relation. margin is signed slack (positive is good): in
// standard errors for Monte Carlo rows, absolute otherwise.
struct VerifyRow {
  std::string suite;
  std::string check;
  std::string params;
  double value = 0.0;
  double target = 0.0;
  std::string relation;  // "==", "<=", ">="
  double margin = 0.0;
  std::string margin_unit;  // "se" or "abs"
  bool pass = false;
};

std::vector<std::string> suite_ids();
// "all" runs every suite. Unknown ids throw ConfigError.
std::vector<VerifyRow> verify_suite(const std::string& id, const VerifyOptions& opts = {});

void write_verify_csv(std::ostream& out, const std::vector<VerifyRow>& rows);
bool all_pass(const std::vector<VerifyRow>& rows);

}  // namespace rcs
