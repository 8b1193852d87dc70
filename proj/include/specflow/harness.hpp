#pragma once

#include <map>

#include "specflow/fredholm.hpp"
#include "specflow/gen.hpp"
#include "specflow/paths.hpp"

namespace specflow {

inline constexpr const char* kVersion = "0.1.0";

struct AlgebraSpecConfig {
  std::string name;
  std::vector<Block> blocks;
};

struct CampaignConfig {
  std::vector<std::string> suites;
  std::vector<double> p_values;
  std::vector<AlgebraSpecConfig> algebras;
  int trials = 1;
  uint64_t seed = 1;
  double tol_identity = 1e-9;
  double tol_slack = 1e-8;
  double tol_quad = 1e-8;
  std::string output_dir;   // empty: keep everything in memory
  double kp_override = -1.0;  // < 0: estimate per p
  int kp_trials = 200;

  void validate() const;
};

struct ReportBundle {
  std::vector<InequalityReport> reports;
  std::vector<ConstantEstimate> constants;
  std::vector<SpectralFlowResult> sf_results;
  std::string version;
  uint64_t seed = 0;
  std::string timestamp;

  int failures() const {
    int n = 0;
    for (const auto& r : reports)
      if (!r.pass) ++n;
    return n;
  }
};

const std::vector<std::string>& known_suites();
bool suite_needs_kp(const std::string& suite);
/// Whether the statement behind the suite admits the exponent (p = 1 is
/// allowed only where the underlying theorem covers it).
bool suite_allows_p(const std::string& suite, double p);

struct TrialResult {
  std::vector<InequalityReport> reports;
  std::vector<std::pair<std::string, AlgebraElement>> inputs;
};

/// One deterministic trial of a named suite; trial_seed is the substream
/// seed (seed xor suite-hash xor trial-index).
TrialResult run_trial(const std::string& suite, const AlgebraPtr& algebra, double p,
                      uint64_t trial_seed, double kp, double tol_identity);

/// Executes the configured campaign over the (suite, p, algebra, trial)
/// grid.  Trials run concurrently; reports come back in grid order, so two
/// runs with the same config are byte-identical (timestamp aside).  When
/// output_dir is set, writes reports.jsonl, summary.csv, constants.json,
/// meta.json and archives failing instances (capped at 100 per suite).
ReportBundle run_suite(const CampaignConfig& config);

}  // namespace specflow
