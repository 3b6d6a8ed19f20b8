/**
 * This code is part of petzrec.
 *
 * (C) Copyright petzrec developers 2026.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef PETZREC_HARNESS_HPP_
#define PETZREC_HARNESS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "petzrec/serialization.hpp"

namespace petzrec {

//=============================================================================
// Margin registry
//=============================================================================

// Every margin the harness can assert, with its default slack tolerance.
// A report passes when each asserted, non-skipped margin is >= -tolerance.
// swb_gap is evaluated and logged but never asserted.
struct MarginSpec {
  std::string name;
  double tolerance = 0.0;
  bool asserted = true;
  std::string kind;  // "scalar", "superop" or "both"
  std::string description;
};

const std::vector<MarginSpec> &margin_registry();
const MarginSpec *find_margin(const std::string &name);

//=============================================================================
// Configuration
//=============================================================================

struct AlgebraSpec {
  std::vector<int> block_dims;
  std::vector<double> trace_weights;

  AlgebraPtr make() const {
    return TracialAlgebra::make(block_dims, trace_weights);
  }
};

struct HarnessConfig {
  std::vector<AlgebraSpec> algebra_grid;
  std::vector<std::string> channel_families;
  int trials = 1000;          // scalar trials per (algebra, family)
  int superop_trials = 200;   // superoperator trials per algebra
  std::uint64_t master_seed = 20260808ULL;
  std::map<std::string, double> tolerances;  // overrides by margin name
  double invertibility_floor = 1e-6;
  double strictness_floor = 1e-8;
  // Randomized channels are resampled until phi(B) clears this floor, which
  // keeps the modular-operator condition numbers inside double precision for
  // the 1e-9 slack checks. Strictness itself is still judged at
  // strictness_floor.
  double conditioning_floor = 1e-4;
  int oracle_samples = 200;
  std::vector<std::string> skip;  // margin names excluded from assertion
  std::string output_path;        // empty: no report file
  std::string format = "json";    // "json" or "csv"
  int max_persisted_failures = 16;
  int max_persisted_swb_candidates = 8;

  static HarnessConfig defaults();
  static HarnessConfig from_json(const Json &j);
  Json to_json() const;

  // Throws ConfigError on invalid settings, unknown margin names in
  // skip/tolerances, or infeasible floors.
  void validate() const;

  double tolerance_for(const std::string &margin) const;
  bool skipped(const std::string &margin) const;
};

//=============================================================================
// Reports
//=============================================================================

struct TrialReport {
  std::uint64_t trial_id = 0;
  std::uint64_t seed = 0;
  std::string kind;    // "scalar" or "superop"
  std::string family;
  AlgebraSpec algebra;
  std::map<std::string, double> margins;
  std::map<std::string, double> values;  // informational quantities
  bool pass = true;
  int resamples = 0;
  // Set when the trial aborted (numerical breakdown, strictness exhaustion)
  // instead of producing margins; an aborted trial counts as a failure.
  std::string error;

  Json to_json() const;
};

struct CheckSummary {
  int count = 0;
  int failures = 0;
  double min_margin = 0.0;
  double tolerance = 0.0;
  bool asserted = true;
  bool skipped = false;
};

struct SuiteResult {
  std::vector<TrialReport> trials;
  std::map<std::string, CheckSummary> checks;
  int failures = 0;
  int resamples_total = 0;
  // Sign histogram for the logged (never asserted) swb gap.
  int swb_negative = 0;
  int swb_nonnegative = 0;
  double swb_min = 0.0;
  double swb_max = 0.0;
  double swb_mean = 0.0;
  std::vector<TrialInstance> failing_instances;
  std::vector<TrialInstance> swb_candidates;

  bool all_passed() const { return failures == 0; }
  Json to_json(const HarnessConfig &config,
               const std::string &timestamp = std::string(),
               double elapsed_seconds = 0.0) const;
  std::string to_csv() const;
  std::string summary_text() const;
};

//=============================================================================
// Execution
//=============================================================================

// Channel family helpers (exposed for tests).
bool family_applicable(const std::string &family, const TracialAlgebra &alg);
bool family_randomized(const std::string &family);
Channel build_family_channel(const std::string &family, const AlgebraPtr &alg,
                             std::uint64_t seed);

// Runs the full randomized battery over the configured grid. Deterministic
// for a fixed config; per-trial seeds are derived from the master seed by
// counters. Writes the report and any failing/candidate instances next to
// output_path when one is set.
SuiteResult run_suite(const HarnessConfig &config);

// Recomputes one trial from a persisted instance through the same code path;
// margins are bit-identical to the original run.
TrialReport replay(const TrialInstance &inst, const HarnessConfig &config);

// Worked 2x2 example table for the demo subcommand.
std::string render_demo(const std::string &channel_kind);

}  // namespace petzrec

#endif  // PETZREC_HARNESS_HPP_
