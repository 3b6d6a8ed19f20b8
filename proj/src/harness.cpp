/**
 * This code is part of petzrec.
 *
 * (C) Copyright petzrec developers 2026.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "petzrec/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>

#include "petzrec/entropy.hpp"
#include "petzrec/fidelity.hpp"
#include "petzrec/recovery.hpp"
#include "petzrec/rng.hpp"
#include "petzrec/superop_checks.hpp"

namespace petzrec {

//=============================================================================
// Margin registry
//=============================================================================

const std::vector<MarginSpec> &margin_registry() {
  static const std::vector<MarginSpec> specs = {
      {"l2_boundedness", 1e-9, true, "scalar",
       "||phi(X)||_2^2 <= ||phi(1)|| ||X||_2^2 (L2 boundedness)"},
      {"adjoint_positivity", 1e-9, true, "scalar",
       "min eig phi^*(positive) >= 0 (adjoint positivity)"},
      {"am_contraction", 1e-9, true, "both",
       "||phi(X)||_{phi(B),2} <= ||X||_{B,2} (Araki-Masuda contraction)"},
      {"dpi_s2", 1e-9, true, "scalar",
       "S_2(phi(A)|phi(B)) <= S_2(A|B) (data processing)"},
      {"chain_am_bound", 1e-9, true, "scalar",
       "||A - R(phi(A))||_{B,2}^2 <= entropy gap"},
      {"chain_norm_comparison", 1e-9, true, "scalar",
       "||A - R(phi(A))||_1^2 <= ||A - R(phi(A))||_{B,2}^2"},
      {"chain_l1_bound", 1e-9, true, "scalar",
       "||A - R(phi(A))||_1^2 <= entropy gap"},
      {"chain_fidelity_bound", 1e-9, true, "scalar",
       "4(1 - F(A|R(phi(A))))^2 <= ||A - R(phi(A))||_1^2"},
      {"petz_fixed_point", 1e-9, true, "scalar",
       "R(phi(B)) = B (recovery fixed point)"},
      {"petz_adjoint", 1e-9, true, "scalar",
       "R is the <.,.>_B / <.,.>_{phi(B)} adjoint of phi"},
      {"petz_choi_psd", 1e-10, true, "scalar",
       "Petz map Choi matrix is PSD (complete positivity)"},
      {"petz_trace_preservation", 1e-10, true, "scalar",
       "Petz map preserves the weighted trace"},
      {"petz_sufficiency", 0.0, true, "scalar",
       "exact recovery forces vanishing KL and S_2 gaps"},
      {"trace_vs_am", 1e-9, true, "scalar",
       "||X||_1^2 <= ||X||_{B,2}^2"},
      {"kl_nonneg", 1e-9, true, "scalar",
       "D(A|B) >= 0 for states"},
      {"fid_oracle_dominated", 1e-12, true, "scalar",
       "closed-form fidelity dominates sampled unitary overlaps"},
      {"fid_polar_attained", 1e-10, true, "scalar",
       "polar unitary attains the fidelity supremum"},
      {"bures_triangle", 1e-9, true, "scalar",
       "Bures angle satisfies the triangle inequality"},
      {"powers_stormer", 1e-10, true, "scalar",
       "||X^{1/2} - Y^{1/2}||_2^2 <= ||X - Y||_1"},
      {"fidelity_bound", 1e-10, true, "scalar",
       "2(1 - F(X|Y)) <= ||X - Y||_1"},
      {"fid_monotonicity", 1e-9, true, "scalar",
       "F(phi(A)|phi(B)) >= F(A|B)"},
      {"joint_concavity", 1e-9, true, "scalar",
       "fidelity is jointly concave over state mixtures"},
      {"contraction_norm", 1e-9, true, "superop",
       "V = R_{B^{1/2}} phi^* R_{phi(B)^{-1/2}} is a contraction"},
      {"modular_domination", 1e-9, true, "superop",
       "V^* Delta V <= Delta_0"},
      {"sandwich_domination", 1e-9, true, "superop",
       "phi L_{B^{1/2}} R_{B^{1/2}} phi^* <= L_{phi(B)^{1/2}} R_{phi(B)^{1/2}}"},
      {"op_concavity", 1e-9, true, "superop",
       "V^* Delta^{1/2} V <= Delta_0^{1/2} (operator concavity of sqrt)"},
      {"amgm_psd", 1e-9, true, "superop",
       "L_{B^{-1/2}} R_{B^{-1/2}} >= 2 (L_B + R_B)^{-1}"},
      {"swb_gap", 0.0, false, "scalar",
       "[KL gap] - [-2 ln F]; logged only, no sign contract"},
  };
  return specs;
}

const MarginSpec *find_margin(const std::string &name) {
  for (const auto &spec : margin_registry()) {
    if (spec.name == name) return &spec;
  }
  return nullptr;
}

//=============================================================================
// Configuration
//=============================================================================

namespace {

const std::vector<std::string> &known_families() {
  static const std::vector<std::string> families = {
      "unitary",    "pinching",   "trace",
      "random_single_block", "direct_sum", "composed"};
  return families;
}

}  // namespace

HarnessConfig HarnessConfig::defaults() {
  HarnessConfig cfg;
  cfg.algebra_grid = {
      {{2}, {1.0 / 2}},
      {{3}, {1.0 / 3}},
      {{4}, {1.0 / 4}},
      {{6}, {1.0 / 6}},
      {{2, 2}, {1.0 / 8, 3.0 / 8}},
      {{1, 1, 2}, {1.0 / 4, 1.0 / 4, 1.0 / 4}},
  };
  cfg.channel_families = known_families();
  return cfg;
}

Json HarnessConfig::to_json() const {
  Json grid = Json::array();
  for (const auto &a : algebra_grid) {
    grid.push_back(Json{{"block_dims", a.block_dims},
                        {"trace_weights", a.trace_weights}});
  }
  return Json{{"algebra_grid", std::move(grid)},
              {"channel_families", channel_families},
              {"trials", trials},
              {"superop_trials", superop_trials},
              {"master_seed", master_seed},
              {"tolerances", tolerances},
              {"invertibility_floor", invertibility_floor},
              {"strictness_floor", strictness_floor},
              {"conditioning_floor", conditioning_floor},
              {"oracle_samples", oracle_samples},
              {"skip", skip},
              {"output_path", output_path},
              {"format", format},
              {"max_persisted_failures", max_persisted_failures},
              {"max_persisted_swb_candidates", max_persisted_swb_candidates}};
}

HarnessConfig HarnessConfig::from_json(const Json &j) {
  HarnessConfig cfg = defaults();
  try {
    if (j.contains("algebra_grid")) {
      cfg.algebra_grid.clear();
      for (const auto &a : j["algebra_grid"]) {
        cfg.algebra_grid.push_back(
            AlgebraSpec{a.at("block_dims").get<std::vector<int>>(),
                        a.at("trace_weights").get<std::vector<double>>()});
      }
    }
    if (j.contains("channel_families")) {
      cfg.channel_families =
          j["channel_families"].get<std::vector<std::string>>();
    }
    if (j.contains("trials")) cfg.trials = j["trials"].get<int>();
    if (j.contains("superop_trials")) {
      cfg.superop_trials = j["superop_trials"].get<int>();
    }
    if (j.contains("master_seed")) {
      cfg.master_seed = j["master_seed"].get<std::uint64_t>();
    }
    if (j.contains("tolerances")) {
      cfg.tolerances = j["tolerances"].get<std::map<std::string, double>>();
    }
    if (j.contains("invertibility_floor")) {
      cfg.invertibility_floor = j["invertibility_floor"].get<double>();
    }
    if (j.contains("strictness_floor")) {
      cfg.strictness_floor = j["strictness_floor"].get<double>();
    }
    if (j.contains("conditioning_floor")) {
      cfg.conditioning_floor = j["conditioning_floor"].get<double>();
    }
    if (j.contains("oracle_samples")) {
      cfg.oracle_samples = j["oracle_samples"].get<int>();
    }
    if (j.contains("skip")) {
      cfg.skip = j["skip"].get<std::vector<std::string>>();
    }
    if (j.contains("output_path")) {
      cfg.output_path = j["output_path"].get<std::string>();
    }
    if (j.contains("format")) cfg.format = j["format"].get<std::string>();
    if (j.contains("max_persisted_failures")) {
      cfg.max_persisted_failures = j["max_persisted_failures"].get<int>();
    }
    if (j.contains("max_persisted_swb_candidates")) {
      cfg.max_persisted_swb_candidates =
          j["max_persisted_swb_candidates"].get<int>();
    }
  } catch (const Json::exception &e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return cfg;
}

void HarnessConfig::validate() const {
  if (trials < 1) throw ConfigError("config: trials must be >= 1");
  if (superop_trials < 0) throw ConfigError("config: superop_trials < 0");
  if (oracle_samples < 1) throw ConfigError("config: oracle_samples < 1");
  if (algebra_grid.empty()) throw ConfigError("config: empty algebra grid");
  if (channel_families.empty()) {
    throw ConfigError("config: empty channel family list");
  }
  if (format != "json" && format != "csv") {
    throw ConfigError("config: format must be json or csv");
  }
  for (const auto &fam : channel_families) {
    if (std::find(known_families().begin(), known_families().end(), fam) ==
        known_families().end()) {
      throw ConfigError("config: unknown channel family '" + fam + "'");
    }
  }
  for (const auto &a : algebra_grid) {
    AlgebraPtr alg = a.make();  // throws on invalid descriptor
    if (invertibility_floor >= max_feasible_floor(*alg)) {
      throw ConfigError("config: invertibility floor infeasible for algebra");
    }
  }
  if (!(invertibility_floor > 0.0)) {
    throw ConfigError("config: invertibility floor must be positive");
  }
  if (!(strictness_floor > 0.0) || !(conditioning_floor > 0.0)) {
    throw ConfigError("config: floors must be positive");
  }
  // A check can only be disabled through the explicit skip list; unknown
  // names in skip or tolerances would silently drop coverage, so refuse them.
  for (const auto &name : skip) {
    if (!find_margin(name)) {
      throw ConfigError("config: skip names unknown check '" + name + "'");
    }
  }
  for (const auto &[name, tol] : tolerances) {
    if (!find_margin(name)) {
      throw ConfigError("config: tolerance names unknown check '" + name +
                        "'");
    }
    if (tol < 0.0) throw ConfigError("config: tolerance must be >= 0");
  }
}

double HarnessConfig::tolerance_for(const std::string &margin) const {
  auto it = tolerances.find(margin);
  if (it != tolerances.end()) return it->second;
  const MarginSpec *spec = find_margin(margin);
  return spec ? spec->tolerance : 0.0;
}

bool HarnessConfig::skipped(const std::string &margin) const {
  return std::find(skip.begin(), skip.end(), margin) != skip.end();
}

//=============================================================================
// Channel families
//=============================================================================

bool family_applicable(const std::string &family, const TracialAlgebra &alg) {
  if (family == "random_single_block") return alg.num_blocks() == 1;
  if (family == "direct_sum") return alg.num_blocks() >= 2;
  return true;
}

bool family_randomized(const std::string &family) {
  return family != "pinching" && family != "trace";
}

namespace {

Channel random_block_mix(const AlgebraPtr &alg, std::uint64_t seed) {
  // Blockwise random channels joined by the algebra's own block masses.
  std::vector<Channel> parts;
  std::vector<double> masses;
  for (int i = 0; i < alg->num_blocks(); ++i) {
    const AlgebraPtr blk = TracialAlgebra::single_block(alg->block_dim(i));
    const int max_kraus = std::max(1, alg->block_dim(i));
    const int num_kraus =
        1 + static_cast<int>(splitmix64(derive_seed(seed, 100 + i)) %
                             static_cast<std::uint64_t>(max_kraus));
    parts.push_back(
        random_channel(blk, blk, num_kraus, derive_seed(seed, 200 + i)));
    masses.push_back(alg->weight(i) * alg->block_dim(i));
  }
  return direct_sum(parts, masses);
}

}  // namespace

Channel build_family_channel(const std::string &family, const AlgebraPtr &alg,
                             std::uint64_t seed) {
  if (family == "unitary") {
    return unitary_channel(alg, random_unitary(alg, derive_seed(seed, 0)));
  }
  if (family == "pinching") return pinching_channel(alg);
  if (family == "trace") return trace_channel(alg);
  if (family == "random_single_block") {
    if (alg->num_blocks() != 1) {
      throw ConfigError("random_single_block family needs one block");
    }
    const int n2 = alg->block_dim(0) * alg->block_dim(0);
    const int num_kraus =
        2 + static_cast<int>(splitmix64(derive_seed(seed, 1)) %
                             static_cast<std::uint64_t>(std::min(3, n2)));
    return random_channel(alg, alg, num_kraus, derive_seed(seed, 2));
  }
  if (family == "direct_sum") {
    if (alg->num_blocks() < 2) {
      throw ConfigError("direct_sum family needs at least two blocks");
    }
    return random_block_mix(alg, seed);
  }
  if (family == "composed") {
    const Channel u =
        unitary_channel(alg, random_unitary(alg, derive_seed(seed, 3)));
    if (alg->num_blocks() == 1) {
      const int num_kraus = 2;
      const Channel r = random_channel(alg, alg, num_kraus, derive_seed(seed, 4));
      return compose(r, u);
    }
    return compose(pinching_channel(alg),
                   compose(random_block_mix(alg, derive_seed(seed, 5)), u));
  }
  throw ConfigError("unknown channel family '" + family + "'");
}

namespace {

struct ChannelDraw {
  Channel channel;
  int resamples = 0;
  double strictness_margin = 0.0;
};

// Draw a channel of the given family, resampling randomized families until
// phi(B) clears the conditioning floor (see HarnessConfig::conditioning_floor).
ChannelDraw draw_channel(const std::string &family, const AlgebraPtr &alg,
                         const ReferenceState &b, std::uint64_t seed,
                         const HarnessConfig &cfg) {
  std::optional<ChannelDraw> fallback;
  const int max_attempts = family_randomized(family) ? 32 : 1;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Channel phi =
        build_family_channel(family, alg, derive_seed(seed, 3 + attempt));
    const StrictnessResult strict = is_strict(phi, b, cfg.strictness_floor);
    if (strict.margin >= cfg.conditioning_floor) {
      return ChannelDraw{std::move(phi), attempt, strict.margin};
    }
    if (strict.strict && !fallback) {
      fallback = ChannelDraw{std::move(phi), attempt, strict.margin};
    }
  }
  if (fallback) return *std::move(fallback);
  throw StrictnessError("draw_channel: no strict channel after resampling");
}

}  // namespace

//=============================================================================
// Trial computation
//=============================================================================

namespace {

AlgebraSpec spec_of(const TracialAlgebra &alg) {
  return AlgebraSpec{alg.block_dims(), alg.trace_weights()};
}

void apply_pass_logic(TrialReport &rep, const HarnessConfig &cfg) {
  rep.pass = true;
  for (const auto &[name, value] : rep.margins) {
    const MarginSpec *spec = find_margin(name);
    if (!spec || !spec->asserted || cfg.skipped(name)) continue;
    if (value < -cfg.tolerance_for(name)) rep.pass = false;
  }
}

TrialReport compute_scalar_report(const std::string &family,
                                  std::uint64_t trial_id, std::uint64_t seed,
                                  const StateElement &a,
                                  const ReferenceState &b, const Channel &phi,
                                  int resamples, const HarnessConfig &cfg) {
  const AlgebraPtr &alg = a.algebra();
  TrialReport rep;
  rep.trial_id = trial_id;
  rep.seed = seed;
  rep.kind = "scalar";
  rep.family = family;
  rep.algebra = spec_of(*alg);
  rep.resamples = resamples;

  const HermitianElement x = random_hermitian(alg, derive_seed(seed, 2));
  const StateElement a_pos = random_state(alg, derive_seed(seed, 40));
  const StateElement a2 = random_state(alg, derive_seed(seed, 41));
  const StateElement a3 = random_state(alg, derive_seed(seed, 42));

  const RecoverySetup setup(phi, b, cfg.strictness_floor);

  // Channel-level norm and positivity bounds on a random Hermitian probe.
  const double phi_one_norm =
      operator_norm(phi.apply(AlgebraElement::identity(alg)));
  const double x_l2 = l2_norm(x);
  const double phix_l2 = l2_norm(phi.apply(x));
  rep.margins["l2_boundedness"] = phi_one_norm * x_l2 * x_l2 - phix_l2 * phix_l2;
  rep.margins["adjoint_positivity"] =
      min_eigenvalue(phi.apply_adjoint(a_pos));
  rep.margins["am_contraction"] =
      am_norm(x, setup.source_context(), 2.0) -
      am_norm(phi.apply(x), setup.target_context(), 2.0);

  // Recoverability chain.
  const ChainReport chain = chain_report(a, setup);
  rep.margins["dpi_s2"] = chain.entropy_gap;
  rep.margins["chain_am_bound"] = chain.margin_am_bound();
  rep.margins["chain_norm_comparison"] = chain.margin_norm_comparison();
  rep.margins["chain_l1_bound"] = chain.margin_l1_bound();
  rep.margins["chain_fidelity_bound"] = chain.margin_fidelity_bound();
  rep.values["s2_source"] = chain.s2_source;
  rep.values["s2_target"] = chain.s2_target;
  rep.values["am_residual_sq"] = chain.am_residual_sq;
  rep.values["l1_residual_sq"] = chain.l1_residual_sq;
  rep.values["fidelity_term"] = chain.fidelity_term;

  // S_p gaps away from p = 2: evaluated, never asserted.
  const StateElement phi_a(phi.apply(a));
  for (const double p : {1.5, 3.0}) {
    const double gap =
        sandwiched_entropy(a, setup.source_context(), p) -
        sandwiched_entropy(phi_a, setup.target_context(), p);
    rep.values[p == 1.5 ? "dpi_s1_5" : "dpi_s3"] = gap;
  }

  // Petz map certificates.
  rep.margins["petz_fixed_point"] = -setup.fixed_point_residual();
  rep.margins["petz_adjoint"] = -am_adjoint_residual(setup);
  rep.margins["petz_choi_psd"] = setup.petz_choi_min_eigenvalue();
  rep.margins["petz_trace_preservation"] =
      -setup.recovery().trace_preservation_residual();
  rep.values["strictness_margin"] = setup.strictness_margin();

  // Sufficiency direction; pinching instances use the pinched state so the
  // hypothesis (exact recovery) is actually reachable.
  const StateElement a_suff =
      family == "pinching" ? StateElement(phi.apply(a)) : a;
  const SufficiencyResult suff = petz_sufficiency_check(a_suff, setup);
  rep.margins["petz_sufficiency"] = suff.margin();
  rep.values["recovery_residual"] = suff.recovery_residual;

  // Norm comparison and KL positivity.
  rep.margins["trace_vs_am"] = trace_vs_am_margin(x, b);
  rep.margins["kl_nonneg"] = kl_divergence(a, setup.source_context());

  // Fidelity suite on an independent state pair.
  const FidelityPair pair(a, a2);
  const double f_ab = fidelity(pair);
  rep.values["fidelity_ab"] = f_ab;
  const FidelityOracleResult oracle =
      fidelity_unitary_oracle(pair, cfg.oracle_samples, derive_seed(seed, 43));
  rep.margins["fid_oracle_dominated"] = f_ab - oracle.best_sampled;
  rep.margins["fid_polar_attained"] = -oracle.polar_residual;
  rep.margins["powers_stormer"] = powers_stormer_slack(pair);
  rep.margins["fidelity_bound"] = fidelity_bound_slack(pair);
  rep.margins["fid_monotonicity"] = monotonicity_slack(pair, phi);

  const FidelityPair pair2(a3, StateElement(b));
  double concavity = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 9; ++k) {
    concavity =
        std::min(concavity, joint_concavity_slack(pair, pair2, 0.1 * k));
  }
  rep.margins["joint_concavity"] = concavity;

  const FidelityPair p12(a, a2), p13(a, a3), p23(a2, a3);
  const double d12 = bures_angle(p12);
  const double d13 = bures_angle(p13);
  const double d23 = bures_angle(p23);
  rep.margins["bures_triangle"] =
      std::min({d13 + d23 - d12, d12 + d23 - d13, d12 + d13 - d23});

  // Logged-only gap around the disproved fidelity refinement.
  rep.margins["swb_gap"] = swb_gap(a, setup);

  apply_pass_logic(rep, cfg);
  return rep;
}

TrialReport compute_superop_report(const std::string &family,
                                   std::uint64_t trial_id, std::uint64_t seed,
                                   const ReferenceState &b, const Channel &phi,
                                   int resamples, const HarnessConfig &cfg) {
  const AlgebraPtr &alg = b.algebra();
  TrialReport rep;
  rep.trial_id = trial_id;
  rep.seed = seed;
  rep.kind = "superop";
  rep.family = family;
  rep.algebra = spec_of(*alg);
  rep.resamples = resamples;

  const HermitianElement x = random_hermitian(alg, derive_seed(seed, 2));
  rep.margins["contraction_norm"] =
      contraction_norm_margin(phi, b, cfg.strictness_floor);
  rep.margins["modular_domination"] = modular_domination_margin(phi, b, cfg.strictness_floor);
  rep.margins["sandwich_domination"] = sandwich_domination_margin(phi, b, cfg.strictness_floor);
  rep.margins["op_concavity"] =
      operator_concavity_margin(phi, b, cfg.strictness_floor);
  rep.margins["amgm_psd"] = amgm_psd_margin(b);
  rep.margins["am_contraction"] =
      am_contraction_margin(x, b, phi, cfg.strictness_floor);
  rep.values["strictness_margin"] = is_strict(phi, b, cfg.strictness_floor).margin;

  apply_pass_logic(rep, cfg);
  return rep;
}

std::string iso8601_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc;
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

}  // namespace

//=============================================================================
// Reports
//=============================================================================

Json TrialReport::to_json() const {
  Json j{{"trial_id", trial_id},
         {"seed", seed},
         {"kind", kind},
         {"family", family},
         {"algebra", Json{{"block_dims", algebra.block_dims},
                          {"trace_weights", algebra.trace_weights}}},
         {"margins", margins},
         {"values", values},
         {"pass", pass},
         {"resamples", resamples}};
  if (!error.empty()) j["error"] = error;
  return j;
}

Json SuiteResult::to_json(const HarnessConfig &config,
                          const std::string &timestamp,
                          double elapsed_seconds) const {
  Json checks_json = Json::object();
  for (const auto &[name, summary] : checks) {
    checks_json[name] = Json{{"count", summary.count},
                             {"failures", summary.failures},
                             {"min_margin", summary.min_margin},
                             {"tolerance", summary.tolerance},
                             {"asserted", summary.asserted},
                             {"skipped", summary.skipped}};
  }
  Json trials_json = Json::array();
  for (const auto &t : trials) trials_json.push_back(t.to_json());
  return Json{
      {"schema_version", 1},
      {"header", Json{{"tool", "petzrec"},
                      {"timestamp", timestamp.empty() ? iso8601_now()
                                                      : timestamp},
                      {"elapsed_seconds", elapsed_seconds}}},
      {"config", config.to_json()},
      {"summary",
       Json{{"trials_total", trials.size()},
            {"failures", failures},
            {"resamples_total", resamples_total},
            {"checks", std::move(checks_json)},
            {"swb",
             Json{{"negative", swb_negative},
                  {"nonnegative", swb_nonnegative},
                  {"min", swb_min},
                  {"max", swb_max},
                  {"mean", swb_mean}}}}},
      {"trials", std::move(trials_json)}};
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const std::vector<std::string> &csv_value_columns() {
  static const std::vector<std::string> cols = {
      "s2_source",      "s2_target",        "am_residual_sq",
      "l1_residual_sq", "fidelity_term",    "dpi_s1_5",
      "dpi_s3",         "recovery_residual", "strictness_margin",
      "fidelity_ab"};
  return cols;
}

}  // namespace

std::string SuiteResult::to_csv() const {
  std::ostringstream out;
  out << "trial_id,seed,kind,family,block_dims,trace_weights,resamples,pass";
  for (const auto &spec : margin_registry()) out << "," << spec.name;
  for (const auto &col : csv_value_columns()) out << "," << col;
  out << "\n";
  for (const auto &t : trials) {
    out << t.trial_id << "," << t.seed << "," << t.kind << "," << t.family
        << ",";
    for (std::size_t i = 0; i < t.algebra.block_dims.size(); ++i) {
      if (i) out << "|";
      out << t.algebra.block_dims[i];
    }
    out << ",";
    for (std::size_t i = 0; i < t.algebra.trace_weights.size(); ++i) {
      if (i) out << "|";
      out << fmt_double(t.algebra.trace_weights[i]);
    }
    out << "," << t.resamples << "," << (t.pass ? 1 : 0);
    for (const auto &spec : margin_registry()) {
      auto it = t.margins.find(spec.name);
      out << ",";
      if (it != t.margins.end()) out << fmt_double(it->second);
    }
    for (const auto &col : csv_value_columns()) {
      auto it = t.values.find(col);
      out << ",";
      if (it != t.values.end()) out << fmt_double(it->second);
    }
    out << "\n";
  }
  return out.str();
}

std::string SuiteResult::summary_text() const {
  std::ostringstream out;
  out << "trials: " << trials.size() << "  failures: " << failures
      << "  resamples: " << resamples_total << "\n";
  for (const auto &[name, s] : checks) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "  %-24s count %-7d min margin % .3e  tol %.1e  %s%s\n",
                  name.c_str(), s.count, s.min_margin, s.tolerance,
                  s.asserted ? (s.failures ? "FAIL" : "ok") : "logged",
                  s.skipped ? " (skipped)" : "");
    out << buf;
  }
  char swb[160];
  std::snprintf(swb, sizeof(swb),
                "  swb sign histogram: %d negative / %d nonnegative, "
                "min % .3e max % .3e mean % .3e\n",
                swb_negative, swb_nonnegative, swb_min, swb_max, swb_mean);
  out << swb;
  return out.str();
}

//=============================================================================
// Suite execution
//=============================================================================

namespace {

void aggregate(SuiteResult &result, const TrialReport &rep,
               const HarnessConfig &cfg) {
  for (const auto &[name, value] : rep.margins) {
    auto &s = result.checks[name];
    const MarginSpec *spec = find_margin(name);
    if (s.count == 0) {
      s.min_margin = value;
      s.tolerance = cfg.tolerance_for(name);
      s.asserted = spec && spec->asserted;
      s.skipped = cfg.skipped(name);
    }
    s.count += 1;
    s.min_margin = std::min(s.min_margin, value);
    if (s.asserted && !s.skipped && value < -s.tolerance) s.failures += 1;
  }
  auto swb_it = rep.margins.find("swb_gap");
  if (swb_it != rep.margins.end()) {
    const double g = swb_it->second;
    if (result.swb_negative + result.swb_nonnegative == 0) {
      result.swb_min = g;
      result.swb_max = g;
    }
    result.swb_min = std::min(result.swb_min, g);
    result.swb_max = std::max(result.swb_max, g);
    result.swb_mean += g;  // normalized at the end of run_suite
    if (g < 0.0) {
      result.swb_negative += 1;
    } else {
      result.swb_nonnegative += 1;
    }
  }
  result.resamples_total += rep.resamples;
  if (!rep.pass) result.failures += 1;
}

std::uint64_t trial_seed(std::uint64_t master, int kind_id, int alg_idx,
                         int fam_idx, int trial_idx) {
  std::uint64_t s = derive_seed(master, static_cast<std::uint64_t>(kind_id));
  s = derive_seed(s, static_cast<std::uint64_t>(alg_idx));
  s = derive_seed(s, static_cast<std::uint64_t>(fam_idx));
  return derive_seed(s, static_cast<std::uint64_t>(trial_idx));
}

}  // namespace

SuiteResult run_suite(const HarnessConfig &config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  SuiteResult result;
  std::uint64_t trial_id = 0;

  for (std::size_t ai = 0; ai < config.algebra_grid.size(); ++ai) {
    const AlgebraPtr alg = config.algebra_grid[ai].make();

    for (std::size_t fi = 0; fi < config.channel_families.size(); ++fi) {
      const std::string &family = config.channel_families[fi];
      if (!family_applicable(family, *alg)) continue;
      for (int t = 0; t < config.trials; ++t) {
        const std::uint64_t seed = trial_seed(
            config.master_seed, 1, static_cast<int>(ai), static_cast<int>(fi), t);
        TrialReport rep;
        std::optional<TrialInstance> instance;
        try {
          const ReferenceState b = random_reference_state(
              alg, derive_seed(seed, 0), config.invertibility_floor);
          const StateElement a = random_state(alg, derive_seed(seed, 1));
          const ChannelDraw draw = draw_channel(family, alg, b, seed, config);
          rep = compute_scalar_report(family, trial_id, seed, a, b,
                                      draw.channel, draw.resamples, config);
          const auto swb_it = rep.margins.find("swb_gap");
          const bool swb_candidate =
              swb_it != rep.margins.end() && swb_it->second < 0.0;
          if (!rep.pass || swb_candidate) {
            instance = TrialInstance{"scalar", family,      trial_id,
                                     seed,     alg,         a,
                                     b,        draw.channel,
                                     config.invertibility_floor};
          }
          if (swb_candidate &&
              static_cast<int>(result.swb_candidates.size()) <
                  config.max_persisted_swb_candidates) {
            result.swb_candidates.push_back(*instance);
          }
        } catch (const Error &e) {
          // An aborted trial (numerical breakdown, strictness exhaustion)
          // counts as a failure but does not end the suite.
          rep = TrialReport{};
          rep.trial_id = trial_id;
          rep.seed = seed;
          rep.kind = "scalar";
          rep.family = family;
          rep.algebra = spec_of(*alg);
          rep.pass = false;
          rep.error = e.what();
        }
        aggregate(result, rep, config);
        if (!rep.pass && instance &&
            static_cast<int>(result.failing_instances.size()) <
                config.max_persisted_failures) {
          result.failing_instances.push_back(*instance);
        }
        result.trials.push_back(std::move(rep));
        ++trial_id;
      }
    }

    // Superoperator-level PSD battery, cycling the applicable families.
    std::vector<std::string> applicable;
    for (const auto &family : config.channel_families) {
      if (family_applicable(family, *alg)) applicable.push_back(family);
    }
    for (int t = 0; t < config.superop_trials; ++t) {
      const std::string &family = applicable[t % applicable.size()];
      const std::uint64_t seed =
          trial_seed(config.master_seed, 2, static_cast<int>(ai), 0, t);
      TrialReport rep;
      std::optional<TrialInstance> instance;
      try {
        const ReferenceState b = random_reference_state(
            alg, derive_seed(seed, 0), config.invertibility_floor);
        const ChannelDraw draw = draw_channel(family, alg, b, seed, config);
        rep = compute_superop_report(family, trial_id, seed, b, draw.channel,
                                     draw.resamples, config);
        if (!rep.pass) {
          instance = TrialInstance{"superop", family,      trial_id,
                                   seed,      alg,         std::nullopt,
                                   b,         draw.channel,
                                   config.invertibility_floor};
        }
      } catch (const Error &e) {
        rep = TrialReport{};
        rep.trial_id = trial_id;
        rep.seed = seed;
        rep.kind = "superop";
        rep.family = family;
        rep.algebra = spec_of(*alg);
        rep.pass = false;
        rep.error = e.what();
      }
      aggregate(result, rep, config);
      if (!rep.pass && instance &&
          static_cast<int>(result.failing_instances.size()) <
              config.max_persisted_failures) {
        result.failing_instances.push_back(*instance);
      }
      result.trials.push_back(std::move(rep));
      ++trial_id;
    }
  }

  const int swb_count = result.swb_negative + result.swb_nonnegative;
  if (swb_count > 0) result.swb_mean /= swb_count;

  if (!config.output_path.empty()) {
    if (config.format == "csv") {
      std::ofstream out(config.output_path);
      if (!out) throw ConfigError("cannot write " + config.output_path);
      out << result.to_csv();
    } else {
      const double elapsed = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
      write_json_file(config.output_path,
                      result.to_json(config, std::string(), elapsed));
    }
    int k = 0;
    for (const auto &inst : result.failing_instances) {
      write_json_file(config.output_path + ".fail" + std::to_string(k++) +
                          ".json",
                      instance_to_json(inst));
    }
    k = 0;
    for (const auto &inst : result.swb_candidates) {
      write_json_file(config.output_path + ".swb" + std::to_string(k++) +
                          ".json",
                      instance_to_json(inst));
    }
  }
  return result;
}

TrialReport replay(const TrialInstance &inst, const HarnessConfig &config) {
  if (!inst.b || !inst.channel) {
    throw ConfigError("replay: instance lacks reference state or channel");
  }
  if (inst.kind == "scalar") {
    if (!inst.a) throw ConfigError("replay: scalar instance lacks state A");
    return compute_scalar_report(inst.family, inst.trial_id, inst.seed,
                                 *inst.a, *inst.b, *inst.channel, 0, config);
  }
  if (inst.kind == "superop") {
    return compute_superop_report(inst.family, inst.trial_id, inst.seed,
                                  *inst.b, *inst.channel, 0, config);
  }
  throw ConfigError("replay: unknown trial kind '" + inst.kind + "'");
}

//=============================================================================
// Demo
//=============================================================================

std::string render_demo(const std::string &channel_kind) {
  const AlgebraPtr alg = TracialAlgebra::single_block(2);
  Matrix a_mat(2, 2);
  a_mat << Complex(1.0, 0.0), Complex(0.5, 0.0),  //
      Complex(0.5, 0.0), Complex(1.0, 0.0);
  const StateElement a{AlgebraElement(alg, {a_mat})};
  const ReferenceState b{AlgebraElement::identity(alg)};

  Channel phi = [&]() {
    if (channel_kind == "unitary") {
      return unitary_channel(alg, random_unitary(alg, 42));
    }
    if (channel_kind == "trace") return trace_channel(alg);
    if (channel_kind == "pinching") return pinching_channel(alg);
    throw ConfigError("demo: channel must be unitary, pinching or trace");
  }();

  const RecoverySetup setup(phi, b);
  const ChainReport chain = chain_report(a, setup);
  const double gap = swb_gap(a, setup);

  std::ostringstream out;
  out << "worked example: A = [[1, 1/2], [1/2, 1]], B = 1 on (M_2, tr/2), "
      << channel_kind << " channel\n";
  char buf[96];
  const auto row = [&](const char *label, double v) {
    std::snprintf(buf, sizeof(buf), "  %-28s % .6f\n", label, v);
    out << buf;
  };
  row("S2(A|B)", chain.s2_source);
  row("S2(phi(A)|phi(B))", chain.s2_target);
  row("entropy gap", chain.entropy_gap);
  row("AM residual^2", chain.am_residual_sq);
  row("l1 residual^2", chain.l1_residual_sq);
  row("fidelity term 4(1-F)^2", chain.fidelity_term);
  row("SWB gap (logged only)", gap);
  return out.str();
}

}  // namespace petzrec
