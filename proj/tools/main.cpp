/**
 * This code is part of petzrec.
 *
 * (C) Copyright petzrec developers 2026.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include <chrono>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "petzrec/harness.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitAssertionFailure = 1;
constexpr int kExitConfigError = 2;

int run_verify(const std::string &config_path, int trials, long long seed,
               const std::string &out, const std::string &format,
               const std::vector<std::string> &families,
               const std::vector<std::string> &skip) {
  petzrec::HarnessConfig cfg = petzrec::HarnessConfig::defaults();
  if (!config_path.empty()) {
    cfg = petzrec::HarnessConfig::from_json(
        petzrec::read_json_file(config_path));
  }
  if (trials > 0) cfg.trials = trials;
  if (seed >= 0) cfg.master_seed = static_cast<std::uint64_t>(seed);
  if (!out.empty()) cfg.output_path = out;
  if (!format.empty()) cfg.format = format;
  if (!families.empty()) cfg.channel_families = families;
  if (!skip.empty()) cfg.skip = skip;
  cfg.validate();

  const auto start = std::chrono::steady_clock::now();
  petzrec::SuiteResult result = petzrec::run_suite(cfg);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  std::cout << result.summary_text();
  std::cout << "elapsed: " << elapsed << " s\n";
  if (!cfg.output_path.empty()) {
    std::cout << "report written to " << cfg.output_path << "\n";
  }
  if (!result.failing_instances.empty()) {
    std::cout << result.failing_instances.size()
              << " failing instance(s) persisted for replay\n";
  }
  return result.all_passed() ? kExitPass : kExitAssertionFailure;
}

int run_replay(const std::string &instance_path) {
  const petzrec::TrialInstance inst =
      petzrec::instance_from_json(petzrec::read_json_file(instance_path));
  const petzrec::HarnessConfig cfg = petzrec::HarnessConfig::defaults();
  const petzrec::TrialReport rep = petzrec::replay(inst, cfg);
  std::cout << rep.to_json().dump(2) << "\n";
  return rep.pass ? kExitPass : kExitAssertionFailure;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"petzrec: randomized verification of recoverability bounds on "
               "tracial matrix algebras"};
  app.require_subcommand(1);

  // verify
  std::string config_path, out, format;
  int trials = -1;
  long long seed = -1;
  std::vector<std::string> families, skip;
  CLI::App *verify = app.add_subcommand("verify", "run the randomized suite");
  verify->add_option("--config", config_path, "JSON config file");
  verify->add_option("--trials", trials, "scalar trials per algebra/family");
  verify->add_option("--seed", seed, "master seed");
  verify->add_option("--out", out, "report output path");
  verify->add_option("--format", format, "json or csv");
  verify->add_option("--families", families, "channel families")
      ->delimiter(',');
  verify->add_option("--skip", skip, "margin names to skip")->delimiter(',');

  // replay
  std::string instance_path;
  CLI::App *replay_cmd =
      app.add_subcommand("replay", "recompute a persisted trial instance");
  replay_cmd->add_option("--instance", instance_path, "instance JSON file")
      ->required();

  // demo
  std::string demo_channel = "pinching";
  CLI::App *demo = app.add_subcommand("demo", "print the worked 2x2 example");
  demo->add_option("--channel", demo_channel, "unitary, pinching or trace");

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) {
      return run_verify(config_path, trials, seed, out, format, families, skip);
    }
    if (replay_cmd->parsed()) {
      return run_replay(instance_path);
    }
    if (demo->parsed()) {
      std::cout << petzrec::render_demo(demo_channel);
      return kExitPass;
    }
  } catch (const petzrec::ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const petzrec::Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAssertionFailure;
  }
  return kExitConfigError;
}
