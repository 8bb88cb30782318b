// SPDX-License-Identifier: Apache-2.0
//
// cothp - coordinated Tomlinson-Harashima precoding simulator for overloaded
// multi-user MIMO broadcast channels
//
// Command line front end. Talks to the simulator exclusively through the
// public C API.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "cothp/cothp.h"

namespace {

constexpr int kExitConfig = 2;

int fail(const char* stage) {
  std::fprintf(stderr, "cothp: %s: %s\n", stage, cothp_last_error());
  return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Monte Carlo BER and sum-rate sweeps for coordinated Tomlinson-Harashima "
      "precoding over overloaded multi-user MIMO broadcast channels"};

  std::string scenario;
  std::string streams;
  std::string mod = "qpsk";
  std::string algo = "all";
  std::string ebn0 = "0:4:28";
  std::string out = "-";
  std::string format = "csv";
  int trials = 500;
  int frames = 100;
  uint64_t seed = 1;
  double epsilon = 1e-5;
  int max_iters = 50;
  double tau_override = 0.0;

  app.add_option("--scenario", scenario,
                 "Per-user receive antennas x transmit antennas, e.g. 3,3,3,3x8")
      ->required();
  app.add_option("--streams", streams,
                 "Per-user stream counts, e.g. 2,2,2,2 (default: all receive antennas)");
  app.add_option("--mod", mod, "Modulation: qpsk or 16qam")->capture_default_str();
  app.add_option("--algo", algo, "Algorithm: dthp, cthp, zf, or all")->capture_default_str();
  app.add_option("--ebn0", ebn0, "Eb/N0 grid in dB as start:step:stop or a single value")
      ->capture_default_str();
  app.add_option("--trials", trials, "Channel draws per grid point")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--frames", frames, "Symbol frames per draw (0 disables BER counting)")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  app.add_option("--seed", seed, "Master RNG seed")->capture_default_str();
  app.add_option("--epsilon", epsilon, "Residual interference stopping threshold")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--max-iters", max_iters, "Coordination iteration cap")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--tau-override", tau_override, "Modulo period override (0: default)");
  app.add_option("--out", out, "Output path (- for stdout)")->capture_default_str();
  app.add_option("--format", format, "Output format: csv or json")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  cothp_scenario* sc = nullptr;
  if (cothp_scenario_parse(scenario.c_str(), streams.c_str(), mod.c_str(), 0.0, &sc) !=
      COTHP_OK)
    return fail("scenario");
  std::unique_ptr<cothp_scenario, decltype(&cothp_scenario_destroy)> sc_guard(
      sc, &cothp_scenario_destroy);

  cothp_sweep_opts opts = {};
  opts.algo = algo.c_str();
  opts.ebn0_grid = ebn0.c_str();
  opts.trials = trials;
  opts.frames = frames;
  opts.seed = seed;
  opts.epsilon = epsilon;
  opts.max_iters = max_iters;
  opts.tau_override = tau_override;

  cothp_results* res = nullptr;
  if (cothp_run_sweep(sc, &opts, &res) != COTHP_OK) return fail("sweep");
  std::unique_ptr<cothp_results, decltype(&cothp_results_destroy)> res_guard(
      res, &cothp_results_destroy);

  if (cothp_results_write(res, out.c_str(), format.c_str()) != COTHP_OK)
    return fail("write");
  return 0;
}
