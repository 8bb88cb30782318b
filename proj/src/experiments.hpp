// SPDX-License-Identifier: Apache-2.0
//
// cothp - coordinated Tomlinson-Harashima precoding simulator for overloaded
// multi-user MIMO broadcast channels
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coordinate.hpp"

namespace cothp {

/// One (algorithm, Eb/N0) grid point of a Monte Carlo sweep.
struct SweepResult {
  CoordAlgo algo = CoordAlgo::dTHP;
  double ebn0_db = 0.0;
  double ber = 0.0;
  double sum_rate_bits = 0.0;    // mean over channel draws
  double avg_iterations = 0.0;   // mean coordination iterations
  double convergence_rate = 0.0; // fraction of draws below epsilon
  int trials = 0;                // channel draws per point
  uint64_t seed = 0;
};

/// Full sweep specification. One engine run produces BER and sum-rate
/// together; every output row is complete.
struct SweepRequest {
  ScenarioConfig scenario;
  std::vector<CoordAlgo> algos{CoordAlgo::dTHP};
  std::vector<double> ebn0_grid;
  int trials = 500;   // independent channel draws per grid point
  int frames = 100;   // symbol frames per draw for bit error counting
  uint64_t seed = 1;
  CoordinateConfig coord;
  double tau_override = 0.0;  // <= 0 keeps the modulation default
};

/// sigma_n^2 = N_r * E_s / (N_t * N * 10^(ebn0_db/10)) with E_s = 1 and
/// N = bits per symbol.
NoiseModel ebn0_to_noise_var(double ebn0_db, const ScenarioConfig& sc,
                             const Constellation& c);

/// Parses "start:step:stop" (inclusive, step > 0) or a single dB value.
std::vector<double> parse_ebn0_grid(const std::string& text);

/// Full-cooperation uniform-power rate upper bound
/// log2 det(I + (xi / (N_t sigma_n^2)) H H^H) in bits per channel use.
/// A reference ceiling only; looser than dirty-paper capacity.
double cooperative_bound(const Matrix& h, double xi, double sigma_n_sq);

/// Closed-form sum rate of one coordinated state on the parallel-channel
/// model: dTHP sum_i log2(1 + sigma_s^2 / (g_ii^2 sigma_n^2)); cTHP
/// r * log2(1 + sigma_s^2 / (beta^2 sigma_n^2)); ZF sum_i log2(1 + SINR_i)
/// with the off-diagonal rows of H_e P_e as residual interference.
double sum_rate_bits(const CoordinateState& st, double sigma_n_sq,
                     double sigma_s_sq = 1.0);

/// Runs the Monte Carlo sweep single-threaded in deterministic grid order.
/// Every random draw comes from a stream id derived from (grid point, draw,
/// purpose), so results are invariant to algorithm selection and any future
/// scheduling: identical (seed, config) pairs give identical bytes out.
/// Rows are ordered algorithm-major, grid-minor.
std::vector<SweepResult> run_sweep(const SweepRequest& req);

/// Convenience views of the engine: BER emphasis (explicit frame count)
/// and sum-rate emphasis (default frame count).
std::vector<SweepResult> ber_sweep(const ScenarioConfig& sc, CoordAlgo algo,
                                   const std::vector<double>& ebn0_grid, int trials,
                                   int frames, const CoordinateConfig& cfg, uint64_t seed);
std::vector<SweepResult> sumrate_sweep(const ScenarioConfig& sc, CoordAlgo algo,
                                       const std::vector<double>& ebn0_grid, int trials,
                                       const CoordinateConfig& cfg, uint64_t seed);

/// CSV with the fixed column set
/// algo,ebn0_db,ber,sum_rate_bits,avg_iterations,convergence_rate,trials,seed.
/// Doubles are shortest-round-trip formatted, locale independent.
std::string to_csv(const std::vector<SweepResult>& rows);

/// JSON mirror of the CSV rows (array of objects, same field names).
std::string to_json(const std::vector<SweepResult>& rows);

}  // namespace cothp
