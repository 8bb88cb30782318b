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

#include <numeric>
#include <string>
#include <vector>

#include "errors.hpp"
#include "sigproc.hpp"

namespace cothp {

/// Antenna/user/stream topology plus modulation and power budget.
struct ScenarioConfig {
  int n_tx = 0;                 // N_t
  std::vector<int> n_rx;        // N_k per user
  std::vector<int> streams;     // r_k per user
  ModulationScheme modulation = ModulationScheme::QPSK;
  double xi = 0.0;              // total transmit power budget; 0 -> r * sigma_s^2
  std::string label;

  int users() const { return static_cast<int>(n_rx.size()); }
  int total_rx() const { return std::accumulate(n_rx.begin(), n_rx.end(), 0); }
  int total_streams() const { return std::accumulate(streams.begin(), streams.end(), 0); }
  /// True when every user transmits on all its antennas and the system is
  /// not overloaded (r = N_r <= N_t), i.e. the classical THP setting.
  bool square_full_rank_case() const {
    return streams == n_rx && total_streams() <= n_tx;
  }

  /// Validates the feasibility guards and fills defaulted fields.
  /// Throws ConfigError for an infeasible topology.
  void validate();

  /// Builds a validated scenario. streams empty -> r_k = N_k.
  static ScenarioConfig make(int n_tx, std::vector<int> n_rx, std::vector<int> streams,
                             ModulationScheme mod, double xi = 0.0);

  /// Parses "3,3,3,3x8" (antennas) plus an optional "2,2,2,2" stream list.
  static ScenarioConfig parse(const std::string& antennas, const std::string& streams,
                              const std::string& modulation, double xi = 0.0);
};

}  // namespace cothp
