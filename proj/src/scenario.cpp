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

#include "scenario.hpp"

#include <sstream>

namespace cothp {

namespace {

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &pos);
    } catch (const std::exception&) {
      throw ConfigError("malformed " + what + " list '" + text + "'");
    }
    if (pos != tok.size() || v < 1)
      throw ConfigError("malformed " + what + " list '" + text + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("empty " + what + " list");
  return out;
}

}  // namespace

void ScenarioConfig::validate() {
  if (n_tx < 1) throw ConfigError("scenario: N_t must be >= 1");
  if (n_rx.empty()) throw ConfigError("scenario: at least one user required");
  for (int nk : n_rx)
    if (nk < 1) throw ConfigError("scenario: every N_k must be >= 1");
  if (streams.empty()) streams = n_rx;
  if (streams.size() != n_rx.size())
    throw ConfigError("scenario: stream list length must match user count");
  for (size_t k = 0; k < streams.size(); ++k) {
    if (streams[k] < 1) throw ConfigError("scenario: every r_k must be >= 1");
    if (streams[k] > n_rx[k])
      throw ConfigError("scenario: r_k must not exceed N_k for user " + std::to_string(k + 1));
  }
  const int r = total_streams();
  if (r > n_tx)
    throw ConfigError("scenario: total streams r = " + std::to_string(r) +
                      " exceeds transmit antennas N_t = " + std::to_string(n_tx));
  if (xi < 0.0) throw ConfigError("scenario: xi must be positive");
  if (xi == 0.0) xi = static_cast<double>(r);  // unit symbol variance
  if (label.empty()) {
    std::stringstream ss;
    ss << '(';
    for (size_t k = 0; k < n_rx.size(); ++k) ss << (k ? "," : "") << n_rx[k];
    ss << ")x" << n_tx;
    label = ss.str();
  }
}

ScenarioConfig ScenarioConfig::make(int n_tx, std::vector<int> n_rx, std::vector<int> streams,
                                    ModulationScheme mod, double xi) {
  ScenarioConfig sc;
  sc.n_tx = n_tx;
  sc.n_rx = std::move(n_rx);
  sc.streams = std::move(streams);
  sc.modulation = mod;
  sc.xi = xi;
  sc.validate();
  return sc;
}

ScenarioConfig ScenarioConfig::parse(const std::string& antennas, const std::string& streams,
                                     const std::string& modulation, double xi) {
  const size_t xpos = antennas.find_last_of("xX");
  if (xpos == std::string::npos || xpos == 0 || xpos + 1 >= antennas.size())
    throw ConfigError("malformed scenario '" + antennas + "' (expected e.g. 3,3,3,3x8)");
  ScenarioConfig sc;
  sc.n_rx = parse_int_list(antennas.substr(0, xpos), "antenna");
  try {
    size_t pos = 0;
    sc.n_tx = std::stoi(antennas.substr(xpos + 1), &pos);
    if (pos != antennas.size() - xpos - 1) throw ConfigError("");
  } catch (const std::exception&) {
    throw ConfigError("malformed scenario '" + antennas + "' (expected e.g. 3,3,3,3x8)");
  }
  if (!streams.empty()) sc.streams = parse_int_list(streams, "stream");
  sc.modulation = Constellation::by_name(modulation).scheme;
  sc.xi = xi;
  sc.validate();
  return sc;
}

}  // namespace cothp
