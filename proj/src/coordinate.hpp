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

#include <optional>
#include <vector>

#include "scenario.hpp"
#include "thp.hpp"

namespace cothp {

/// Precoder family driven by the coordination loop.
enum class CoordAlgo { dTHP, cTHP, ZfCbf };

const char* to_string(CoordAlgo a);

/// Initialization of the per-user coordinate filters W_k.
/// Auto picks Identity for square full-rank scenarios (where it is a fixed
/// point of the update and recovers classical THP) and Gaussian otherwise.
enum class InitMode { Auto, Gaussian, Identity };

struct CoordinateConfig {
  double epsilon = 1e-5;  // residual MUI stopping threshold
  int max_iters = 50;
  InitMode init_mode = InitMode::Auto;

  void validate() const;  // epsilon > 0, max_iters >= 1
};

/// Converged (or capped) output of the coordination loop. The equivalent
/// channel H_e reflects the final W update while filters/P_e come from the
/// preceding synthesis, so off_diagonal_frobenius(H_e * P_e) == residual_mui.
struct CoordinateState {
  CoordAlgo algo = CoordAlgo::dTHP;
  std::vector<Matrix> W;              // r_k x N_k per user, unit-norm rows
  Matrix H_e;                         // r x N_t stacked W_k H_k
  std::optional<ThpFilters> filters;  // THP variants only
  Matrix P_e;                         // N_t x r composite precoder
  double zf_gain = 0.0;               // ZF column scaling alpha (0 otherwise)
  double residual_mui = 0.0;
  int iterations_used = 0;
  bool converged = false;
};

/// One pass of the inner loop: equivalent channel from W_in, precoder
/// synthesis, coordinate filter update, and the residual MUI of the updated
/// channel against the just-synthesized precoder.
struct CoordinateStep {
  Matrix H_e;                         // stack of W_in[k] * H[k]
  std::optional<ThpFilters> filters;
  Matrix P_e;
  double zf_gain = 0.0;
  std::vector<Matrix> W_next;
  Matrix H_e_next;                    // stack of W_next[k] * H[k]
  double residual_mui = 0.0;
};

/// Stacks per-user rows into the full N_r x N_t channel.
Matrix stack_rows(const std::vector<Matrix>& blocks);

/// Draws the initial coordinate filters. Gaussian mode draws i.i.d. CN(0,1)
/// entries and orthonormalizes the rows within each W_k; Identity places a
/// truncated identity block.
std::vector<Matrix> init_coordinate_filters(const ScenarioConfig& sc, InitMode mode,
                                            RngStream& rng);

/// Single coordination iteration (exposed for fixed-point tests).
CoordinateStep coordinate_step(const std::vector<Matrix>& h_users,
                               const std::vector<Matrix>& w_in, CoordAlgo algo,
                               const ScenarioConfig& sc, double sigma_s_sq = 1.0);

/// Iterative coordination for a THP variant. Stops when residual_mui drops
/// below cfg.epsilon or after cfg.max_iters iterations; non-convergence is
/// reported through the flag, not an error. A rank-deficient equivalent
/// channel triggers one Gaussian re-initialization before the error
/// propagates.
CoordinateState run_coordination(const std::vector<Matrix>& h_users,
                                 const CoordinateConfig& cfg, ThpVariant variant,
                                 const ScenarioConfig& sc, RngStream& rng);

/// Same loop with the power-scaled pseudo-inverse as the linear precoder.
CoordinateState run_coordination_zf(const std::vector<Matrix>& h_users,
                                    const CoordinateConfig& cfg, const ScenarioConfig& sc,
                                    RngStream& rng);

/// Full link simulation for one frame: encode (or linearly precode), pass
/// through the true per-user channels with additive noise, apply W_k and the
/// variant receive chain, detect. sigma_n_sq = 0 runs noiseless and draws
/// nothing from rng.
SymbolFrame end_to_end_transmit(const CoordinateState& state,
                                const std::vector<Matrix>& h_users, const SymbolFrame& s,
                                const Constellation& c, double sigma_n_sq, RngStream& rng);

}  // namespace cothp
