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

#include "coordinate.hpp"

#include <cmath>

namespace cothp {

const char* to_string(CoordAlgo a) {
  switch (a) {
    case CoordAlgo::dTHP: return "dTHP";
    case CoordAlgo::cTHP: return "cTHP";
    case CoordAlgo::ZfCbf: return "ZF-CBF";
  }
  return "?";
}

void CoordinateConfig::validate() const {
  if (!(epsilon > 0.0)) throw ConfigError("coordination: epsilon must be > 0");
  if (max_iters < 1) throw ConfigError("coordination: max_iters must be >= 1");
}

Matrix stack_rows(const std::vector<Matrix>& blocks) {
  int rows = 0;
  const int cols = blocks.empty() ? 0 : blocks.front().cols();
  for (const Matrix& b : blocks) {
    if (b.cols() != cols) throw DimensionError("stack_rows: column counts disagree");
    rows += b.rows();
  }
  Matrix out(rows, cols);
  int r0 = 0;
  for (const Matrix& b : blocks) {
    for (int i = 0; i < b.rows(); ++i)
      for (int j = 0; j < cols; ++j) out(r0 + i, j) = b(i, j);
    r0 += b.rows();
  }
  return out;
}

namespace {

Matrix stack_equivalent(const std::vector<Matrix>& w, const std::vector<Matrix>& h_users) {
  std::vector<Matrix> blocks;
  blocks.reserve(w.size());
  for (size_t k = 0; k < w.size(); ++k) blocks.push_back(w[k] * h_users[k]);
  return stack_rows(blocks);
}

/// Modified Gram-Schmidt on the rows; throws when a row collapses into the
/// span of its predecessors (effective rank loss of the block).
void orthonormalize_rows(Matrix& w) {
  for (int i = 0; i < w.rows(); ++i) {
    double pre = 0.0;
    for (int c = 0; c < w.cols(); ++c) pre += std::norm(w(i, c));
    pre = std::sqrt(pre);
    for (int j = 0; j < i; ++j) {
      cxd dot = 0.0;
      for (int c = 0; c < w.cols(); ++c) dot += w(i, c) * std::conj(w(j, c));
      for (int c = 0; c < w.cols(); ++c) w(i, c) -= dot * w(j, c);
    }
    double nrm = 0.0;
    for (int c = 0; c < w.cols(); ++c) nrm += std::norm(w(i, c));
    nrm = std::sqrt(nrm);
    if (!(nrm > 1e-10 * pre))
      throw RankDeficientError("coordinate filter rows lost rank");
    for (int c = 0; c < w.cols(); ++c) w(i, c) /= nrm;
  }
}

void check_channel_dims(const std::vector<Matrix>& h_users, const ScenarioConfig& sc) {
  if (static_cast<int>(h_users.size()) != sc.users())
    throw DimensionError("coordination: channel list does not match user count");
  for (int k = 0; k < sc.users(); ++k)
    if (h_users[k].rows() != sc.n_rx[k] || h_users[k].cols() != sc.n_tx)
      throw DimensionError("coordination: channel block shape mismatch for user " +
                           std::to_string(k + 1));
}

CoordinateState run_loop(const std::vector<Matrix>& h_users, const CoordinateConfig& cfg,
                         CoordAlgo algo, const ScenarioConfig& sc, RngStream& rng) {
  cfg.validate();
  check_channel_dims(h_users, sc);

  std::vector<Matrix> w = init_coordinate_filters(sc, cfg.init_mode, rng);
  for (int attempt = 0;; ++attempt) {
    try {
      CoordinateState st;
      st.algo = algo;
      for (int p = 1; p <= cfg.max_iters; ++p) {
        CoordinateStep step = coordinate_step(h_users, w, algo, sc);
        w = step.W_next;
        st.W = std::move(step.W_next);
        st.H_e = std::move(step.H_e_next);
        st.filters = std::move(step.filters);
        st.P_e = std::move(step.P_e);
        st.zf_gain = step.zf_gain;
        st.residual_mui = step.residual_mui;
        st.iterations_used = p;
        if (step.residual_mui < cfg.epsilon) {
          st.converged = true;
          break;
        }
      }
      return st;
    } catch (const RankDeficientError&) {
      if (attempt >= 1) throw;
      w = init_coordinate_filters(sc, InitMode::Gaussian, rng);
    }
  }
}

}  // namespace

std::vector<Matrix> init_coordinate_filters(const ScenarioConfig& sc, InitMode mode,
                                            RngStream& rng) {
  InitMode effective = mode;
  if (mode == InitMode::Auto)
    effective = sc.square_full_rank_case() ? InitMode::Identity : InitMode::Gaussian;
  std::vector<Matrix> w;
  w.reserve(sc.users());
  for (int k = 0; k < sc.users(); ++k) {
    Matrix wk(sc.streams[k], sc.n_rx[k]);
    if (effective == InitMode::Identity) {
      for (int i = 0; i < wk.rows(); ++i) wk(i, i) = 1.0;
    } else {
      for (int i = 0; i < wk.rows(); ++i)
        for (int j = 0; j < wk.cols(); ++j) wk(i, j) = rng.next_complex_gaussian();
      orthonormalize_rows(wk);
    }
    w.push_back(std::move(wk));
  }
  return w;
}

CoordinateStep coordinate_step(const std::vector<Matrix>& h_users,
                               const std::vector<Matrix>& w_in, CoordAlgo algo,
                               const ScenarioConfig& sc, double sigma_s_sq) {
  CoordinateStep step;
  step.H_e = stack_equivalent(w_in, h_users);

  if (algo == CoordAlgo::ZfCbf) {
    Matrix p_raw = pseudo_inverse(step.H_e);
    const double fro = frobenius_norm(p_raw);
    step.zf_gain = std::sqrt(sc.xi / (sigma_s_sq * fro * fro));
    step.P_e = step.zf_gain * p_raw;
  } else {
    const ThpVariant variant = algo == CoordAlgo::dTHP ? ThpVariant::dTHP : ThpVariant::cTHP;
    step.filters = synthesize_filters(step.H_e, variant, sc.xi, sigma_s_sq);
    step.P_e = composite_precoder(*step.filters);
  }

  // Matched coordinate filter update: conjugate-transposed per-user diagonal
  // blocks of H * P_e, rows orthonormalized within each user. Orthogonality
  // between a user's rows is required for convergence: with plain row
  // normalization the iteration settles into a period-2 orbit at O(1)
  // residual instead of contracting.
  const Matrix m = stack_rows(h_users) * step.P_e;  // N_r x r
  step.W_next.reserve(sc.users());
  int row0 = 0, col0 = 0;
  for (int k = 0; k < sc.users(); ++k) {
    const int nk = sc.n_rx[k], rk = sc.streams[k];
    Matrix wk(rk, nk);
    for (int i = 0; i < rk; ++i)
      for (int j = 0; j < nk; ++j) wk(i, j) = std::conj(m(row0 + j, col0 + i));
    orthonormalize_rows(wk);
    step.W_next.push_back(std::move(wk));
    row0 += nk;
    col0 += rk;
  }

  step.H_e_next = stack_equivalent(step.W_next, h_users);
  step.residual_mui = off_diagonal_frobenius(step.H_e_next * step.P_e);
  return step;
}

CoordinateState run_coordination(const std::vector<Matrix>& h_users,
                                 const CoordinateConfig& cfg, ThpVariant variant,
                                 const ScenarioConfig& sc, RngStream& rng) {
  return run_loop(h_users, cfg,
                  variant == ThpVariant::dTHP ? CoordAlgo::dTHP : CoordAlgo::cTHP, sc, rng);
}

CoordinateState run_coordination_zf(const std::vector<Matrix>& h_users,
                                    const CoordinateConfig& cfg, const ScenarioConfig& sc,
                                    RngStream& rng) {
  return run_loop(h_users, cfg, CoordAlgo::ZfCbf, sc, rng);
}

SymbolFrame end_to_end_transmit(const CoordinateState& state,
                                const std::vector<Matrix>& h_users, const SymbolFrame& s,
                                const Constellation& c, double sigma_n_sq, RngStream& rng) {
  const int r = state.P_e.cols();
  if (static_cast<int>(s.s.size()) != r)
    throw DimensionError("end_to_end_transmit: frame length does not match stream count");

  // Transmit side.
  cvec x_tilde;
  if (state.algo == CoordAlgo::ZfCbf) {
    x_tilde = state.P_e * s.s;
  } else {
    x_tilde = thp_encode(s, *state.filters, c).x_tilde;
  }

  // Per-user propagation, additive noise, coordinate filtering.
  cvec y_hat(static_cast<size_t>(r));
  int row0 = 0;  // offset into the stacked stream vector
  for (size_t k = 0; k < h_users.size(); ++k) {
    cvec yk = h_users[k] * x_tilde;
    if (sigma_n_sq > 0.0) {
      const cvec nk = generate_noise(static_cast<int>(yk.size()), NoiseModel(sigma_n_sq), rng);
      for (size_t i = 0; i < yk.size(); ++i) yk[i] += nk[i];
    }
    const cvec filtered = state.W[k] * yk;
    for (size_t i = 0; i < filtered.size(); ++i) y_hat[row0 + i] = filtered[i];
    row0 += static_cast<int>(filtered.size());
  }

  if (state.algo == CoordAlgo::ZfCbf) {
    // Per-stream gain equalization against the effective channel diagonal,
    // then plain slicing (no modulo in the linear chain).
    const Matrix m = state.H_e * state.P_e;
    for (int i = 0; i < r; ++i) {
      const cxd mii = m(i, i);
      y_hat[i] = std::abs(mii) < 1e-300 ? cxd{} : y_hat[i] / mii;
    }
    return slice_nearest(y_hat, c);
  }
  return detect_symbols(receive(y_hat, *state.filters), c);
}

}  // namespace cothp
