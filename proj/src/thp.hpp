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

#include "numerics.hpp"
#include "sigproc.hpp"

namespace cothp {

/// Placement of the diagonal scaling filter: at the receivers (dTHP) or at
/// the transmitter (cTHP).
enum class ThpVariant { dTHP, cTHP };

const char* to_string(ThpVariant v);

/// Synthesized precoding filter set for one equivalent channel.
struct ThpFilters {
  ThpVariant variant;
  Matrix F;               // N_t x r feedforward, orthonormal columns (Q^H)
  std::vector<double> g;  // diagonal of G, g_ii = 1 / l_ii (real positive)
  Matrix B;               // r x r feedback, lower triangular, unit diagonal
  double beta = 1.0;      // transmit power normalization (cTHP); 1 for dTHP

  int streams() const { return B.rows(); }
  int tx_antennas() const { return F.rows(); }
  /// Dense diagonal G as a matrix (test/diagnostic convenience).
  Matrix G() const;
};

/// Encoder output for one frame.
struct TxFrame {
  cvec x;        // post-feedback symbols, components inside [-tau/2, tau/2)
  cvec x_tilde;  // antenna-domain transmit signal
  cvec d;        // lattice perturbation with v = s + d (oracle use only)
};

/// Filter synthesis from an equivalent channel (Lq -> F, G, B, beta).
/// beta is the analytic power normalization sqrt(sigma_s^2 * sum g_ii^2 / xi)
/// for cTHP and exactly 1 for dTHP.
ThpFilters synthesize_filters(const Matrix& h_e, ThpVariant variant, double xi,
                              double sigma_s_sq = 1.0);

/// Successive modulo encoding x_i = M(s_i - sum_{j<i} b_ij x_j) in stream
/// order, followed by the variant's transmit combining.
TxFrame thp_encode(const SymbolFrame& s, const ThpFilters& f, const Constellation& c);

/// Variant receive scaling: y *= beta (cTHP) or y_i *= g_ii (dTHP). The
/// input is the stacked receiver-side signal after any coordinate filters.
cvec receive(const cvec& y_raw, const ThpFilters& f);

/// Composite precoder P_e = F B^-1 (dTHP) or F G B^-1 (cTHP). This is the
/// transmit-side cascade without the 1/beta power scaling.
Matrix composite_precoder(const ThpFilters& f);

/// Measured-variance beta estimate for cTHP validation: encodes `frames`
/// random frames and returns sqrt(mean ||G x||^2 / xi).
double estimate_beta_empirical(const ThpFilters& f, const Constellation& c, int frames,
                               double xi, RngStream& rng);

}  // namespace cothp
