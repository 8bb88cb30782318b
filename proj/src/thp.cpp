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

#include "thp.hpp"

#include <cmath>

namespace cothp {

const char* to_string(ThpVariant v) { return v == ThpVariant::dTHP ? "dTHP" : "cTHP"; }

Matrix ThpFilters::G() const {
  Matrix m(static_cast<int>(g.size()), static_cast<int>(g.size()));
  for (size_t i = 0; i < g.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = g[i];
  return m;
}

ThpFilters synthesize_filters(const Matrix& h_e, ThpVariant variant, double xi,
                              double sigma_s_sq) {
  if (!(xi > 0.0)) throw ConfigError("synthesize_filters: xi must be positive");
  LqResult lq = lq_decompose(h_e);
  const int r = h_e.rows();

  ThpFilters f;
  f.variant = variant;
  f.F = adjoint(lq.Q);
  f.g.resize(r);
  for (int i = 0; i < r; ++i) f.g[i] = 1.0 / lq.L(i, i).real();

  // B = G L (dTHP) scales rows, B = L G (cTHP) scales columns; both have a
  // unit diagonal because g_ii = 1 / l_ii.
  f.B = Matrix(r, r);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < i; ++j)
      f.B(i, j) = variant == ThpVariant::dTHP ? f.g[i] * lq.L(i, j) : lq.L(i, j) * f.g[j];
    f.B(i, i) = 1.0;
  }

  if (variant == ThpVariant::cTHP) {
    double gsq = 0.0;
    for (double gi : f.g) gsq += gi * gi;
    f.beta = std::sqrt(sigma_s_sq * gsq / xi);
  } else {
    f.beta = 1.0;
  }
  return f;
}

TxFrame thp_encode(const SymbolFrame& s, const ThpFilters& f, const Constellation& c) {
  const int r = f.streams();
  if (static_cast<int>(s.s.size()) != r)
    throw DimensionError("thp_encode: frame length disagrees with filter streams");

  TxFrame t;
  t.x.resize(r);
  for (int i = 0; i < r; ++i) {
    cxd acc = s.s[i];
    for (int j = 0; j < i; ++j) acc -= f.B(i, j) * t.x[j];
    t.x[i] = modulo_reduce(acc, c.tau);
  }

  // v = B x differs from s by a lattice point; round the offset so the
  // stored perturbation is exact.
  t.d.resize(r);
  for (int i = 0; i < r; ++i) {
    cxd acc = t.x[i] - s.s[i];
    for (int j = 0; j < i; ++j) acc += f.B(i, j) * t.x[j];
    t.d[i] = cxd{std::round(acc.real() / c.tau) * c.tau, std::round(acc.imag() / c.tau) * c.tau};
  }

  if (f.variant == ThpVariant::dTHP) {
    t.x_tilde = f.F * t.x;
  } else {
    cvec gx(t.x);
    for (int i = 0; i < r; ++i) gx[i] *= f.g[i];
    t.x_tilde = f.F * gx;
    const double inv_beta = 1.0 / f.beta;
    for (cxd& z : t.x_tilde) z *= inv_beta;
  }
  return t;
}

cvec receive(const cvec& y_raw, const ThpFilters& f) {
  cvec y(y_raw);
  if (f.variant == ThpVariant::cTHP) {
    for (cxd& z : y) z *= f.beta;
  } else {
    if (y.size() != f.g.size()) throw DimensionError("receive: length disagrees with filters");
    for (size_t i = 0; i < y.size(); ++i) y[i] *= f.g[i];
  }
  return y;
}

Matrix composite_precoder(const ThpFilters& f) {
  Matrix binv = lower_triangular_inverse(f.B);
  if (f.variant == ThpVariant::cTHP) {
    // F G B^-1: scale the columns of F by g before the triangular inverse.
    Matrix fg = f.F;
    for (int i = 0; i < fg.rows(); ++i)
      for (int j = 0; j < fg.cols(); ++j) fg(i, j) *= f.g[j];
    return fg * binv;
  }
  return f.F * binv;
}

double estimate_beta_empirical(const ThpFilters& f, const Constellation& c, int frames,
                               double xi, RngStream& rng) {
  const int r = f.streams();
  const int n = c.bits_per_symbol;
  double acc = 0.0;
  std::vector<uint8_t> bits(static_cast<size_t>(r) * n);
  for (int fr = 0; fr < frames; ++fr) {
    for (auto& b : bits) b = rng.next_bit();
    SymbolFrame s = map_bits(bits, c);
    TxFrame t = thp_encode(s, f, c);
    for (int i = 0; i < r; ++i) acc += f.g[i] * f.g[i] * std::norm(t.x[i]);
  }
  return std::sqrt(acc / frames / xi);
}

}  // namespace cothp
