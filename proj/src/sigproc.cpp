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

#include "sigproc.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace cothp {

namespace {
constexpr uint64_t kPcgMult = 6364136223846793005ULL;
constexpr double kTwoPi = 6.283185307179586476925286766559;
}  // namespace

RngStream::RngStream(uint64_t seed, uint64_t stream_id)
    : state_(0), inc_((stream_id << 1u) | 1u), seed_(seed), stream_id_(stream_id) {
  next_u32();
  state_ += seed;
  next_u32();
}

uint32_t RngStream::next_u32() {
  const uint64_t old = state_;
  state_ = old * kPcgMult + inc_;
  const uint32_t xorshifted = static_cast<uint32_t>(((old >> 18u) ^ old) >> 27u);
  const uint32_t rot = static_cast<uint32_t>(old >> 59u);
  return (xorshifted >> rot) | (xorshifted << ((-rot) & 31u));
}

double RngStream::next_double() {
  const uint64_t hi = next_u32() >> 5;  // 27 bits
  const uint64_t lo = next_u32() >> 6;  // 26 bits
  return static_cast<double>(hi * 67108864ULL + lo) * (1.0 / 9007199254740992.0);
}

double RngStream::next_double_open() {
  const uint64_t hi = next_u32() >> 5;
  const uint64_t lo = next_u32() >> 6;
  return (static_cast<double>(hi * 67108864ULL + lo) + 0.5) * (1.0 / 9007199254740992.0);
}

cxd RngStream::next_complex_gaussian() {
  const double u1 = next_double_open();
  const double u2 = next_double();
  const double mag = std::sqrt(-std::log(u1));
  return cxd{mag * std::cos(kTwoPi * u2), mag * std::sin(kTwoPi * u2)};
}

NoiseModel::NoiseModel(double sigma_n_sq_in) : sigma_n_sq(sigma_n_sq_in) {
  if (!(sigma_n_sq > 0.0)) throw ConfigError("NoiseModel: sigma_n^2 must be positive");
}

Constellation Constellation::qpsk(double tau_override) {
  Constellation c;
  c.name = "QPSK";
  c.scheme = ModulationScheme::QPSK;
  c.bits_per_symbol = 2;
  const double a = 1.0 / std::sqrt(2.0);
  // Index = bit pattern b0 b1; b0 selects the I sign, b1 the Q sign (0 -> +).
  c.points = {cxd{a, a}, cxd{a, -a}, cxd{-a, a}, cxd{-a, -a}};
  c.tau = tau_override > 0.0 ? tau_override : 2.0 * std::sqrt(2.0);
  return c;
}

Constellation Constellation::qam16(double tau_override) {
  Constellation c;
  c.name = "16QAM";
  c.scheme = ModulationScheme::QAM16;
  c.bits_per_symbol = 4;
  const double a = 1.0 / std::sqrt(10.0);
  // Per-axis Gray code on two bits: 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3
  // (in units of 1/sqrt(10)). Bits b0 b1 select the I level, b2 b3 the Q level.
  const double level[4] = {-3.0 * a, -1.0 * a, 3.0 * a, 1.0 * a};  // indexed by 2-bit value
  c.points.resize(16);
  for (int bi = 0; bi < 4; ++bi)
    for (int bq = 0; bq < 4; ++bq)
      c.points[static_cast<size_t>(bi) * 4 + bq] = cxd{level[bi], level[bq]};
  c.tau = tau_override > 0.0 ? tau_override : 8.0 / std::sqrt(10.0);
  return c;
}

Constellation Constellation::by_name(const std::string& name, double tau_override) {
  std::string low;
  for (char ch : name) low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (low == "qpsk") return qpsk(tau_override);
  if (low == "16qam" || low == "qam16") return qam16(tau_override);
  throw ConfigError("unknown modulation '" + name + "' (expected qpsk or 16qam)");
}

double Constellation::min_distance() const {
  return scheme == ModulationScheme::QPSK ? 2.0 / std::sqrt(2.0) : 2.0 / std::sqrt(10.0);
}

cxd modulo_reduce(cxd x, double tau) {
  const double half = 0.5 * tau;
  double re = x.real() - std::floor(x.real() / tau + 0.5) * tau;
  double im = x.imag() - std::floor(x.imag() / tau + 0.5) * tau;
  // Quotient rounding can land the fold one ulp outside the cell when the
  // input sits within rounding distance of an odd multiple of tau/2; one
  // compensation step restores the half-open contract.
  if (re < -half) re += tau;
  if (re >= half) re -= tau;
  if (im < -half) im += tau;
  if (im >= half) im -= tau;
  return cxd{re, im};
}

SymbolFrame map_bits(const std::vector<uint8_t>& bits, const Constellation& c) {
  const int n = c.bits_per_symbol;
  if (bits.size() % static_cast<size_t>(n) != 0)
    throw LengthMismatchError("map_bits: bit count not a multiple of bits_per_symbol");
  SymbolFrame f;
  f.bits = bits;
  f.s.reserve(bits.size() / n);
  for (size_t i = 0; i < bits.size(); i += n) {
    unsigned idx = 0;
    for (int b = 0; b < n; ++b) idx = (idx << 1) | (bits[i + b] & 1u);
    f.s.push_back(c.points[idx]);
  }
  return f;
}

namespace {

SymbolFrame slice_impl(const cvec& r, const Constellation& c, bool fold) {
  SymbolFrame f;
  f.s.reserve(r.size());
  f.bits.reserve(r.size() * c.bits_per_symbol);
  const int n = c.bits_per_symbol;
  for (const cxd& y : r) {
    const cxd z = fold ? modulo_reduce(y, c.tau) : y;
    size_t best = 0;
    double best_d = std::norm(z - c.points[0]);
    for (size_t k = 1; k < c.points.size(); ++k) {
      const double d = std::norm(z - c.points[k]);
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    f.s.push_back(c.points[best]);
    for (int b = n - 1; b >= 0; --b) f.bits.push_back(static_cast<uint8_t>((best >> b) & 1u));
  }
  return f;
}

}  // namespace

SymbolFrame detect_symbols(const cvec& r, const Constellation& c) { return slice_impl(r, c, true); }

SymbolFrame slice_nearest(const cvec& r, const Constellation& c) { return slice_impl(r, c, false); }

Matrix generate_channel(int n_rows, int n_cols, RngStream& rng) {
  if (n_rows < 1 || n_cols < 1) throw ConfigError("generate_channel: dimensions must be >= 1");
  Matrix h(n_rows, n_cols);
  for (int i = 0; i < n_rows; ++i)
    for (int j = 0; j < n_cols; ++j) h(i, j) = rng.next_complex_gaussian();
  return h;
}

cvec generate_noise(int n_dims, const NoiseModel& noise, RngStream& rng) {
  cvec n(static_cast<size_t>(n_dims));
  const double scale = std::sqrt(noise.sigma_n_sq);
  for (cxd& z : n) z = scale * rng.next_complex_gaussian();
  return n;
}

}  // namespace cothp
