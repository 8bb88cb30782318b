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

#include "numerics.hpp"

namespace cothp {

/// Deterministic seedable random stream with explicit sub-stream selection.
///
/// Generator: pcg32 (PCG-XSH-RR 64/32, Melissa O'Neill's reference
/// constants). The (seed, stream_id) pair fully determines the output
/// sequence; distinct stream ids give statistically independent sequences.
/// Uniform doubles take 53 bits from two consecutive 32-bit outputs as
/// ((hi >> 5) * 2^26 + (lo >> 6)) / 2^53. Complex Gaussians use the polar
/// Box-Muller form sqrt(-ln u1) * exp(2*pi*i*u2); see docs/constellations.md
/// for the portability notes.
class RngStream {
 public:
  RngStream(uint64_t seed, uint64_t stream_id);

  uint32_t next_u32();
  /// Uniform on [0, 1) with 53-bit resolution.
  double next_double();
  /// Uniform on (0, 1): (k + 0.5) / 2^53 with k the 53-bit draw.
  double next_double_open();
  /// One draw of CN(0, 1) (circularly symmetric, unit total variance).
  cxd next_complex_gaussian();
  /// Uniform bit.
  uint8_t next_bit() { return static_cast<uint8_t>(next_u32() >> 31); }

  uint64_t seed() const { return seed_; }
  uint64_t stream_id() const { return stream_id_; }

 private:
  uint64_t state_;
  uint64_t inc_;
  uint64_t seed_;
  uint64_t stream_id_;
};

/// Per-complex-dimension total noise variance sigma_n^2.
struct NoiseModel {
  explicit NoiseModel(double sigma_n_sq_in);
  double sigma_n_sq;
};

enum class ModulationScheme { QPSK, QAM16 };

/// A unit-energy square constellation together with its modulo period tau
/// and Gray bit mapping. Point index == integer value of the bit pattern
/// (first bit = MSB), so the point table doubles as the demap table.
struct Constellation {
  std::string name;
  ModulationScheme scheme;
  std::vector<cxd> points;
  int bits_per_symbol;  // N
  double tau;           // modulo period

  static Constellation qpsk(double tau_override = 0.0);
  static Constellation qam16(double tau_override = 0.0);
  /// name: "qpsk" or "16qam" (case-insensitive). tau_override <= 0 keeps the
  /// modulation default.
  static Constellation by_name(const std::string& name, double tau_override = 0.0);

  double min_distance() const;
};

struct SymbolFrame {
  cvec s;                      // stacked per-user streams
  std::vector<uint8_t> bits;   // originating/detected bit payload
};

/// Element-wise modulo that folds real and imaginary parts into
/// [-tau/2, tau/2): M(x) = x - floor(Re(x)/tau + 1/2)*tau
///                        - j*floor(Im(x)/tau + 1/2)*tau.
cxd modulo_reduce(cxd x, double tau);

/// Gray-map a bit payload onto constellation symbols. The bit count must be
/// a multiple of bits_per_symbol.
SymbolFrame map_bits(const std::vector<uint8_t>& bits, const Constellation& c);

/// Receiver folding plus slicing: modulo-reduce each entry with c.tau, then
/// pick the nearest constellation point (ties toward the smaller index).
SymbolFrame detect_symbols(const cvec& r, const Constellation& c);

/// Plain nearest-point slicing without the modulo fold (linear receivers).
SymbolFrame slice_nearest(const cvec& r, const Constellation& c);

/// i.i.d. CN(0, 1) channel matrix.
Matrix generate_channel(int n_rows, int n_cols, RngStream& rng);

/// i.i.d. CN(0, sigma_n^2) noise vector.
cvec generate_noise(int n_dims, const NoiseModel& noise, RngStream& rng);

}  // namespace cothp
