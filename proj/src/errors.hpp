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

#include <stdexcept>
#include <string>

namespace cothp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input matrix is (numerically) row-rank deficient. For channel matrices this
// signals a degenerate draw; callers redraw or abort.
class RankDeficientError : public Error {
 public:
  using Error::Error;
};

// A triangular system has a diagonal entry below the invertibility tolerance.
class SingularDiagonalError : public Error {
 public:
  using Error::Error;
};

// Square-matrix operation invoked on a non-square input.
class NonSquareError : public Error {
 public:
  using Error::Error;
};

// Operand dimensions are incompatible.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Bit payload length is not a multiple of the symbol size.
class LengthMismatchError : public Error {
 public:
  using Error::Error;
};

// Invalid or infeasible scenario/sweep configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace cothp
