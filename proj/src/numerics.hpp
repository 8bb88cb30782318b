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

#include <complex>
#include <vector>

#include "errors.hpp"

namespace cothp {

using cxd = std::complex<double>;
using cvec = std::vector<cxd>;

/// Dense row-major complex matrix. The universal carrier for channel,
/// filter and precoder matrices.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  cxd& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  const cxd& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

  const std::vector<cxd>& data() const { return data_; }
  std::vector<cxd>& data() { return data_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<cxd> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
cvec operator*(const Matrix& a, const cvec& v);
Matrix operator*(double s, const Matrix& a);

/// Conjugate transpose.
Matrix adjoint(const Matrix& a);

double frobenius_norm(const Matrix& a);

/// Relative tolerance for declaring a pivot (and hence the input) rank
/// deficient: |pivot| < kRankTol * ||A||_F.
inline constexpr double kRankTol = 1e-12;

struct LqResult {
  Matrix L;  // m x m lower triangular, real non-negative diagonal
  Matrix Q;  // m x n, orthonormal rows (Q Q^H = I_m)
};

/// LQ decomposition of a wide or square full-row-rank matrix (m <= n),
/// computed as the conjugate-transposed Householder QR of A^H. Diagonal
/// phases of L are absorbed into Q so that l_ii is real and non-negative.
/// Throws RankDeficientError when a pivot falls below kRankTol * ||A||_F.
LqResult lq_decompose(const Matrix& a);

/// Forward substitution for lower-triangular B x = v.
/// Throws SingularDiagonalError when |b_ii| <= 1e-12.
cvec lower_triangular_solve(const Matrix& b, const cvec& v);

/// Explicit inverse of a lower-triangular matrix via forward substitution
/// on the identity columns.
Matrix lower_triangular_inverse(const Matrix& b);

/// Moore-Penrose right inverse A^+ = A^H (A A^H)^-1 of a full-row-rank
/// wide matrix, evaluated as Q^H L^-1 from the LQ factors.
Matrix pseudo_inverse(const Matrix& a);

/// sqrt(sum_{i != j} |a_ij|^2) of a square matrix.
double off_diagonal_frobenius(const Matrix& a);

}  // namespace cothp
