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

#include "numerics.hpp"

#include <cmath>
#include <cstdlib>

namespace cothp {

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows())
    throw DimensionError("matrix product: inner dimensions disagree");
  Matrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      const cxd aik = a(i, k);
      if (aik == cxd{}) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("matrix difference: shapes disagree");
  Matrix c(a.rows(), a.cols());
  for (size_t i = 0; i < a.data().size(); ++i) c.data()[i] = a.data()[i] - b.data()[i];
  return c;
}

Matrix operator*(double s, const Matrix& a) {
  Matrix c(a.rows(), a.cols());
  for (size_t i = 0; i < a.data().size(); ++i) c.data()[i] = s * a.data()[i];
  return c;
}

cvec operator*(const Matrix& a, const cvec& v) {
  if (static_cast<size_t>(a.cols()) != v.size())
    throw DimensionError("matrix-vector product: dimensions disagree");
  cvec out(a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    cxd acc = 0.0;
    for (int j = 0; j < a.cols(); ++j) acc += a(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

Matrix adjoint(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t(j, i) = std::conj(a(i, j));
  return t;
}

double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  for (const cxd& z : a.data()) s += std::norm(z);
  return std::sqrt(s);
}

// Householder QR of the n x m matrix B = A^H (thin form). R is m x m upper
// triangular, Q_thin is n x m with orthonormal columns. The LQ factors of A
// are then L = R^H and Q = Q_thin^H.
LqResult lq_decompose(const Matrix& a) {
  const int m = a.rows();
  const int n = a.cols();
  if (m > n) throw DimensionError("lq_decompose: requires rows <= cols");
  const double anorm = frobenius_norm(a);
  const double tol = kRankTol * anorm;

  Matrix b = adjoint(a);                     // n x m, factored in place
  std::vector<cvec> reflectors(m);           // Householder vectors, length n - j

  for (int j = 0; j < m; ++j) {
    double colnorm = 0.0;
    for (int i = j; i < n; ++i) colnorm += std::norm(b(i, j));
    colnorm = std::sqrt(colnorm);
    if (!(colnorm > tol))
      throw RankDeficientError("lq_decompose: pivot " + std::to_string(j) +
                               " below rank tolerance");

    const cxd bjj = b(j, j);
    const double ajj = std::abs(bjj);
    const cxd phase = (ajj > 0.0) ? bjj / ajj : cxd{1.0, 0.0};

    cvec v(n - j);
    for (int i = j; i < n; ++i) v[i - j] = b(i, j);
    v[0] += phase * colnorm;
    double vnorm = 0.0;
    for (const cxd& z : v) vnorm += std::norm(z);
    vnorm = std::sqrt(vnorm);
    for (cxd& z : v) z /= vnorm;

    // Apply P = I - 2 v v^H to the trailing columns of B.
    for (int c = j; c < m; ++c) {
      cxd dot = 0.0;
      for (int i = j; i < n; ++i) dot += std::conj(v[i - j]) * b(i, c);
      dot *= 2.0;
      for (int i = j; i < n; ++i) b(i, c) -= dot * v[i - j];
    }
    b(j, j) = -phase * colnorm;
    for (int i = j + 1; i < n; ++i) b(i, j) = 0.0;
    reflectors[j] = std::move(v);
  }

  // Accumulate the thin Q_b (n x m): apply the reflectors in reverse order
  // to the leading columns of the identity.
  Matrix qb(n, m);
  for (int j = 0; j < m; ++j) qb(j, j) = 1.0;
  for (int j = m - 1; j >= 0; --j) {
    const cvec& v = reflectors[j];
    for (int c = 0; c < m; ++c) {
      cxd dot = 0.0;
      for (int i = j; i < n; ++i) dot += std::conj(v[i - j]) * qb(i, c);
      dot *= 2.0;
      for (int i = j; i < n; ++i) qb(i, c) -= dot * v[i - j];
    }
  }

  LqResult out;
  out.L = Matrix(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= i; ++j) out.L(i, j) = std::conj(b(j, i));
  out.Q = adjoint(qb);

  // Absorb diagonal phases so l_ii is real non-negative: scale column i of L
  // by conj(phase(l_ii)) and row i of Q by phase(l_ii).
  for (int i = 0; i < m; ++i) {
    const cxd lii = out.L(i, i);
    const double mag = std::abs(lii);
    const cxd ph = (mag > 0.0) ? lii / mag : cxd{1.0, 0.0};
    const cxd phc = std::conj(ph);
    for (int k = i; k < m; ++k) out.L(k, i) *= phc;
    out.L(i, i) = cxd{mag, 0.0};
    for (int k = 0; k < n; ++k) out.Q(i, k) *= ph;
  }
  return out;
}

cvec lower_triangular_solve(const Matrix& b, const cvec& v) {
  if (b.rows() != b.cols()) throw NonSquareError("lower_triangular_solve: non-square matrix");
  const int r = b.rows();
  if (static_cast<size_t>(r) != v.size())
    throw DimensionError("lower_triangular_solve: vector length disagrees");
  for (int i = 0; i < r; ++i)
    if (!(std::abs(b(i, i)) > 1e-12))
      throw SingularDiagonalError("lower_triangular_solve: diagonal entry " + std::to_string(i) +
                                  " below tolerance");
  cvec x(r);
  for (int i = 0; i < r; ++i) {
    cxd acc = v[i];
    for (int j = 0; j < i; ++j) acc -= b(i, j) * x[j];
    x[i] = acc / b(i, i);
  }
  return x;
}

Matrix lower_triangular_inverse(const Matrix& b) {
  if (b.rows() != b.cols()) throw NonSquareError("lower_triangular_inverse: non-square matrix");
  const int r = b.rows();
  Matrix inv(r, r);
  cvec e(r);
  for (int c = 0; c < r; ++c) {
    std::fill(e.begin(), e.end(), cxd{});
    e[c] = 1.0;
    cvec x = lower_triangular_solve(b, e);
    for (int i = 0; i < r; ++i) inv(i, c) = x[i];
  }
  return inv;
}

Matrix pseudo_inverse(const Matrix& a) {
  LqResult lq = lq_decompose(a);  // throws RankDeficientError for degenerate input
  return adjoint(lq.Q) * lower_triangular_inverse(lq.L);
}

double off_diagonal_frobenius(const Matrix& a) {
  if (a.rows() != a.cols()) throw NonSquareError("off_diagonal_frobenius: non-square matrix");
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace cothp
