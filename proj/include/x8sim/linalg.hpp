// Copyright 2026 The x8sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Small dense complex-matrix helpers: just enough for per-sector gate
// exponentials, operator-distance checks and Hermitian eigendecomposition.

#ifndef X8SIM_LINALG_HPP_
#define X8SIM_LINALG_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace x8sim {

using cdouble = std::complex<double>;

struct CMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<cdouble> data;  // row-major

  CMatrix() = default;
  CMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c) {}

  cdouble& at(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  const cdouble& at(int i, int j) const {
    return data[static_cast<std::size_t>(i) * cols + j];
  }

  static CMatrix identity(int n) {
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
  }
};

inline CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matmul: shape mismatch");
  CMatrix c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    for (int k = 0; k < a.cols; ++k) {
      const cdouble aik = a.at(i, k);
      if (aik == cdouble{}) continue;
      for (int j = 0; j < b.cols; ++j) c.at(i, j) += aik * b.at(k, j);
    }
  }
  return c;
}

inline CMatrix adjoint(const CMatrix& a) {
  CMatrix b(a.cols, a.rows);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) b.at(j, i) = std::conj(a.at(i, j));
  return b;
}

inline double frobenius_norm_squared(const CMatrix& a) {
  double s = 0.0;
  for (const auto& z : a.data) s += std::norm(z);
  return s;
}

inline double frobenius_norm(const CMatrix& a) {
  return std::sqrt(frobenius_norm_squared(a));
}

// tr(A† B); A and B must have the same shape.
inline cdouble adjoint_trace_product(const CMatrix& a, const CMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw std::invalid_argument("adjoint_trace_product: shape mismatch");
  cdouble t{};
  for (std::size_t i = 0; i < a.data.size(); ++i) t += std::conj(a.data[i]) * b.data[i];
  return t;
}

inline double one_norm(const CMatrix& a) {
  double best = 0.0;
  for (int j = 0; j < a.cols; ++j) {
    double col = 0.0;
    for (int i = 0; i < a.rows; ++i) col += std::abs(a.at(i, j));
    best = std::max(best, col);
  }
  return best;
}

// exp(A) by scaling-and-squaring with a Taylor series. Intended for the small
// anti-Hermitian sector generators, where it is accurate to machine precision.
inline CMatrix matrix_exp(const CMatrix& a) {
  if (a.rows != a.cols) throw std::invalid_argument("matrix_exp: not square");
  const int n = a.rows;
  int squarings = 0;
  double nrm = one_norm(a);
  while (nrm > 0.25) {
    nrm /= 2.0;
    ++squarings;
  }
  const double scale = std::ldexp(1.0, -squarings);
  CMatrix b(n, n);
  for (std::size_t i = 0; i < b.data.size(); ++i) b.data[i] = a.data[i] * scale;

  CMatrix result = CMatrix::identity(n);
  CMatrix term = CMatrix::identity(n);
  for (int k = 1; k <= 64; ++k) {
    term = matmul(term, b);
    for (std::size_t i = 0; i < term.data.size(); ++i) term.data[i] /= double(k);
    for (std::size_t i = 0; i < term.data.size(); ++i) result.data[i] += term.data[i];
    if (frobenius_norm(term) < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) result = matmul(result, result);
  return result;
}

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  CMatrix vectors;             // columns are eigenvectors
};

// Cyclic Jacobi for Hermitian matrices. Used for density-matrix spectral
// decompositions (dimension <= a few hundred) and positivity checks.
inline EigenDecomposition hermitian_eigen(const CMatrix& input) {
  if (input.rows != input.cols) throw std::invalid_argument("hermitian_eigen: not square");
  const int n = input.rows;
  CMatrix a = input;
  CMatrix v = CMatrix::identity(n);

  auto off_norm = [&]() {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) s += std::norm(a.at(i, j));
    return std::sqrt(s);
  };

  const double scale = std::max(frobenius_norm(a), 1e-300);
  for (int sweep = 0; sweep < 100 && off_norm() > 1e-14 * scale; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cdouble apq = a.at(p, q);
        const double mag = std::abs(apq);
        if (mag < 1e-300) continue;
        const cdouble phase = apq / mag;
        const double app = a.at(p, p).real();
        const double aqq = a.at(q, q).real();
        // Zero a[p][q] with the plane rotation G = [[c, -s e^{i alpha}],
        // [s e^{-i alpha}, c]], alpha = arg(a[p][q]).
        double t;
        const double tau = (app - aqq) / (2.0 * mag);
        if (std::abs(tau) > 1e18) {
          t = 1.0 / (2.0 * tau);
        } else {
          t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        for (int k = 0; k < n; ++k) {
          const cdouble akp = a.at(k, p);
          const cdouble akq = a.at(k, q);
          a.at(k, p) = c * akp + s * std::conj(phase) * akq;
          a.at(k, q) = -s * phase * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const cdouble apk = a.at(p, k);
          const cdouble aqk = a.at(q, k);
          a.at(p, k) = c * apk + s * phase * aqk;
          a.at(q, k) = -s * std::conj(phase) * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const cdouble vkp = v.at(k, p);
          const cdouble vkq = v.at(k, q);
          v.at(k, p) = c * vkp + s * std::conj(phase) * vkq;
          v.at(k, q) = -s * phase * vkp + c * vkq;
        }
      }
    }
  }

  EigenDecomposition out;
  out.values.resize(n);
  for (int i = 0; i < n; ++i) out.values[i] = a.at(i, i).real();
  out.vectors = CMatrix(n, n);

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (out.values[order[j]] < out.values[order[i]]) std::swap(order[i], order[j]);
  std::vector<double> sorted(n);
  for (int i = 0; i < n; ++i) {
    sorted[i] = out.values[order[i]];
    for (int k = 0; k < n; ++k) out.vectors.at(k, i) = v.at(k, order[i]);
  }
  out.values = std::move(sorted);
  return out;
}

}  // namespace x8sim

#endif  // X8SIM_LINALG_HPP_
