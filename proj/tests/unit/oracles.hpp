// Copyright 2026 The incoherent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Test-side reference computations. Each one is written from the definition
// with plain loops so it shares no code path with the library.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using C = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// |i><j|
inline Mat unit(int n, int i, int j) {
  Mat e = Mat::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

// Stacks columns: entry (i, j) lands at i + j n.
inline Vec stack_columns(const Mat& m) {
  const int n = static_cast<int>(m.rows());
  Vec v(n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) v(i + j * n) = m(i, j);
  return v;
}

inline Mat unstack_columns(const Vec& v, int n) {
  Mat m(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) m(i, j) = v(i + j * n);
  return m;
}

// Superoperator of an arbitrary map given as a callable on N x N matrices,
// assembled column by column from its action on |i><j|.
template <class Map>
Mat superop_of(int n, Map phi) {
  Mat s(n * n, n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) s.col(i + j * n) = stack_columns(phi(unit(n, i, j)));
  return s;
}

// Choi matrix sum_ab |a><b| kron Phi(|a><b|), with Phi read off a superoperator.
inline Mat choi_of(const Mat& s) {
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(s.rows()))));
  Mat c = Mat::Zero(n * n, n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const Mat out = unstack_columns(s * stack_columns(unit(n, a, b)), n);
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) c(a * n + x, b * n + y) += out(x, y);
    }
  return c;
}

// Tr_B of a state on C^na kron C^nb.
inline Mat partial_trace_second(const Mat& rho, int na, int nb) {
  Mat out = Mat::Zero(na, na);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j)
      for (int k = 0; k < nb; ++k) out(i, j) += rho(i * nb + k, j * nb + k);
  return out;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// exp(-i H t) by scaled Taylor series with repeated squaring.
inline Mat expm_taylor(const Mat& h, double t) {
  const Mat a = C(0.0, -t) * h;
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::pow(2.0, squarings) > 0.25) ++squarings;
  const Mat x = a / std::pow(2.0, squarings);
  Mat term = Mat::Identity(h.rows(), h.cols());
  Mat sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * x / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

inline Mat pauli(char p) {
  Mat m(2, 2);
  switch (p) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, C(0, -1), C(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m << 1, 0, 0, 1; break;
  }
  return m;
}

struct Moments {
  double mean, std, skewness;
};

inline Moments moments(const std::vector<double>& x, const std::vector<double>& w) {
  double total = 0.0, mean = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    total += w[i];
    mean += w[i] * x[i];
  }
  mean /= total;
  double m2 = 0.0, m3 = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - mean;
    m2 += w[i] * d * d;
    m3 += w[i] * d * d * d;
  }
  m2 /= total;
  m3 /= total;
  return {mean, std::sqrt(m2), m3 / std::pow(m2, 1.5)};
}

// sum_b w_b exp(-i k x_b)
inline C characteristic(const std::vector<double>& x, const std::vector<double>& w, double k) {
  C f = 0.0;
  for (size_t i = 0; i < x.size(); ++i) f += w[i] * std::exp(C(0.0, -k * x[i]));
  return f;
}

inline Mat random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = C(g(rng), g(rng));
  return m;
}

// Unitary from the QR factor of a Gaussian matrix.
inline Mat random_unitary(int n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Mat> qr(random_matrix(n, n, rng));
  return qr.householderQ() * Mat::Identity(n, n);
}

// Kraus map sum_k A_k rho A_k^dagger.
inline Mat apply_kraus(const std::vector<Mat>& ops, const Mat& rho) {
  Mat out = Mat::Zero(rho.rows(), rho.cols());
  for (const Mat& a : ops) out += a * rho * a.adjoint();
  return out;
}

inline double max_abs_diff(const Mat& a, const Mat& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace oracle
