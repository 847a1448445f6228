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

// Liouville-space algebra on dense complex matrices.
//
// Density matrices are columnized by stacking columns left to right, so entry
// (i, j) of an N x N matrix lands at index i + j * N. Under this convention
// columnize(A * rho * B) = (transpose(B) kron A) * columnize(rho), and a unitary
// conjugation rho -> U rho U^dagger is represented by conj(U) kron U.

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace incoherent {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Absolute tolerance on Choi eigenvalues used by the CP test.
inline constexpr double kDefaultCpTolerance = 1e-9;
/// Kraus rank cutoff, relative to the largest Choi eigenvalue.
inline constexpr double kDefaultRelativeRankTolerance = 1e-10;
/// Residual bound for general eigenpairs, relative to the Frobenius norm.
inline constexpr double kDefaultEigenResidualTolerance = 1e-8;

// ---------------------------------------------------------------------------
// Elementwise helpers. Matrix comparisons always take an explicit tolerance.

double max_abs(const ComplexMatrix& m);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol);
bool is_hermitian(const ComplexMatrix& m, double tol);
bool is_unitary(const ComplexMatrix& u, double tol);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Makes the first entry with modulus above a relative floor real-positive and
/// scales to unit norm.
void normalize_phase(ComplexVector& v);

// ---------------------------------------------------------------------------
// Domain types.

/// Hermitian, unit-trace, positive semidefinite N x N matrix.
class DensityMatrix {
 public:
  /// Throws ValidationError if any invariant fails beyond `tol`.
  explicit DensityMatrix(ComplexMatrix m, double tol = 1e-9);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  ComplexMatrix m_;
};

/// Columnized operator of length N^2.
class LiouvilleVector {
 public:
  explicit LiouvilleVector(ComplexVector entries);

  std::size_t dim() const { return dim_; }
  const ComplexVector& entries() const { return v_; }

 private:
  std::size_t dim_;
  ComplexVector v_;
};

/// Linear map on columnized N x N matrices, stored as an N^2 x N^2 matrix.
class Superoperator {
 public:
  explicit Superoperator(ComplexMatrix m);

  std::size_t dim() const { return dim_; }
  const ComplexMatrix& matrix() const { return m_; }
  LiouvilleVector apply(const LiouvilleVector& v) const;

 private:
  std::size_t dim_;
  ComplexMatrix m_;
};

/// Choi matrix C = sum_ij (E_ij kron I) S (I kron E_ij).
class ChoiMatrix {
 public:
  explicit ChoiMatrix(ComplexMatrix m);

  std::size_t dim() const { return dim_; }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  std::size_t dim_;
  ComplexMatrix m_;
};

/// Kraus operators with their weights already folded in (sqrt(lambda) scaling).
struct KrausSet {
  std::size_t dim = 0;
  std::vector<ComplexMatrix> operators;
};

struct EigenPair {
  Complex value;
  ComplexVector vector;
};

struct HermitianEigenPair {
  double value;
  ComplexVector vector;
};

struct CpCheck {
  bool completely_positive;
  double min_eigenvalue;
};

struct CpFilterResult {
  Superoperator filtered;
  double removed_weight;
};

// ---------------------------------------------------------------------------
// Operations.

LiouvilleVector columnize(const ComplexMatrix& rho);
LiouvilleVector columnize(const DensityMatrix& rho);
ComplexMatrix uncolumnize(const LiouvilleVector& v);
/// Throws DimensionError when the length is not a perfect square.
ComplexMatrix uncolumnize(const ComplexVector& v);

/// conj(U) kron U. Throws ValidationError if U is not unitary within `tol`.
Superoperator unitary_superoperator(const ComplexMatrix& u, double tol = 1e-10);

/// Eigenpairs of a general square matrix, with multiplicity, unit-norm vectors
/// under the phase convention above, ordered by real part then imaginary part,
/// both descending. Throws ConvergenceError when the solver fails or a residual
/// ||Mv - lv|| exceeds residual_tol * ||M||_F.
std::vector<EigenPair> eig_general(
    const ComplexMatrix& m,
    double residual_tol = kDefaultEigenResidualTolerance);

/// Eigenvalues only, same ordering as eig_general.
std::vector<Complex> eigenvalues(const ComplexMatrix& m);

/// Real eigenvalues sorted descending with orthonormal eigenvectors.
/// Throws ValidationError if m is not Hermitian within tol * max(1, max|m|).
std::vector<HermitianEigenPair> eig_hermitian(const ComplexMatrix& m,
                                              double tol = 1e-10);

ChoiMatrix superop_to_choi(const Superoperator& s);
/// Inverse reshuffle; the index permutation is its own inverse.
Superoperator choi_to_superop(const ChoiMatrix& c);

CpCheck is_cp(const Superoperator& s, double tol = kDefaultCpTolerance);

/// One operator per Choi eigenvalue above rank_tol. When rank_tol is absent it
/// defaults to kDefaultRelativeRankTolerance times the largest eigenvalue.
/// Throws NotCompletelyPositive for eigenvalues below -rank_tol.
KrausSet choi_to_kraus(const ChoiMatrix& c,
                       std::optional<double> rank_tol = std::nullopt);
Superoperator kraus_to_superop(const KrausSet& k);

/// Zeroes negative Choi eigenvalues and rescales the rest to trace N. A map
/// whose Choi spectrum is already >= -tol is returned unchanged.
CpFilterResult cp_filter(const Superoperator& s,
                         double tol = kDefaultCpTolerance);

}  // namespace incoherent
