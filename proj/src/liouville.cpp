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

#include "incoherent/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "incoherent/errors.hpp"

namespace incoherent {

namespace {

std::size_t exact_sqrt(std::size_t n) {
  auto r = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  return r * r == n ? r : 0;
}

std::size_t liouville_dim(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << " must be square, got " << m.rows() << "x" << m.cols();
    throw DimensionError(os.str());
  }
  const std::size_t n = exact_sqrt(static_cast<std::size_t>(m.rows()));
  if (n == 0) {
    std::ostringstream os;
    os << what << " side " << m.rows() << " is not a perfect square";
    throw DimensionError(os.str());
  }
  return n;
}

bool complex_desc(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}

}  // namespace

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("max_abs_diff: shape mismatch");
  }
  return max_abs(a - b);
}

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return max_abs(a - b) <= tol;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return max_abs(u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())) <= tol;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

void normalize_phase(ComplexVector& v) {
  const double norm = v.norm();
  if (norm == 0.0) return;
  v /= norm;
  const double floor = 1e-12;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > floor) {
      v *= std::conj(v(i)) / mag;
      v(i) = Complex(mag, 0.0);
      return;
    }
  }
}

// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(ComplexMatrix m, double tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) {
    throw DimensionError("density matrix must be square and nonempty");
  }
  if (!is_hermitian(m_, tol)) {
    throw ValidationError("density matrix is not Hermitian");
  }
  const Complex tr = m_.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > tol) {
    std::ostringstream os;
    os << "density matrix trace " << tr.real() << " differs from 1";
    throw ValidationError(os.str());
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(
      (m_ + m_.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  if (lo < -tol) {
    std::ostringstream os;
    os << "density matrix has negative eigenvalue " << lo;
    throw ValidationError(os.str());
  }
}

LiouvilleVector::LiouvilleVector(ComplexVector entries) : v_(std::move(entries)) {
  dim_ = exact_sqrt(static_cast<std::size_t>(v_.size()));
  if (dim_ == 0) {
    std::ostringstream os;
    os << "Liouville vector length " << v_.size() << " is not a perfect square";
    throw DimensionError(os.str());
  }
}

Superoperator::Superoperator(ComplexMatrix m) : m_(std::move(m)) {
  dim_ = liouville_dim(m_, "superoperator");
}

LiouvilleVector Superoperator::apply(const LiouvilleVector& v) const {
  if (v.dim() != dim_) throw DimensionError("superoperator/vector dimension mismatch");
  return LiouvilleVector(m_ * v.entries());
}

ChoiMatrix::ChoiMatrix(ComplexMatrix m) : m_(std::move(m)) {
  dim_ = liouville_dim(m_, "Choi matrix");
}

// ---------------------------------------------------------------------------

LiouvilleVector columnize(const ComplexMatrix& rho) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) {
    throw DimensionError("columnize expects a square matrix");
  }
  const Eigen::Index n = rho.rows();
  ComplexVector v(n * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) v(i + j * n) = rho(i, j);
  }
  return LiouvilleVector(std::move(v));
}

LiouvilleVector columnize(const DensityMatrix& rho) { return columnize(rho.matrix()); }

ComplexMatrix uncolumnize(const ComplexVector& v) {
  return uncolumnize(LiouvilleVector(v));
}

ComplexMatrix uncolumnize(const LiouvilleVector& v) {
  const auto n = static_cast<Eigen::Index>(v.dim());
  ComplexMatrix m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) m(i, j) = v.entries()(i + j * n);
  }
  return m;
}

Superoperator unitary_superoperator(const ComplexMatrix& u, double tol) {
  if (!is_unitary(u, tol)) {
    throw ValidationError("unitary_superoperator: input is not unitary");
  }
  return Superoperator(kron(u.conjugate(), u));
}

std::vector<EigenPair> eig_general(const ComplexMatrix& m, double residual_tol) {
  if (m.rows() != m.cols()) throw DimensionError("eig_general expects a square matrix");
  Eigen::ComplexEigenSolver<ComplexMatrix> es(m, true);
  if (es.info() != Eigen::Success) {
    throw ConvergenceError("eig_general: Schur iteration did not converge",
                           std::numeric_limits<double>::infinity());
  }
  const double scale = std::max(m.norm(), std::numeric_limits<double>::min());
  std::vector<EigenPair> out;
  out.reserve(static_cast<std::size_t>(m.rows()));
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ComplexVector v = es.eigenvectors().col(i);
    normalize_phase(v);
    const Complex lambda = es.eigenvalues()(i);
    worst = std::max(worst, (m * v - lambda * v).norm());
    out.push_back({lambda, std::move(v)});
  }
  if (worst > residual_tol * scale) {
    std::ostringstream os;
    os << "eig_general: residual " << worst << " exceeds " << residual_tol
       << " * ||M|| = " << residual_tol * scale;
    throw ConvergenceError(os.str(), worst);
  }
  std::stable_sort(out.begin(), out.end(), [](const EigenPair& a, const EigenPair& b) {
    return complex_desc(a.value, b.value);
  });
  return out;
}

std::vector<Complex> eigenvalues(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("eigenvalues expects a square matrix");
  Eigen::ComplexEigenSolver<ComplexMatrix> es(m, false);
  if (es.info() != Eigen::Success) {
    throw ConvergenceError("eigenvalues: Schur iteration did not converge",
                           std::numeric_limits<double>::infinity());
  }
  std::vector<Complex> out(es.eigenvalues().data(),
                           es.eigenvalues().data() + es.eigenvalues().size());
  std::stable_sort(out.begin(), out.end(), complex_desc);
  return out;
}

std::vector<HermitianEigenPair> eig_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) throw DimensionError("eig_hermitian expects a square matrix");
  const double bound = tol * std::max(1.0, max_abs(m));
  if (max_abs(m - m.adjoint()) > bound) {
    throw ValidationError("eig_hermitian: input is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es((m + m.adjoint()) * 0.5);
  if (es.info() != Eigen::Success) {
    throw ConvergenceError("eig_hermitian: solver did not converge",
                           std::numeric_limits<double>::infinity());
  }
  std::vector<HermitianEigenPair> out;
  out.reserve(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = m.rows() - 1; i >= 0; --i) {
    ComplexVector v = es.eigenvectors().col(i);
    normalize_phase(v);
    out.push_back({es.eigenvalues()(i), std::move(v)});
  }
  return out;
}

// C[(a,c),(b,d)] = S[(d,c),(b,a)] with (x,y) -> x * N + y. Applying the same
// permutation twice gives the identity.
namespace {
ComplexMatrix reshuffle(const ComplexMatrix& in, std::size_t n_) {
  const auto n = static_cast<Eigen::Index>(n_);
  ComplexMatrix out(n * n, n * n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index c = 0; c < n; ++c)
      for (Eigen::Index b = 0; b < n; ++b)
        for (Eigen::Index d = 0; d < n; ++d)
          out(a * n + c, b * n + d) = in(d * n + c, b * n + a);
  return out;
}
}  // namespace

ChoiMatrix superop_to_choi(const Superoperator& s) {
  return ChoiMatrix(reshuffle(s.matrix(), s.dim()));
}

Superoperator choi_to_superop(const ChoiMatrix& c) {
  return Superoperator(reshuffle(c.matrix(), c.dim()));
}

CpCheck is_cp(const Superoperator& s, double tol) {
  const auto pairs = eig_hermitian(superop_to_choi(s).matrix());
  const double lo = pairs.back().value;
  return {lo >= -tol, lo};
}

KrausSet choi_to_kraus(const ChoiMatrix& c, std::optional<double> rank_tol) {
  const auto pairs = eig_hermitian(c.matrix());
  const double top = pairs.front().value;
  const double cutoff =
      rank_tol.value_or(kDefaultRelativeRankTolerance * std::max(top, 0.0));
  if (pairs.back().value < -cutoff) {
    std::ostringstream os;
    os << "Choi matrix has negative eigenvalue " << pairs.back().value;
    throw NotCompletelyPositive(os.str(), pairs.back().value);
  }
  KrausSet out;
  out.dim = c.dim();
  for (const auto& p : pairs) {
    if (p.value <= cutoff) break;
    out.operators.push_back(std::sqrt(p.value) * uncolumnize(p.vector));
  }
  return out;
}

Superoperator kraus_to_superop(const KrausSet& k) {
  if (k.operators.empty()) throw InvalidArgument("kraus_to_superop: empty operator list");
  const auto n = static_cast<Eigen::Index>(k.dim);
  ComplexMatrix s = ComplexMatrix::Zero(n * n, n * n);
  for (const auto& a : k.operators) {
    if (a.rows() != n || a.cols() != n) {
      throw DimensionError("kraus_to_superop: operator dimension mismatch");
    }
    s += kron(a.conjugate(), a);
  }
  return Superoperator(std::move(s));
}

CpFilterResult cp_filter(const Superoperator& s, double tol) {
  const auto pairs = eig_hermitian(superop_to_choi(s).matrix());
  if (pairs.back().value >= -tol) return {s, 0.0};

  double kept = 0.0;
  double removed = 0.0;
  for (const auto& p : pairs) {
    if (p.value > 0.0) kept += p.value;
    else removed += -p.value;
  }
  if (kept <= 0.0) {
    throw NotCompletelyPositive("cp_filter: Choi matrix has no positive spectrum",
                                pairs.back().value);
  }
  const auto n2 = static_cast<Eigen::Index>(s.dim() * s.dim());
  const double scale = static_cast<double>(s.dim()) / kept;
  ComplexMatrix c = ComplexMatrix::Zero(n2, n2);
  for (const auto& p : pairs) {
    if (p.value > 0.0) c += (scale * p.value) * p.vector * p.vector.adjoint();
  }
  return {choi_to_superop(ChoiMatrix(std::move(c))), removed};
}

}  // namespace incoherent
