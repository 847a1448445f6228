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

#include "incoherent/channels.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "incoherent/errors.hpp"

namespace incoherent {

Hamiltonian::Hamiltonian(ComplexMatrix m, double tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) {
    throw DimensionError("Hamiltonian must be square and nonempty");
  }
  if (!is_hermitian(m_, tol * std::max(1.0, max_abs(m_)))) {
    throw ValidationError("Hamiltonian is not Hermitian");
  }
}

RFProfile::RFProfile(std::vector<ProfilePoint> points) : points_(std::move(points)) {
  if (points_.empty()) throw InvalidArgument("RF profile is empty");
  double total = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    if (!std::isfinite(p.delta_omega) || !std::isfinite(p.weight)) {
      throw ValidationError("RF profile contains a non-finite value");
    }
    if (p.weight < 0.0) throw ValidationError("RF profile has a negative weight");
    if (i > 0 && !(p.delta_omega > points_[i - 1].delta_omega)) {
      throw ValidationError("RF profile deltas must be strictly increasing");
    }
    total += p.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "RF profile weights sum to " << total << ", not 1";
    throw ValidationError(os.str());
  }
}

RFProfile RFProfile::normalized(std::span<const double> deltas,
                                std::span<const double> weights) {
  if (deltas.size() != weights.size()) {
    throw DimensionError("RF profile: deltas and weights differ in length");
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw ValidationError("RF profile has no positive mass");
  std::vector<ProfilePoint> pts(deltas.size());
  for (std::size_t i = 0; i < deltas.size(); ++i) pts[i] = {deltas[i], weights[i] / total};
  return RFProfile(std::move(pts));
}

UnitaryEnsemble::UnitaryEnsemble(std::vector<EnsembleMember> members)
    : members_(std::move(members)) {
  if (members_.empty()) throw InvalidArgument("unitary ensemble is empty");
  const auto n = members_.front().unitary.rows();
  double total = 0.0;
  for (const auto& m : members_) {
    if (m.unitary.rows() != n || m.unitary.cols() != n) {
      throw DimensionError("unitary ensemble members differ in dimension");
    }
    if (!(m.weight >= 0.0)) throw ValidationError("ensemble weight is negative");
    if (!is_unitary(m.unitary, 1e-10)) {
      throw ValidationError("ensemble member is not unitary");
    }
    total += m.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "ensemble weights sum to " << total << ", not 1";
    throw ValidationError(os.str());
  }
}

ComplexMatrix expm_unitary(const Hamiltonian& h, double t) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es((h.matrix() + h.matrix().adjoint()) * 0.5);
  const ComplexMatrix& v = es.eigenvectors();
  ComplexVector phases(v.cols());
  for (Eigen::Index i = 0; i < v.cols(); ++i) {
    phases(i) = std::exp(Complex(0.0, -es.eigenvalues()(i) * t));
  }
  return v * phases.asDiagonal() * v.adjoint();
}

Superoperator rud_superoperator(const UnitaryEnsemble& ensemble) {
  const auto n2 = static_cast<Eigen::Index>(ensemble.dim() * ensemble.dim());
  ComplexMatrix s = ComplexMatrix::Zero(n2, n2);
  for (const auto& m : ensemble.members()) {
    s += m.weight * kron(m.unitary.conjugate(), m.unitary);
  }
  return Superoperator(std::move(s));
}

UnitaryEnsemble rf_ensemble(const Hamiltonian& h0t, const Hamiltonian& k,
                            const RFProfile& profile) {
  if (h0t.dim() != k.dim()) {
    throw DimensionError("rf channel: H0t and K differ in dimension");
  }
  std::vector<EnsembleMember> members;
  members.reserve(profile.size());
  for (const auto& p : profile.points()) {
    const Hamiltonian hk(h0t.matrix() + p.delta_omega * k.matrix());
    members.push_back({p.weight, expm_unitary(hk, 1.0)});
  }
  return UnitaryEnsemble(std::move(members));
}

Superoperator rf_incoherent_channel(const Hamiltonian& h0t, const Hamiltonian& k,
                                    const RFProfile& profile) {
  return rud_superoperator(rf_ensemble(h0t, k, profile));
}

RFProfile make_synthetic_profile(ProfileKind kind, const ProfileParams& params,
                                 std::size_t n_points) {
  if (n_points < 3) throw InvalidArgument("synthetic profile needs at least 3 points");
  if (!(params.width > 0.0) || !std::isfinite(params.width)) {
    throw InvalidArgument("synthetic profile width must be positive");
  }
  const double c = params.center;
  const double w = params.width;
  const auto n = static_cast<double>(n_points);
  std::vector<double> x(n_points);
  std::vector<double> p(n_points);

  switch (kind) {
    case ProfileKind::uniform:
      for (std::size_t i = 0; i < n_points; ++i) {
        x[i] = c + w * (2.0 * static_cast<double>(i) / (n - 1.0) - 1.0);
        p[i] = 1.0;
      }
      break;
    case ProfileKind::gaussian:
      for (std::size_t i = 0; i < n_points; ++i) {
        const double u = 3.0 * (2.0 * static_cast<double>(i) / (n - 1.0) - 1.0);
        x[i] = c + w * u;
        p[i] = std::exp(-0.5 * u * u);
      }
      break;
    case ProfileKind::skewed: {
      if (!(std::abs(params.skew) < 1.0)) {
        throw InvalidArgument("skewed profile needs |skew| < 1");
      }
      const double left = w * (1.0 - params.skew);
      const double right = w * (1.0 + params.skew);
      const double span = left + right;
      for (std::size_t i = 0; i < n_points; ++i) {
        x[i] = c - left + span * (static_cast<double>(i) + 0.5) / n;
        const double d = x[i] - c;
        p[i] = d < 0.0 ? 1.0 + d / left : 1.0 - d / right;
      }
      break;
    }
  }
  return RFProfile::normalized(x, p);
}

ComplexMatrix random_unitary(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(dim);
  ComplexMatrix z(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = g(rng);
      const double im = g(rng);
      z(i, j) = Complex(re, im);
    }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mag = std::abs(r(i, i));
    if (mag > 0.0) q.col(i) *= r(i, i) / mag;
  }
  return q;
}

UnitaryEnsemble random_ensemble(std::size_t qubits, std::size_t members,
                                std::uint64_t seed) {
  if (qubits == 0 || members == 0) {
    throw InvalidArgument("random ensemble needs at least one qubit and one member");
  }
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  const std::size_t dim = std::size_t{1} << qubits;
  std::vector<double> w(members);
  for (auto& x : w) x = expo(rng);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  std::vector<EnsembleMember> out;
  out.reserve(members);
  for (std::size_t i = 0; i < members; ++i) {
    out.push_back({w[i] / total, random_unitary(dim, rng)});
  }
  // Renormalized weights can miss 1 by an ulp or two; fold it into the last one.
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < members; ++i) acc += out[i].weight;
  out.back().weight = 1.0 - acc;
  return UnitaryEnsemble(std::move(out));
}

}  // namespace incoherent
