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

// Unitaries from Hamiltonians and random-unitary (incoherent) channels.
//
// Time is folded into the generators: a profile point delta_omega produces
// U(delta_omega) = exp(-i (H0t + delta_omega * K)), where H0t is the desired
// Hamiltonian already multiplied by the pulse duration and K is the
// dimensionless perturbation model.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "incoherent/liouville.hpp"

namespace incoherent {

class Hamiltonian {
 public:
  /// Throws ValidationError unless Hermitian within tol * max(1, max|m|).
  explicit Hamiltonian(ComplexMatrix m, double tol = 1e-12);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  ComplexMatrix m_;
};

struct ProfilePoint {
  double delta_omega;
  double weight;
};

/// Discrete probability distribution over the normalized control deviation.
class RFProfile {
 public:
  /// Weights must be >= 0 and sum to 1 within 1e-12; deltas strictly increasing.
  explicit RFProfile(std::vector<ProfilePoint> points);

  /// Same checks after dividing the weights by their sum.
  static RFProfile normalized(std::span<const double> deltas,
                              std::span<const double> weights);

  const std::vector<ProfilePoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }

 private:
  std::vector<ProfilePoint> points_;
};

struct EnsembleMember {
  double weight;
  ComplexMatrix unitary;
};

class UnitaryEnsemble {
 public:
  /// Throws InvalidArgument on empty input, ValidationError on bad weights or
  /// non-unitary members (tolerance 1e-10), DimensionError on mixed sizes.
  explicit UnitaryEnsemble(std::vector<EnsembleMember> members);

  const std::vector<EnsembleMember>& members() const { return members_; }
  std::size_t dim() const { return static_cast<std::size_t>(members_.front().unitary.rows()); }

 private:
  std::vector<EnsembleMember> members_;
};

enum class ProfileKind { uniform, gaussian, skewed };

struct ProfileParams {
  double center = 0.0;
  /// Half-width (uniform), standard deviation (gaussian) or mean half-support
  /// (skewed).
  double width = 0.05;
  /// Skewed only, in (-1, 1). The support is [center - width*(1-skew),
  /// center + width*(1+skew)] with the mode at center.
  double skew = 0.0;
};

/// exp(-i H t) through the Hermitian eigendecomposition of H.
ComplexMatrix expm_unitary(const Hamiltonian& h, double t);

/// sum_k p_k conj(U_k) kron U_k accumulated in member order.
Superoperator rud_superoperator(const UnitaryEnsemble& ensemble);

UnitaryEnsemble rf_ensemble(const Hamiltonian& h0t, const Hamiltonian& k,
                            const RFProfile& profile);

Superoperator rf_incoherent_channel(const Hamiltonian& h0t, const Hamiltonian& k,
                                    const RFProfile& profile);

/// Uniform: n points spanning center +/- width with equal weights.
/// Gaussian: n points over center +/- 3 width, weights from the density.
/// Skewed: two-sided triangle sampled at n cell midpoints.
RFProfile make_synthetic_profile(ProfileKind kind, const ProfileParams& params,
                                 std::size_t n_points);

/// Haar-random unitary (QR of a complex Ginibre matrix with phase fix).
ComplexMatrix random_unitary(std::size_t dim, std::mt19937_64& rng);

/// `members` Haar unitaries on `qubits` qubits with Dirichlet(1) weights.
UnitaryEnsemble random_ensemble(std::size_t qubits, std::size_t members,
                                std::uint64_t seed);

}  // namespace incoherent
