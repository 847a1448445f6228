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

// Spectral analysis of incoherent channels.
//
// For S = sum_k p_k conj(U_k) kron U_k with U_k = exp(-i (H0t + dw_k K)),
// first-order perturbation theory predicts the eigenvalue attached to the
// eigenvector conj(phi_m) kron phi_j as
//
//   lambda_jm = exp(-i (phi_j - phi_m)) * sum_k p_k exp(-i K_jm dw_k),
//   K_jm      = <phi_j|K|phi_j> - <phi_m|K|phi_m>,
//
// i.e. the unperturbed eigenvalue times the characteristic function of the
// deviation profile evaluated at K_jm. Pairing measured eigenvalues with
// (j, m) labels therefore yields samples of that characteristic function.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "incoherent/channels.hpp"
#include "incoherent/liouville.hpp"

namespace incoherent {

struct EigenBasis {
  std::vector<double> phis;  // descending
  ComplexMatrix vectors;     // column j pairs with phis[j]
};

/// Throws ValidationError when two eigenphases are closer than degeneracy_tol.
EigenBasis eigen_basis(const Hamiltonian& h0t, double degeneracy_tol = 1e-6);

struct PredictedEigenvalue {
  std::size_t j;
  std::size_t m;
  double k_jm;
  Complex lambda;
};

/// All N^2 first-order predictions, ordered by j * N + m.
std::vector<PredictedEigenvalue> predict_eigenvalues(const Hamiltonian& h0t,
                                                     const Hamiltonian& k,
                                                     const RFProfile& profile,
                                                     double degeneracy_tol = 1e-6);

struct PairingOptions {
  double match_tol = 0.2;
  double degeneracy_tol = 1e-6;
};

struct PairingEntry {
  std::size_t j;
  std::size_t m;
  Complex seed;  // Rayleigh quotient of S on conj(phi_m) kron phi_j
  Complex lambda_measured;
  Complex lambda_unperturbed;
  double k_jm;
  double distance;  // |lambda_measured - seed|
  bool degenerate;  // j == m
};

struct EigenPairing {
  std::size_t dim = 0;
  std::vector<PairingEntry> entries;
  std::vector<std::string> warnings;
};

/// Greedy injective matching of Rayleigh seeds to eigenvalues of S, seeds
/// visited in j * N + m order. Matches farther than match_tol are reported in
/// `warnings`; if no non-degenerate entry matches, throws ConvergenceError.
EigenPairing pair_eigenvalues(const Superoperator& s, const Hamiltonian& h0t,
                              const Hamiltonian& k, const PairingOptions& options = {});

struct SpectralSample {
  double k;
  Complex f;
};

struct SpectralSampleSet {
  std::vector<SpectralSample> samples;  // sorted by k, one DC sample (0, 1)
  std::vector<std::string> warnings;

  double window_span() const;
  /// 2 pi / span: the finest deviation scale the sample window can resolve.
  double resolution_estimate() const;
};

struct SampleOptions {
  /// K_jm values closer than this (relative to max |K_jm|) share one sample.
  double duplicate_tol = 1e-9;
  /// Duplicates whose f values disagree by more than this raise a warning.
  double disagreement_tol = 0.05;
};

/// Drops degenerate entries, forms f = lambda_measured * conj(lambda_unperturbed),
/// merges duplicate K_jm, adds the DC sample and sorts by k. Throws
/// InvalidArgument when every K_jm vanishes (the model carries no data).
SpectralSampleSet build_samples(const EigenPairing& pairing, const SampleOptions& options = {});

/// Largest |f(-k) - conj(f(k))| over the set; +inf if some k has no mirror
/// partner within `k_tol` (relative to the largest |k|).
double conjugate_symmetry_error(const std::vector<SpectralSample>& samples,
                                double k_tol = 1e-9);

struct ProfileMoments {
  double mean;
  double std;
  double skewness;
  double clipped_mass;  // fraction of absolute weight that was negative
};

/// Negative weights are clipped to zero before moments are taken. Throws
/// ValidationError when nothing positive remains.
ProfileMoments profile_metrics(std::span<const double> deltas, std::span<const double> weights);
ProfileMoments profile_metrics(const RFProfile& profile);

/// Offset of the effective unperturbed Hamiltonian along K: the profile mean.
double detect_offset(const RFProfile& recovered);

// ---------------------------------------------------------------------------
// Demonstration models.

/// Default off-diagonal coupling ratio of the demo models; see demo_model.
inline constexpr double kDemoCouplingRatio = 1e-4;

struct SpectralModel {
  Hamiltonian h0t;
  Hamiltonian k;
};

/// n-qubit model (n = 2, 3 or 4) with a diagonal H0t built from Z strings with
/// incommensurate weights, so every eigenphase gap and every K_jm is distinct,
/// and K = diagonal_scale * H0t + eps * sum_q X_q. eps is chosen so that the
/// largest |<phi_l|K|phi_n> / (phi_l - phi_n)| equals coupling_ratio.
SpectralModel demo_model(std::size_t qubits, double coupling_ratio = kDemoCouplingRatio,
                         double diagonal_scale = 0.3);

}  // namespace incoherent
