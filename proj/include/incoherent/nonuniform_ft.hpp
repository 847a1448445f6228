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

// Inverse Fourier transform of the characteristic function sampled at
// unequally spaced K values, back onto a uniform deviation grid.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "incoherent/channels.hpp"
#include "incoherent/spectral.hpp"

namespace incoherent {

/// n_bins equally spaced nodes from delta_omega_min to delta_omega_max inclusive.
struct RecoveryGrid {
  double delta_omega_min = -0.15;
  double delta_omega_max = 0.15;
  std::size_t n_bins = 61;

  /// Throws InvalidArgument unless min < max and n_bins >= 8.
  void validate() const;
  double bin_width() const;
  std::vector<double> nodes() const;
};

enum class NudftMethod { weighted_riemann, least_squares };

struct NudftOptions {
  NudftMethod method = NudftMethod::weighted_riemann;
  /// Ridge weight for least_squares; defaults to 1e-6 * n_samples.
  std::optional<double> ridge;
  double max_condition = 1e12;
  double symmetry_tol = 1e-6;
};

struct RecoveryResult {
  RFProfile profile;                 // clipped and renormalized
  std::vector<double> raw_weights;   // before clipping, scaled to unit sum
  double imag_residual = 0.0;        // ||Im p|| / ||Re p|| before clipping
  double clipped_mass = 0.0;         // fraction of absolute weight removed
  double symmetry_error = 0.0;       // conjugate_symmetry_error of the input
  std::optional<double> condition_number;  // least_squares only
  std::vector<std::string> warnings;
};

/// f(k) = sum_b p_b exp(-i k dw_b). f(0) is exactly 1.
std::vector<Complex> forward_nudft(const RFProfile& profile, std::span<const double> ks);

/// weighted_riemann: p(dw) = Re sum_s w_s f_s exp(i k_s dw) with half-gap
/// (Voronoi) weights on the sorted k axis.
/// least_squares: argmin_p sum_s |sum_b p_b exp(-i k_s dw_b) - f_s|^2 + mu |p|^2.
/// Throws InvalidArgument for fewer than 5 samples and IllConditioned when the
/// least-squares normal matrix condition exceeds max_condition.
RecoveryResult inverse_nudft(const SpectralSampleSet& samples, const RecoveryGrid& grid,
                             const NudftOptions& options = {});

}  // namespace incoherent
