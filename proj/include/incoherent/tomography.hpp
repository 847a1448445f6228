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

// Simulated process tomography of one qubit (A) that starts out correlated
// with a one-qubit environment (B). Joint states are ordered A kron B.

#include <array>
#include <optional>
#include <vector>

#include "incoherent/liouville.hpp"

namespace incoherent {

struct CorrelationParams {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

/// The four joint inputs
///   rho_AB^1 = (I + beta I.Z) / 4
///   rho_AB^k = (I + alpha s.I + beta I.Z + gamma s.Z) / 4,  s = X, Y, Z
/// and their reductions onto A.
struct CorrelatedInputSet {
  CorrelationParams params;
  std::vector<DensityMatrix> joint_states;
  std::vector<DensityMatrix> reduced_inputs;
};

struct QptReport {
  Superoperator s_obs;
  std::vector<double> choi_eigenvalues;  // descending
  bool is_cp = false;
  double min_choi_eigenvalue = 0.0;
  std::optional<std::size_t> kraus_count;  // present iff is_cp
  std::optional<double> removed_weight;    // present iff the CP filter ran
  double condition_number = 0.0;
};

struct QptOptions {
  double cp_tol = kDefaultCpTolerance;
  std::optional<double> rank_tol;  // defaults to the relative Kraus cutoff
  double max_condition = 1e8;
};

/// Throws ValidationError naming the first joint state that is not PSD.
CorrelatedInputSet prepare_correlated_inputs(double alpha, double beta, double gamma);

/// Traces out the second qubit of a two-qubit state.
DensityMatrix partial_trace_b(const DensityMatrix& rho_ab);

/// Tr_B(U rho_AB U^dagger).
DensityMatrix evolve_and_reduce(const ComplexMatrix& u_ab, const DensityMatrix& rho_ab);

struct QptSolution {
  Superoperator s;
  double condition_number;
};

/// S = Out * In^-1 with inputs and outputs as columns. Throws IllConditioned
/// when cond(In) exceeds max_condition.
QptSolution qpt_solve(const std::vector<LiouvilleVector>& inputs,
                      const std::vector<LiouvilleVector>& outputs,
                      double max_condition = 1e8);

/// Runs tomography with correlated inputs, or with each joint input replaced
/// by rho_A kron rho_B when `correlated` is false, then reports CP diagnostics.
QptReport run_qpt_scenario(const ComplexMatrix& u_ab, const CorrelationParams& params,
                           bool correlated, bool apply_cp_filter,
                           const QptOptions& options = {});

/// Kraus operators M_{mu nu} = sqrt(p_nu) <mu|U_AB|nu> for an uncorrelated
/// environment rho_B = sum_nu p_nu |nu><nu|.
KrausSet environment_kraus(const ComplexMatrix& u_ab, const DensityMatrix& rho_b);

}  // namespace incoherent
