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

#include "incoherent/tomography.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "incoherent/errors.hpp"
#include "incoherent/pauli.hpp"

namespace incoherent {

namespace {

const ComplexMatrix& id2() {
  static const ComplexMatrix m = pauli('I');
  return m;
}

DensityMatrix make_state(const ComplexMatrix& m, int index) {
  try {
    return DensityMatrix(m);
  } catch (const ValidationError& e) {
    std::ostringstream os;
    os << "joint input rho_AB^" << index << " is not physical: " << e.what();
    throw ValidationError(os.str());
  }
}

DensityMatrix partial_trace_a(const DensityMatrix& rho_ab) {
  const ComplexMatrix& m = rho_ab.matrix();
  ComplexMatrix out = ComplexMatrix::Zero(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) out(i, j) += m(2 * k + i, 2 * k + j);
  return DensityMatrix(out);
}

}  // namespace

CorrelatedInputSet prepare_correlated_inputs(double alpha, double beta, double gamma) {
  const ComplexMatrix& i2 = id2();
  const ComplexMatrix zb = kron(i2, pauli('Z'));
  const ComplexMatrix base = kron(i2, i2) + beta * zb;

  CorrelatedInputSet set;
  set.params = {alpha, beta, gamma};
  set.joint_states.push_back(make_state(base / 4.0, 1));
  const char axes[] = {'X', 'Y', 'Z'};
  for (int k = 0; k < 3; ++k) {
    const ComplexMatrix s = pauli(axes[k]);
    const ComplexMatrix m = base + alpha * kron(s, i2) + gamma * kron(s, pauli('Z'));
    set.joint_states.push_back(make_state(m / 4.0, k + 2));
  }
  for (const auto& j : set.joint_states) set.reduced_inputs.push_back(partial_trace_b(j));
  return set;
}

DensityMatrix partial_trace_b(const DensityMatrix& rho_ab) {
  const ComplexMatrix& m = rho_ab.matrix();
  if (m.rows() != 4) {
    std::ostringstream os;
    os << "partial_trace_b expects a two-qubit state, got dimension " << m.rows();
    throw DimensionError(os.str());
  }
  ComplexMatrix out = ComplexMatrix::Zero(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) out(i, j) += m(2 * i + k, 2 * j + k);
  return DensityMatrix(out);
}

DensityMatrix evolve_and_reduce(const ComplexMatrix& u_ab, const DensityMatrix& rho_ab) {
  if (u_ab.rows() != 4 || u_ab.cols() != 4) {
    throw DimensionError("evolve_and_reduce expects a 4x4 unitary");
  }
  if (!is_unitary(u_ab, 1e-10)) throw ValidationError("U_AB is not unitary");
  const ComplexMatrix out = u_ab * rho_ab.matrix() * u_ab.adjoint();
  return partial_trace_b(DensityMatrix((out + out.adjoint()) * 0.5));
}

QptSolution qpt_solve(const std::vector<LiouvilleVector>& inputs,
                      const std::vector<LiouvilleVector>& outputs,
                      double max_condition) {
  if (inputs.empty() || inputs.size() != outputs.size()) {
    throw DimensionError("qpt_solve: input and output sets must be nonempty and equal in size");
  }
  const std::size_t n = inputs.front().dim();
  const auto n2 = static_cast<Eigen::Index>(n * n);
  if (static_cast<Eigen::Index>(inputs.size()) != n2) {
    std::ostringstream os;
    os << "qpt_solve: need " << n2 << " input states, got " << inputs.size();
    throw DimensionError(os.str());
  }
  ComplexMatrix in(n2, n2);
  ComplexMatrix out(n2, n2);
  for (Eigen::Index c = 0; c < n2; ++c) {
    const auto& vi = inputs[static_cast<std::size_t>(c)];
    const auto& vo = outputs[static_cast<std::size_t>(c)];
    if (vi.dim() != n || vo.dim() != n) throw DimensionError("qpt_solve: mixed dimensions");
    in.col(c) = vi.entries();
    out.col(c) = vo.entries();
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(in);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  const double cond = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
  if (!(cond <= max_condition)) {
    std::ostringstream os;
    os << "qpt_solve: input matrix condition number " << cond << " exceeds "
       << max_condition;
    throw IllConditioned(os.str(), cond);
  }
  // S * In = Out  <=>  In^T S^T = Out^T
  ComplexMatrix s = in.transpose().partialPivLu().solve(out.transpose()).transpose();
  return {Superoperator(std::move(s)), cond};
}

QptReport run_qpt_scenario(const ComplexMatrix& u_ab, const CorrelationParams& params,
                           bool correlated, bool apply_cp_filter,
                           const QptOptions& options) {
  const CorrelatedInputSet set =
      prepare_correlated_inputs(params.alpha, params.beta, params.gamma);

  std::vector<LiouvilleVector> inputs;
  std::vector<LiouvilleVector> outputs;
  for (std::size_t i = 0; i < set.joint_states.size(); ++i) {
    const DensityMatrix& rho_a = set.reduced_inputs[i];
    DensityMatrix joint = set.joint_states[i];
    if (!correlated) {
      joint = DensityMatrix(kron(rho_a.matrix(), partial_trace_a(joint).matrix()));
    }
    inputs.push_back(columnize(rho_a));
    outputs.push_back(columnize(evolve_and_reduce(u_ab, joint)));
  }
  const QptSolution solved = qpt_solve(inputs, outputs, options.max_condition);

  QptReport report{solved.s, {}, false, 0.0, std::nullopt, std::nullopt,
                   solved.condition_number};
  if (apply_cp_filter) {
    auto filtered = cp_filter(report.s_obs, options.cp_tol);
    report.s_obs = std::move(filtered.filtered);
    report.removed_weight = filtered.removed_weight;
  }
  const ChoiMatrix choi = superop_to_choi(report.s_obs);
  for (const auto& p : eig_hermitian(choi.matrix())) {
    report.choi_eigenvalues.push_back(p.value);
  }
  report.min_choi_eigenvalue = report.choi_eigenvalues.back();
  report.is_cp = report.min_choi_eigenvalue >= -options.cp_tol;
  if (report.is_cp) {
    report.kraus_count = choi_to_kraus(choi, options.rank_tol).operators.size();
  }
  return report;
}

KrausSet environment_kraus(const ComplexMatrix& u_ab, const DensityMatrix& rho_b) {
  if (u_ab.rows() != 4 || rho_b.dim() != 2) {
    throw DimensionError("environment_kraus expects a 4x4 unitary and a qubit environment");
  }
  KrausSet out;
  out.dim = 2;
  for (const auto& env : eig_hermitian(rho_b.matrix())) {
    if (env.value <= 0.0) continue;
    for (int mu = 0; mu < 2; ++mu) {
      // <mu|_B U_AB |nu>_B as an operator on A.
      ComplexMatrix m = ComplexMatrix::Zero(2, 2);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int nu = 0; nu < 2; ++nu) m(a, b) += u_ab(2 * a + mu, 2 * b + nu) * env.vector(nu);
      out.operators.push_back(std::sqrt(env.value) * m);
    }
  }
  return out;
}

}  // namespace incoherent
