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

#include "incoherent/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <tuple>
#include <utility>

#include "incoherent/errors.hpp"
#include "incoherent/pauli.hpp"

namespace incoherent {

namespace {

std::vector<double> diagonal_expectations(const EigenBasis& basis, const Hamiltonian& k) {
  const ComplexMatrix& v = basis.vectors;
  std::vector<double> out(basis.phis.size());
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    out[static_cast<std::size_t>(j)] = (v.col(j).adjoint() * k.matrix() * v.col(j))(0, 0).real();
  }
  return out;
}

Complex unit_phase(double angle) { return std::polar(1.0, angle); }

}  // namespace

EigenBasis eigen_basis(const Hamiltonian& h0t, double degeneracy_tol) {
  const auto pairs = eig_hermitian(h0t.matrix(), 1e-12);
  EigenBasis basis;
  basis.vectors.resize(static_cast<Eigen::Index>(pairs.size()),
                       static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    basis.phis.push_back(pairs[j].value);
    basis.vectors.col(static_cast<Eigen::Index>(j)) = pairs[j].vector;
    if (j > 0 && basis.phis[j - 1] - basis.phis[j] <= degeneracy_tol) {
      std::ostringstream os;
      os << "unperturbed eigenphases " << basis.phis[j - 1] << " and " << basis.phis[j]
         << " are closer than " << degeneracy_tol
         << "; first-order pairing needs a non-degenerate spectrum";
      throw ValidationError(os.str());
    }
  }
  return basis;
}

std::vector<PredictedEigenvalue> predict_eigenvalues(const Hamiltonian& h0t,
                                                     const Hamiltonian& k,
                                                     const RFProfile& profile,
                                                     double degeneracy_tol) {
  if (h0t.dim() != k.dim()) throw DimensionError("predict_eigenvalues: H0t and K differ in dimension");
  const EigenBasis basis = eigen_basis(h0t, degeneracy_tol);
  const std::vector<double> kd = diagonal_expectations(basis, k);
  const std::size_t n = basis.phis.size();
  std::vector<PredictedEigenvalue> out;
  out.reserve(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t m = 0; m < n; ++m) {
      const double kjm = kd[j] - kd[m];
      Complex avg(0.0, 0.0);
      for (const auto& p : profile.points()) avg += p.weight * unit_phase(-kjm * p.delta_omega);
      out.push_back({j, m, kjm, unit_phase(-(basis.phis[j] - basis.phis[m])) * avg});
    }
  }
  return out;
}

EigenPairing pair_eigenvalues(const Superoperator& s, const Hamiltonian& h0t,
                              const Hamiltonian& k, const PairingOptions& options) {
  if (s.dim() != h0t.dim() || k.dim() != h0t.dim()) {
    throw DimensionError("pair_eigenvalues: superoperator, H0t and K dimensions differ");
  }
  const EigenBasis basis = eigen_basis(h0t, options.degeneracy_tol);
  const std::vector<double> kd = diagonal_expectations(basis, k);
  const std::vector<Complex> measured = eigenvalues(s.matrix());
  const std::size_t n = basis.phis.size();

  EigenPairing pairing;
  pairing.dim = n;
  std::vector<bool> used(measured.size(), false);
  std::size_t good = 0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t m = 0; m < n; ++m) {
      const ComplexVector phi_j = basis.vectors.col(static_cast<Eigen::Index>(j));
      const ComplexVector phi_m = basis.vectors.col(static_cast<Eigen::Index>(m));
      // columnize(|phi_j><phi_m|) = conj(phi_m) kron phi_j
      const ComplexVector v = kron(phi_m.conjugate(), phi_j);
      const Complex seed = (v.adjoint() * s.matrix() * v)(0, 0);

      std::size_t best = measured.size();
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < measured.size(); ++i) {
        if (used[i]) continue;
        const double d = std::abs(measured[i] - seed);
        if (d < best_d) {
          best_d = d;
          best = i;
        }
      }
      used[best] = true;

      PairingEntry e{j, m, seed, measured[best],
                     unit_phase(-(basis.phis[j] - basis.phis[m])), kd[j] - kd[m], best_d, j == m};
      if (best_d > options.match_tol) {
        std::ostringstream os;
        os << "pair (" << j << "," << m << ") matched at distance " << best_d
           << " > match_tol " << options.match_tol;
        pairing.warnings.push_back(os.str());
      } else if (!e.degenerate) {
        ++good;
      }
      pairing.entries.push_back(e);
    }
  }
  if (n > 1 && good == 0) {
    throw ConvergenceError("pair_eigenvalues: no eigenvalue matched within match_tol",
                           options.match_tol);
  }
  return pairing;
}

double SpectralSampleSet::window_span() const {
  if (samples.empty()) return 0.0;
  return samples.back().k - samples.front().k;
}

double SpectralSampleSet::resolution_estimate() const {
  const double span = window_span();
  return span > 0.0 ? 2.0 * std::numbers::pi / span : std::numeric_limits<double>::infinity();
}

SpectralSampleSet build_samples(const EigenPairing& pairing, const SampleOptions& options) {
  if (pairing.entries.empty()) throw InvalidArgument("build_samples: empty pairing");

  std::vector<SpectralSample> raw;
  double kmax = 0.0;
  for (const auto& e : pairing.entries) {
    if (e.degenerate) continue;
    raw.push_back({e.k_jm, e.lambda_measured * std::conj(e.lambda_unperturbed)});
    kmax = std::max(kmax, std::abs(e.k_jm));
  }
  const double scale = std::max(1.0, kmax);
  const double tol = options.duplicate_tol * scale;
  if (raw.empty() || kmax <= tol) {
    throw InvalidArgument(
        "build_samples: every K_jm vanishes; the perturbation model has no diagonal "
        "spread in the H0 eigenbasis and carries no profile information");
  }

  SpectralSampleSet out;
  std::sort(raw.begin(), raw.end(), [](const SpectralSample& a, const SpectralSample& b) {
    return std::make_tuple(a.k, a.f.real(), a.f.imag()) <
           std::make_tuple(b.k, b.f.real(), b.f.imag());
  });

  std::size_t dropped_dc = 0;
  for (std::size_t i = 0; i < raw.size();) {
    std::size_t end = i + 1;
    while (end < raw.size() && raw[end].k - raw[end - 1].k <= tol) ++end;
    double ksum = 0.0;
    Complex fsum(0.0, 0.0);
    double spread = 0.0;
    for (std::size_t r = i; r < end; ++r) {
      ksum += raw[r].k;
      fsum += raw[r].f;
      spread = std::max(spread, std::abs(raw[r].f - raw[i].f));
    }
    const double count = static_cast<double>(end - i);
    const SpectralSample merged{ksum / count, fsum / count};
    if (spread > options.disagreement_tol) {
      std::ostringstream os;
      os << "duplicate K_jm = " << merged.k << " samples disagree by " << spread;
      out.warnings.push_back(os.str());
    }
    if (std::abs(merged.k) <= tol) {
      dropped_dc += end - i;
    } else {
      out.samples.push_back(merged);
    }
    i = end;
  }
  if (dropped_dc > 0) {
    std::ostringstream os;
    os << dropped_dc << " non-degenerate pair(s) with K_jm = 0 folded into the DC sample";
    out.warnings.push_back(os.str());
  }

  const auto pos = std::lower_bound(
      out.samples.begin(), out.samples.end(), 0.0,
      [](const SpectralSample& s, double k) { return s.k < k; });
  out.samples.insert(pos, SpectralSample{0.0, Complex(1.0, 0.0)});
  return out;
}

double conjugate_symmetry_error(const std::vector<SpectralSample>& samples, double k_tol) {
  double kmax = 0.0;
  for (const auto& s : samples) kmax = std::max(kmax, std::abs(s.k));
  const double tol = k_tol * std::max(1.0, kmax);
  double worst = 0.0;
  for (const auto& s : samples) {
    const auto it = std::lower_bound(
        samples.begin(), samples.end(), -s.k - tol,
        [](const SpectralSample& a, double k) { return a.k < k; });
    if (it == samples.end() || std::abs(it->k + s.k) > tol) {
      return std::numeric_limits<double>::infinity();
    }
    worst = std::max(worst, std::abs(it->f - std::conj(s.f)));
  }
  return worst;
}

ProfileMoments profile_metrics(std::span<const double> deltas, std::span<const double> weights) {
  if (deltas.size() != weights.size() || deltas.empty()) {
    throw DimensionError("profile_metrics: deltas and weights must be nonempty and equal in length");
  }
  double positive = 0.0;
  double negative = 0.0;
  for (double w : weights) (w > 0.0 ? positive : negative) += std::abs(w);
  if (!(positive > 0.0)) throw ValidationError("profile_metrics: no positive mass after clipping");

  double mean = 0.0;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (weights[i] > 0.0) mean += weights[i] * deltas[i];
  }
  mean /= positive;
  double m2 = 0.0;
  double m3 = 0.0;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    const double d = deltas[i] - mean;
    m2 += weights[i] * d * d;
    m3 += weights[i] * d * d * d;
  }
  m2 /= positive;
  m3 /= positive;
  const double sd = std::sqrt(m2);
  const double skew = sd > 0.0 ? m3 / (sd * sd * sd) : 0.0;
  return {mean, sd, skew, negative / (positive + negative)};
}

ProfileMoments profile_metrics(const RFProfile& profile) {
  std::vector<double> x;
  std::vector<double> w;
  for (const auto& p : profile.points()) {
    x.push_back(p.delta_omega);
    w.push_back(p.weight);
  }
  return profile_metrics(x, w);
}

double detect_offset(const RFProfile& recovered) { return profile_metrics(recovered).mean; }

// ---------------------------------------------------------------------------

namespace {

struct ZTerm {
  const char* word;
  double weight;
};

const std::vector<ZTerm>& demo_terms(std::size_t qubits) {
  static const std::vector<ZTerm> two = {{"ZI", 67.7}, {"IZ", 105.7}, {"ZZ", 10.3}};
  static const std::vector<ZTerm> three = {
      {"ZII", 67.7}, {"IZI", 105.7}, {"IIZ", 150.3}, {"ZZI", 10.3},
      {"IZZ", 17.7}, {"ZIZ", 7.3},   {"ZZZ", 4.1}};
  static const std::vector<ZTerm> four = {
      {"ZIII", 67.7}, {"IZII", 105.7}, {"IIZI", 150.3}, {"IIIZ", 128.9},
      {"ZZII", 10.3}, {"IZZI", 17.7},  {"ZIZI", 7.3},   {"ZIIZ", 5.93},
      {"IZIZ", 13.17}, {"IIZZ", 8.41}, {"ZZZI", 4.1},   {"IZZZ", 3.37},
      {"ZIZZ", 2.23}, {"ZZIZ", 1.91},  {"ZZZZ", 1.29}};
  switch (qubits) {
    case 2: return two;
    case 3: return three;
    case 4: return four;
    default: throw InvalidArgument("demo_model supports 2, 3 or 4 qubits");
  }
}

}  // namespace

SpectralModel demo_model(std::size_t qubits, double coupling_ratio, double diagonal_scale) {
  if (!(coupling_ratio >= 0.0)) throw InvalidArgument("demo_model: coupling_ratio must be >= 0");
  const auto& terms = demo_terms(qubits);
  const auto dim = Eigen::Index{1} << qubits;
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (const auto& t : terms) h += (0.5 * t.weight) * pauli_string(t.word);

  ComplexMatrix v = ComplexMatrix::Zero(dim, dim);
  for (std::size_t q = 0; q < qubits; ++q) {
    std::string word(qubits, 'I');
    word[q] = 'X';
    v += pauli_string(word);
  }
  // H0t is diagonal, so its eigenbasis is the computational basis.
  double worst = 0.0;
  for (Eigen::Index l = 0; l < dim; ++l)
    for (Eigen::Index n = 0; n < dim; ++n)
      if (l != n && std::abs(v(l, n)) > 0.0) {
        worst = std::max(worst, std::abs(v(l, n)) / std::abs(h(l, l).real() - h(n, n).real()));
      }
  const double eps = coupling_ratio / worst;
  return {Hamiltonian(h), Hamiltonian(diagonal_scale * h + eps * v)};
}

}  // namespace incoherent
