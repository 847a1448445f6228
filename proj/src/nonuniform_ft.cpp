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

#include "incoherent/nonuniform_ft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "incoherent/errors.hpp"

namespace incoherent {

void RecoveryGrid::validate() const {
  if (!(delta_omega_min < delta_omega_max)) {
    throw InvalidArgument("recovery grid needs min < max");
  }
  if (n_bins < 8) throw InvalidArgument("recovery grid needs at least 8 bins");
}

double RecoveryGrid::bin_width() const {
  return (delta_omega_max - delta_omega_min) / static_cast<double>(n_bins - 1);
}

std::vector<double> RecoveryGrid::nodes() const {
  validate();
  std::vector<double> out(n_bins);
  const double h = bin_width();
  for (std::size_t b = 0; b < n_bins; ++b) out[b] = delta_omega_min + h * static_cast<double>(b);
  out.back() = delta_omega_max;
  return out;
}

std::vector<Complex> forward_nudft(const RFProfile& profile, std::span<const double> ks) {
  std::vector<Complex> out;
  out.reserve(ks.size());
  for (double k : ks) {
    if (k == 0.0) {
      out.emplace_back(1.0, 0.0);
      continue;
    }
    Complex acc(0.0, 0.0);
    for (const auto& p : profile.points()) acc += p.weight * std::polar(1.0, -k * p.delta_omega);
    out.push_back(acc);
  }
  return out;
}

namespace {

std::vector<double> voronoi_weights(const std::vector<SpectralSample>& s) {
  const std::size_t n = s.size();
  std::vector<double> w(n);
  w.front() = 0.5 * (s[1].k - s[0].k);
  w.back() = 0.5 * (s[n - 1].k - s[n - 2].k);
  for (std::size_t i = 1; i + 1 < n; ++i) w[i] = 0.5 * (s[i + 1].k - s[i - 1].k);
  return w;
}

ComplexVector riemann(const std::vector<SpectralSample>& s, const std::vector<double>& nodes) {
  const std::vector<double> w = voronoi_weights(s);
  ComplexVector p(static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t b = 0; b < nodes.size(); ++b) {
    Complex acc(0.0, 0.0);
    for (std::size_t i = 0; i < s.size(); ++i) {
      acc += w[i] * s[i].f * std::polar(1.0, s[i].k * nodes[b]);
    }
    p(static_cast<Eigen::Index>(b)) = acc;
  }
  return p;
}

ComplexVector ridge_least_squares(const std::vector<SpectralSample>& s,
                                  const std::vector<double>& nodes, double mu,
                                  double max_condition, double& condition) {
  const auto ns = static_cast<Eigen::Index>(s.size());
  const auto nb = static_cast<Eigen::Index>(nodes.size());
  ComplexMatrix a(ns, nb);
  ComplexVector f(ns);
  for (Eigen::Index i = 0; i < ns; ++i) {
    f(i) = s[static_cast<std::size_t>(i)].f;
    for (Eigen::Index b = 0; b < nb; ++b) {
      a(i, b) = std::polar(1.0, -s[static_cast<std::size_t>(i)].k * nodes[static_cast<std::size_t>(b)]);
    }
  }
  ComplexMatrix normal = a.adjoint() * a;
  normal.diagonal().array() += mu;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(normal, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(condition <= max_condition)) {
    std::ostringstream os;
    os << "least-squares normal matrix condition " << condition << " exceeds "
       << max_condition << "; increase the ridge weight or coarsen the grid";
    throw IllConditioned(os.str(), condition);
  }
  return normal.ldlt().solve(a.adjoint() * f);
}

}  // namespace

RecoveryResult inverse_nudft(const SpectralSampleSet& samples, const RecoveryGrid& grid,
                             const NudftOptions& options) {
  const auto& s = samples.samples;
  if (s.size() < 5) {
    std::ostringstream os;
    os << "inverse_nudft needs at least 5 samples, got " << s.size();
    throw InvalidArgument(os.str());
  }
  if (!std::is_sorted(s.begin(), s.end(),
                      [](const SpectralSample& a, const SpectralSample& b) { return a.k < b.k; })) {
    throw InvalidArgument("inverse_nudft: samples must be sorted by k");
  }
  const std::vector<double> nodes = grid.nodes();

  std::vector<std::string> warnings;
  const double sym = conjugate_symmetry_error(s);
  if (!(sym <= options.symmetry_tol)) {
    std::ostringstream os;
    os << "samples are not conjugate symmetric (error " << sym << " > "
       << options.symmetry_tol << ")";
    warnings.push_back(os.str());
  }

  std::optional<double> condition;
  ComplexVector p;
  if (options.method == NudftMethod::weighted_riemann) {
    p = riemann(s, nodes);
  } else {
    const double mu = options.ridge.value_or(1e-6 * static_cast<double>(s.size()));
    double c = 0.0;
    p = ridge_least_squares(s, nodes, mu, options.max_condition, c);
    condition = c;
  }

  const Eigen::VectorXd re = p.real();
  const double re_norm = re.norm();
  const double imag_residual =
      re_norm > 0.0 ? p.imag().norm() / re_norm : std::numeric_limits<double>::infinity();

  double positive = 0.0;
  double negative = 0.0;
  double total = 0.0;
  for (Eigen::Index b = 0; b < re.size(); ++b) {
    (re(b) > 0.0 ? positive : negative) += std::abs(re(b));
    total += re(b);
  }
  if (!(positive > 0.0)) {
    throw ValidationError("inverse_nudft: recovered profile has no positive mass");
  }
  std::vector<double> raw(nodes.size());
  std::vector<double> clipped(nodes.size());
  for (std::size_t b = 0; b < nodes.size(); ++b) {
    const double v = re(static_cast<Eigen::Index>(b));
    raw[b] = total != 0.0 ? v / total : v;
    clipped[b] = std::max(v, 0.0);
  }

  return RecoveryResult{RFProfile::normalized(nodes, clipped),
                        std::move(raw),
                        imag_residual,
                        negative / (positive + negative),
                        sym,
                        condition,
                        std::move(warnings)};
}

}  // namespace incoherent
