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

#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "incoherent/errors.hpp"
#include "incoherent/pauli.hpp"
#include "incoherent/spectral.hpp"
#include "oracles.hpp"

using namespace incoherent;

namespace {

RFProfile skewed_profile() {
  return make_synthetic_profile(ProfileKind::skewed, {0.0, 0.11, 0.27}, 41);
}

// max |lambda_pred - lambda_exact| over off-diagonal (j, m), using the pairing
// to locate the exact eigenvalue.
double max_prediction_error(const Hamiltonian& h0t, const Hamiltonian& k, const RFProfile& p) {
  const Superoperator s = rf_incoherent_channel(h0t, k, p);
  const EigenPairing pairing = pair_eigenvalues(s, h0t, k);
  const auto pred = predict_eigenvalues(h0t, k, p);
  double worst = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const PairingEntry& e = pairing.entries[i];
    REQUIRE(e.j == pred[i].j);
    REQUIRE(e.m == pred[i].m);
    if (e.degenerate) continue;
    worst = std::max(worst, std::abs(pred[i].lambda - e.lambda_measured));
  }
  return worst;
}

Hamiltonian halved(const Hamiltonian& k) { return Hamiltonian(0.5 * k.matrix()); }

std::size_t count_near_one(const std::vector<Complex>& ev, double tol) {
  return static_cast<std::size_t>(
      std::count_if(ev.begin(), ev.end(), [&](Complex z) { return std::abs(z - 1.0) < tol; }));
}

std::size_t count_conjugate_pairs(const std::vector<Complex>& ev, double tol) {
  std::vector<bool> used(ev.size(), false);
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    if (used[i] || ev[i].imag() <= tol) continue;
    for (std::size_t j = 0; j < ev.size(); ++j) {
      if (!used[j] && j != i && std::abs(ev[j] - std::conj(ev[i])) < tol) {
        used[i] = used[j] = true;
        ++pairs;
        break;
      }
    }
  }
  return pairs;
}

}  // namespace

TEST_CASE("demo models have distinct eigenphases and distinct K_jm") {
  for (std::size_t q : {2u, 3u, 4u}) {
    CAPTURE(q);
    const SpectralModel model = demo_model(q);
    const std::size_t n = std::size_t{1} << q;
    const EigenBasis basis = eigen_basis(model.h0t);
    REQUIRE(basis.phis.size() == n);
    // K_jm from the diagonal of K in the (diagonal) H0t eigenbasis.
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(model.h0t.matrix());
    const ComplexMatrix kd = es.eigenvectors().adjoint() * model.k.matrix() * es.eigenvectors();
    std::vector<double> diffs;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t m = 0; m < n; ++m)
        if (j != m) diffs.push_back(kd(j, j).real() - kd(m, m).real());
    std::sort(diffs.begin(), diffs.end());
    double min_gap = INFINITY;
    for (std::size_t i = 1; i < diffs.size(); ++i) min_gap = std::min(min_gap, diffs[i] - diffs[i - 1]);
    CHECK(min_gap > 1e-3);
  }
  CHECK_THROWS_AS(demo_model(5), InvalidArgument);
}

TEST_CASE("predictions are exact when H0t and K commute") {
  const Hamiltonian h0t(parse_pauli_sum("33.8 * ZII + 52.9 * IZI + 75.1 * IIZ + 5.2 * ZZI + 2.05 * ZZZ"));
  const Hamiltonian k(parse_pauli_sum("0.3 * ZII + 1.7 * IIZ + 0.45 * IZZ"));
  const RFProfile p = skewed_profile();
  CHECK(max_prediction_error(h0t, k, p) < 1e-10);

  // Diagonal matrices: phases and K_jm read straight off the diagonals.
  const auto pred = predict_eigenvalues(h0t, k, p);
  std::vector<double> x, w;
  for (const auto& pt : p.points()) {
    x.push_back(pt.delta_omega);
    w.push_back(pt.weight);
  }
  const ComplexMatrix& h = h0t.matrix();
  const ComplexMatrix& km = k.matrix();
  const auto s = rf_incoherent_channel(h0t, k, p);
  const auto ev = eigenvalues(s.matrix());
  for (int j = 0; j < 8; ++j)
    for (int m = 0; m < 8; ++m) {
      const double kjm = km(j, j).real() - km(m, m).real();
      const Complex expected =
          std::exp(Complex(0, -(h(j, j).real() - h(m, m).real()))) * oracle::characteristic(x, w, kjm);
      double nearest = INFINITY;
      for (const Complex& z : ev) nearest = std::min(nearest, std::abs(z - expected));
      CHECK(nearest < 1e-10);
    }
  CHECK(pred.size() == 64);
}

TEST_CASE("3-qubit fixture spectrum") {
  const SpectralModel model = demo_model(3);
  const Superoperator s = rf_incoherent_channel(model.h0t, model.k, skewed_profile());
  const auto ev = eigenvalues(s.matrix());
  CHECK(ev.size() == 64);
  CHECK(count_near_one(ev, 1e-9) == 8);
  CHECK(count_conjugate_pairs(ev, 1e-9) == 28);

  const EigenPairing pairing = pair_eigenvalues(s, model.h0t, model.k);
  CHECK(pairing.warnings.empty());
  const SpectralSampleSet samples = build_samples(pairing);
  CHECK(samples.samples.size() == 57);
  CHECK(samples.warnings.empty());
}

TEST_CASE("4-qubit fixture yields 241 samples") {
  const SpectralModel model = demo_model(4);
  const Superoperator s = rf_incoherent_channel(model.h0t, model.k, skewed_profile());
  const auto ev = eigenvalues(s.matrix());
  CHECK(count_near_one(ev, 1e-9) == 16);
  const SpectralSampleSet samples = build_samples(pair_eigenvalues(s, model.h0t, model.k));
  CHECK(samples.samples.size() == 241);
}

TEST_CASE("2-qubit fixture yields 13 samples") {
  const SpectralModel model = demo_model(2);
  const Superoperator s = rf_incoherent_channel(model.h0t, model.k, skewed_profile());
  CHECK(build_samples(pair_eigenvalues(s, model.h0t, model.k)).samples.size() == 13);
}

TEST_CASE("first-order prediction error scales linearly with K") {
  SUBCASE("default fixture") {
    const SpectralModel model = demo_model(3);
    const double e1 = max_prediction_error(model.h0t, model.k, skewed_profile());
    const double e2 = max_prediction_error(model.h0t, halved(model.k), skewed_profile());
    CHECK(e1 < 0.05);
    CHECK(e1 / e2 >= 3.0);
    CHECK(e1 / e2 <= 5.0);
  }
  SUBCASE("strong coupling") {
    const SpectralModel model = demo_model(3, 0.1);
    const double e1 = max_prediction_error(model.h0t, model.k, skewed_profile());
    const double e2 = max_prediction_error(model.h0t, halved(model.k), skewed_profile());
    CHECK(e1 < 0.05);
    CHECK(e1 / e2 >= 3.0);
    CHECK(e1 / e2 <= 5.0);
  }
}

TEST_CASE("strong coupling lifts the unit eigenvalues") {
  // Off-diagonal K mixes the populations, so only the identity stays fixed.
  const SpectralModel model = demo_model(3, 0.1);
  const auto ev = eigenvalues(rf_incoherent_channel(model.h0t, model.k, skewed_profile()).matrix());
  CHECK(count_near_one(ev, 1e-9) < 8);
  CHECK(count_near_one(ev, 1e-2) == 8);
}

TEST_CASE("samples are conjugate symmetric with a DC point") {
  const SpectralModel model = demo_model(3);
  const Superoperator s = rf_incoherent_channel(model.h0t, model.k, skewed_profile());
  const SpectralSampleSet set = build_samples(pair_eigenvalues(s, model.h0t, model.k));
  CHECK(conjugate_symmetry_error(set.samples) < 1e-8);
  const auto dc = std::find_if(set.samples.begin(), set.samples.end(),
                               [](const SpectralSample& x) { return x.k == 0.0; });
  REQUIRE(dc != set.samples.end());
  CHECK(dc->f == Complex(1.0, 0.0));
  CHECK(std::is_sorted(set.samples.begin(), set.samples.end(),
                       [](const SpectralSample& a, const SpectralSample& b) { return a.k < b.k; }));
  CHECK(set.window_span() == doctest::Approx(set.samples.back().k - set.samples.front().k));
  CHECK(set.resolution_estimate() == doctest::Approx(2 * 3.14159265358979323846 / set.window_span()));
}

TEST_CASE("samples follow the characteristic function of the profile") {
  const SpectralModel model = demo_model(3);
  const RFProfile p = skewed_profile();
  std::vector<double> x, w;
  for (const auto& pt : p.points()) {
    x.push_back(pt.delta_omega);
    w.push_back(pt.weight);
  }
  const Superoperator s = rf_incoherent_channel(model.h0t, model.k, p);
  const SpectralSampleSet set = build_samples(pair_eigenvalues(s, model.h0t, model.k));
  double worst = 0.0;
  for (const auto& smp : set.samples) {
    worst = std::max(worst, std::abs(smp.f - oracle::characteristic(x, w, smp.k)));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("conjugate symmetry error flags a missing mirror") {
  std::vector<SpectralSample> s = {{-1.0, Complex(0.5, -0.1)}, {0.0, 1.0}, {1.0, Complex(0.5, 0.1)}};
  CHECK(conjugate_symmetry_error(s) < 1e-15);
  s[2].f = Complex(0.5, 0.2);
  CHECK(conjugate_symmetry_error(s) == doctest::Approx(0.1));
  s.pop_back();
  CHECK(std::isinf(conjugate_symmetry_error(s)));
}

TEST_CASE("degenerate H0t is rejected") {
  const Hamiltonian h0t(parse_pauli_sum("ZI + IZ"));
  const Hamiltonian k(parse_pauli_sum("0.3 * ZI"));
  CHECK_THROWS_AS(eigen_basis(h0t), ValidationError);
  CHECK_THROWS_AS(predict_eigenvalues(h0t, k, skewed_profile()), ValidationError);
}

TEST_CASE("a model without K carries no spectral data") {
  const Hamiltonian h0t(parse_pauli_sum("1.3 * ZI + 0.7 * IZ"));
  const Hamiltonian k(ComplexMatrix::Zero(4, 4));
  // With K = 0 the channel is the bare unitary whatever the profile.
  const Superoperator s = rf_incoherent_channel(h0t, k, skewed_profile());
  const EigenPairing pairing = pair_eigenvalues(s, h0t, k);
  CHECK_THROWS_AS(build_samples(pairing), InvalidArgument);
}

TEST_CASE("pairing fails loudly when nothing matches") {
  const SpectralModel model = demo_model(2);
  std::mt19937_64 rng(2);
  const Superoperator other = unitary_superoperator(oracle::random_unitary(4, rng));
  PairingOptions opts;
  opts.match_tol = 1e-6;
  CHECK_THROWS_AS(pair_eigenvalues(other, model.h0t, model.k, opts), ConvergenceError);
}

TEST_CASE("profile moments") {
  const double x[] = {-0.1, 0.0, 0.2};
  const double w[] = {0.25, 0.5, 0.25};
  const auto m = profile_metrics(x, w);
  const auto o = oracle::moments({-0.1, 0.0, 0.2}, {0.25, 0.5, 0.25});
  CHECK(m.mean == doctest::Approx(o.mean));
  CHECK(m.std == doctest::Approx(o.std));
  CHECK(m.skewness == doctest::Approx(o.skewness));
  CHECK(m.clipped_mass == 0.0);

  const double wneg[] = {-0.1, 1.0, 0.1};
  const auto c = profile_metrics(x, wneg);
  CHECK(c.clipped_mass == doctest::Approx(0.1 / 1.2));
  const double zero[] = {0.0, -1.0, 0.0};
  CHECK_THROWS_AS(profile_metrics(x, zero), ValidationError);
}

TEST_CASE("a perturbation with zero diagonal in the H0t basis is reported") {
  const Hamiltonian h0t(parse_pauli_sum("1.3 * ZI + 0.7 * IZ"));
  const Hamiltonian k(parse_pauli_sum("0.01 * XI + 0.02 * IY"));
  const Superoperator s = rf_incoherent_channel(h0t, k, skewed_profile());
  CHECK_THROWS_AS(build_samples(pair_eigenvalues(s, h0t, k)), InvalidArgument);
}

// ---- worked examples ----------------------------------------------------------

TEST_CASE("K = 0 predictions are pure phases") {
  const SpectralModel model = demo_model(3);
  const Hamiltonian zero(ComplexMatrix::Zero(8, 8));
  const EigenBasis basis = eigen_basis(model.h0t);
  for (const auto& p : predict_eigenvalues(model.h0t, zero, skewed_profile())) {
    CHECK(std::abs(p.lambda - std::exp(Complex(0, -(basis.phis[p.j] - basis.phis[p.m])))) < 1e-15);
    CHECK(p.k_jm == 0.0);
  }
}

TEST_CASE("90 degree pulse attenuation") {
  const double pi = 3.14159265358979323846;
  const Hamiltonian h(parse_pauli_sum("X") * (pi / 4));
  const RFProfile p = make_synthetic_profile(ProfileKind::uniform, {0.0, 0.1, 0.0}, 41);
  double expected = 0.0;
  for (const auto& pt : p.points()) expected += pt.weight * std::cos(pi / 2 * pt.delta_omega);
  const EigenBasis basis = eigen_basis(h);
  for (const auto& pred : predict_eigenvalues(h, h, p)) {
    if (std::abs(basis.phis[pred.j] - basis.phis[pred.m] - pi / 2) > 1e-12) continue;
    CHECK(std::abs(pred.lambda) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(std::abs(pred.k_jm - pi / 2) < 1e-14);
  }
}

TEST_CASE("a unitary channel pairs with zero distance and a flat spectrum") {
  // Channel simulated without any RF spread; analysis still uses the model K.
  const SpectralModel model = demo_model(3);
  const Superoperator s = unitary_superoperator(expm_unitary(model.h0t, 1.0));
  const EigenPairing pairing = pair_eigenvalues(s, model.h0t, model.k);
  for (const auto& e : pairing.entries) {
    CHECK(e.distance < 1e-10);
    CHECK(std::abs(e.lambda_measured - e.lambda_unperturbed) < 1e-10);
  }
  const SpectralSampleSet set = build_samples(pairing);
  CHECK(set.samples.size() == 57);
  for (const auto& smp : set.samples) CHECK(std::abs(smp.f - 1.0) < 1e-10);
}

TEST_CASE("pairing sizes and degenerate flags") {
  for (std::size_t q : {3u, 4u}) {
    const SpectralModel model = demo_model(q);
    const Superoperator s = rf_incoherent_channel(model.h0t, model.k, skewed_profile());
    const EigenPairing pairing = pair_eigenvalues(s, model.h0t, model.k);
    const std::size_t n = std::size_t{1} << q;
    CHECK(pairing.entries.size() == n * n);
    std::size_t degenerate = 0;
    for (const auto& e : pairing.entries) {
      if (!e.degenerate) continue;
      ++degenerate;
      CHECK(std::abs(e.lambda_measured - 1.0) < 1e-9);
    }
    CHECK(degenerate == n);
  }
}

TEST_CASE("fixture samples are conjugate symmetric to 1e-9") {
  const SpectralModel model = demo_model(3);
  const Superoperator s = rf_incoherent_channel(model.h0t, model.k, skewed_profile());
  CHECK(conjugate_symmetry_error(build_samples(pair_eigenvalues(s, model.h0t, model.k)).samples) < 1e-9);
}

TEST_CASE("moment examples") {
  const RFProfile g = make_synthetic_profile(ProfileKind::gaussian, {0.0, 0.04, 0.0}, 41);
  CHECK(std::abs(profile_metrics(g).skewness) < 1e-10);

  const RFProfile delta({{-0.1, 0.0}, {0.05, 1.0}, {0.1, 0.0}});
  CHECK(profile_metrics(delta).mean == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(detect_offset(delta) == doctest::Approx(0.05).epsilon(1e-15));

  const RFProfile s = skewed_profile();
  std::vector<double> x, w;
  for (const auto& pt : s.points()) {
    x.push_back(pt.delta_omega);
    w.push_back(pt.weight);
  }
  CHECK(std::abs(profile_metrics(s).skewness - oracle::moments(x, w).skewness) < 1e-12);
}
