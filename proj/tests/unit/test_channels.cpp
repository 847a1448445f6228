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

#include <cmath>
#include <random>

#include "incoherent/channels.hpp"
#include "incoherent/errors.hpp"
#include "incoherent/pauli.hpp"
#include "oracles.hpp"

using namespace incoherent;

namespace {

std::vector<double> deltas(const RFProfile& p) {
  std::vector<double> x;
  for (const auto& pt : p.points()) x.push_back(pt.delta_omega);
  return x;
}

std::vector<double> weights(const RFProfile& p) {
  std::vector<double> w;
  for (const auto& pt : p.points()) w.push_back(pt.weight);
  return w;
}

// Largest distance from conj(lambda) to its greedily matched partner.
double conjugate_pairing_error(std::vector<Complex> ev) {
  std::vector<bool> used(ev.size(), false);
  double worst = 0.0;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    if (std::abs(ev[i].imag()) < 1e-12) continue;
    double best = INFINITY;
    std::size_t arg = i;
    for (std::size_t j = 0; j < ev.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(ev[j] - std::conj(ev[i]));
      if (d < best) {
        best = d;
        arg = j;
      }
    }
    used[arg] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

TEST_CASE("Hamiltonian must be Hermitian") {
  CHECK_NOTHROW(Hamiltonian(parse_pauli_sum("ZZ + 0.3 XY")));
  ComplexMatrix bad = parse_pauli_sum("ZZ");
  bad(0, 1) = 1e-6;
  CHECK_THROWS_AS(Hamiltonian{bad}, ValidationError);
}

TEST_CASE("expm_unitary agrees with a Taylor series") {
  std::mt19937_64 rng(1);
  for (int n : {2, 4, 8}) {
    const ComplexMatrix a = oracle::random_matrix(n, n, rng);
    const ComplexMatrix h = 0.5 * (a + a.adjoint());
    const ComplexMatrix u = expm_unitary(Hamiltonian(h), 0.7);
    CHECK(oracle::max_abs_diff(u, oracle::expm_taylor(h, 0.7)) < 1e-11);
    CHECK(is_unitary(u, 1e-12));
  }
}

TEST_CASE("RF profile validation") {
  CHECK_NOTHROW(RFProfile({{-0.1, 0.5}, {0.1, 0.5}}));
  CHECK_THROWS_AS(RFProfile({{-0.1, 0.6}, {0.1, 0.5}}), ValidationError);
  CHECK_THROWS_AS(RFProfile({{-0.1, 1.5}, {0.1, -0.5}}), ValidationError);
  CHECK_THROWS_AS(RFProfile({{0.1, 0.5}, {-0.1, 0.5}}), ValidationError);
  const double d[] = {-0.1, 0.0, 0.1};
  const double w[] = {1.0, 2.0, 1.0};
  const RFProfile p = RFProfile::normalized(d, w);
  CHECK(p.points()[1].weight == doctest::Approx(0.5));
}

TEST_CASE("synthetic profiles") {
  SUBCASE("uniform is centered") {
    const RFProfile p = make_synthetic_profile(ProfileKind::uniform, {0.02, 0.05, 0.0}, 11);
    const auto m = oracle::moments(deltas(p), weights(p));
    CHECK(m.mean == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(deltas(p).front() == doctest::Approx(-0.03));
    CHECK(deltas(p).back() == doctest::Approx(0.07));
  }
  SUBCASE("gaussian spans three widths and is symmetric") {
    const RFProfile p = make_synthetic_profile(ProfileKind::gaussian, {0.0, 0.03, 0.0}, 41);
    const auto m = oracle::moments(deltas(p), weights(p));
    CHECK(std::abs(m.mean) < 1e-15);
    CHECK(std::abs(m.skewness) < 1e-10);
    CHECK(m.std == doctest::Approx(0.03).epsilon(0.02));
  }
  SUBCASE("skewed matches the continuous triangle") {
    const double c = 0.01, w = 0.11, s = 0.27;
    const RFProfile p = make_synthetic_profile(ProfileKind::skewed, {c, w, s}, 41);
    const auto m = oracle::moments(deltas(p), weights(p));
    const double a = c - w * (1 - s), b = c + w * (1 + s);
    const double mean = (a + b + c) / 3.0;
    const double var = (a * a + b * b + c * c - a * b - a * c - b * c) / 18.0;
    CHECK(m.mean == doctest::Approx(mean).epsilon(1e-3));
    CHECK(m.std == doctest::Approx(std::sqrt(var)).epsilon(1e-2));
    CHECK(m.skewness > 0.0);
  }
  CHECK_THROWS_AS(make_synthetic_profile(ProfileKind::skewed, {0.0, 0.1, 1.0}, 41), InvalidArgument);
  CHECK_THROWS_AS(make_synthetic_profile(ProfileKind::uniform, {0.0, 0.0, 0.0}, 41), InvalidArgument);
  CHECK_THROWS_AS(make_synthetic_profile(ProfileKind::uniform, {0.0, 0.1, 0.0}, 2), InvalidArgument);
}

TEST_CASE("unitary ensemble validation") {
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_AS(UnitaryEnsemble({}), InvalidArgument);
  CHECK_THROWS_AS(UnitaryEnsemble({{0.5, i2}, {0.4, i2}}), ValidationError);
  CHECK_THROWS_AS(UnitaryEnsemble({{1.0, 2.0 * i2}}), ValidationError);
  CHECK_THROWS_AS(UnitaryEnsemble({{0.5, i2}, {0.5, ComplexMatrix::Identity(4, 4)}}), DimensionError);
}

TEST_CASE("random-unitary channel equals the weighted conjugation map") {
  std::mt19937_64 rng(6);
  std::vector<EnsembleMember> members;
  const double p[] = {0.2, 0.3, 0.5};
  for (double w : p) members.push_back({w, oracle::random_unitary(3, rng)});
  const UnitaryEnsemble ens(members);
  const auto expected = oracle::superop_of(3, [&](const ComplexMatrix& rho) {
    ComplexMatrix out = ComplexMatrix::Zero(3, 3);
    for (const auto& m : members) out += m.weight * m.unitary * rho * m.unitary.adjoint();
    return out;
  });
  CHECK(oracle::max_abs_diff(rud_superoperator(ens).matrix(), expected) < 1e-14);
}

TEST_CASE("RF channel uses exp(-i (H0t + dw K))") {
  const Hamiltonian h0t(parse_pauli_sum("0.7 * ZI + 0.4 * IZ"));
  const Hamiltonian k(parse_pauli_sum("XI + 0.2 * ZZ"));
  const RFProfile profile({{-0.1, 0.25}, {0.05, 0.75}});
  const auto expected = oracle::superop_of(4, [&](const ComplexMatrix& rho) {
    ComplexMatrix out = ComplexMatrix::Zero(4, 4);
    for (const auto& pt : profile.points()) {
      const ComplexMatrix u =
          oracle::expm_taylor(h0t.matrix() + pt.delta_omega * k.matrix(), 1.0);
      out += pt.weight * u * rho * u.adjoint();
    }
    return out;
  });
  CHECK(oracle::max_abs_diff(rf_incoherent_channel(h0t, k, profile).matrix(), expected) < 1e-12);
}

TEST_CASE("random-unitary channel properties over seeded ensembles") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t qubits = 1 + seed % 3;
    const std::size_t members = 2 + seed % 5;
    CAPTURE(seed);
    const UnitaryEnsemble ens = random_ensemble(qubits, members, seed);
    const Superoperator s = rud_superoperator(ens);
    const int n = static_cast<int>(s.dim());
    const ComplexVector id = oracle::stack_columns(ComplexMatrix::Identity(n, n));

    CHECK((s.matrix() * id - id).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((id.transpose() * s.matrix() - id.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(is_cp(s).min_eigenvalue > -1e-9);
    const auto ev = eigenvalues(s.matrix());
    CHECK(conjugate_pairing_error(ev) < 1e-8);
    for (const Complex& z : ev) CHECK(std::abs(z) <= 1.0 + 1e-10);
  }
}

TEST_CASE("random ensembles are reproducible") {
  const auto a = random_ensemble(2, 3, 99);
  const auto b = random_ensemble(2, 3, 99);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a.members()[i].weight == b.members()[i].weight);
    CHECK(a.members()[i].unitary == b.members()[i].unitary);
  }
  CHECK(random_ensemble(2, 3, 100).members()[0].unitary != a.members()[0].unitary);
}

// ---- worked examples ----------------------------------------------------------

namespace {

const double kPi = 3.14159265358979323846;

ComplexMatrix diag_of(std::initializer_list<Complex> d) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (Complex z : d) {
    m(i, i) = z;
    ++i;
  }
  return m;
}

}  // namespace

TEST_CASE("matrix exponential examples") {
  CHECK(expm_unitary(Hamiltonian(ComplexMatrix::Zero(2, 2)), 1.0) == ComplexMatrix::Identity(2, 2));

  const Complex em = std::exp(Complex(0, -kPi / 4)), ep = std::exp(Complex(0, kPi / 4));
  const double t = 2.5;
  CHECK(max_abs_diff(expm_unitary(Hamiltonian(parse_pauli_sum("ZZ") * (kPi / 4 / t)), t),
                     diag_of({em, ep, ep, em})) < 1e-15);

  ComplexMatrix pulse(2, 2);
  pulse << 1, Complex(0, -1), Complex(0, -1), 1;
  pulse /= std::sqrt(2.0);
  CHECK(max_abs_diff(expm_unitary(Hamiltonian(parse_pauli_sum("X") * (kPi / 4)), 1.0), pulse) < 1e-15);
}

TEST_CASE("random-unitary channel examples") {
  std::mt19937_64 rng(251);
  const ComplexMatrix u = oracle::random_unitary(2, rng);
  CHECK(rud_superoperator(UnitaryEnsemble({{1.0, u}})).matrix() == unitary_superoperator(u).matrix());

  const ComplexMatrix rz = expm_unitary(Hamiltonian(parse_pauli_sum("Z")), kPi / 4);
  const ComplexMatrix rz_inv = expm_unitary(Hamiltonian(parse_pauli_sum("Z")), -kPi / 4);
  CHECK(max_abs_diff(rud_superoperator(UnitaryEnsemble({{0.75, rz}, {0.25, rz_inv}})).matrix(),
                     diag_of({1.0, Complex(0, 0.5), Complex(0, -0.5), 1.0})) < 1e-15);

  CHECK(max_abs_diff(rud_superoperator(UnitaryEnsemble(
                         {{0.5, ComplexMatrix::Identity(2, 2)}, {0.5, parse_pauli_sum("Z")}}))
                         .matrix(),
                     diag_of({1.0, 0.0, 0.0, 1.0})) < 1e-15);
}

TEST_CASE("RF channel examples") {
  const Hamiltonian h0t(parse_pauli_sum("0.9 * XZ + 0.4 * IY"));
  const Hamiltonian k(parse_pauli_sum("ZZ"));
  CHECK(max_abs_diff(rf_incoherent_channel(h0t, k, RFProfile({{0.0, 1.0}})).matrix(),
                     unitary_superoperator(expm_unitary(h0t, 1.0)).matrix()) < 1e-15);

  // On-resonance 90 degree pulse: the eigenvalues of the rotation with
  // K_jm = +-pi/2 are attenuated by the real average of exp(-i (pi/2) dw).
  const Hamiltonian pulse(parse_pauli_sum("X") * (kPi / 4));
  for (double w : {0.05, 0.2}) {
    CAPTURE(w);
    const RFProfile p = make_synthetic_profile(ProfileKind::uniform, {0.0, w, 0.0}, 51);
    Complex expected = 0.0;
    for (const auto& pt : p.points()) expected += pt.weight * std::exp(Complex(0, -kPi / 2 * pt.delta_omega));
    CHECK(std::abs(expected.imag()) < 1e-15);
    CHECK(expected.real() < 1.0);
    const auto ev = eigenvalues(rf_incoherent_channel(pulse, pulse, p).matrix());
    // Eigenphases +-pi/2 carry the attenuated eigenvalues +-i * expected.
    for (Complex target : {Complex(0, 1) * expected, Complex(0, -1) * expected}) {
      double nearest = INFINITY;
      for (const Complex& z : ev) nearest = std::min(nearest, std::abs(z - target));
      CHECK(nearest < 1e-12);
    }
  }
}

TEST_CASE("synthetic profile examples") {
  const RFProfile u = make_synthetic_profile(ProfileKind::uniform, {0.0, 0.1, 0.0}, 5);
  for (const auto& pt : u.points()) {
    CHECK(pt.weight == doctest::Approx(0.2).epsilon(1e-15));
  }
  const RFProfile g = make_synthetic_profile(ProfileKind::gaussian, {0.0, 0.05, 0.0}, 61);
  double total = 0.0;
  for (const auto& pt : g.points()) total += pt.weight;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(oracle::moments(deltas(g), weights(g)).skewness) < 1e-10);
  const RFProfile s = make_synthetic_profile(ProfileKind::skewed, {0.0, 0.1, 0.4}, 41);
  CHECK(oracle::moments(deltas(s), weights(s)).skewness > 0.0);
}
