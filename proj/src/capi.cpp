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

#include "incoherent/incoherent.h"

#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "incoherent/channels.hpp"
#include "incoherent/errors.hpp"
#include "incoherent/liouville.hpp"
#include "incoherent/nonuniform_ft.hpp"
#include "incoherent/pauli.hpp"
#include "incoherent/spectral.hpp"
#include "incoherent/tomography.hpp"

using namespace incoherent;

struct inc_matrix {
  ComplexMatrix m;
};
struct inc_superop {
  Superoperator s;
};
struct inc_profile {
  RFProfile p;
};
struct inc_qpt_report {
  QptReport r;
};
struct inc_pairing {
  EigenPairing p;
};
struct inc_samples {
  SpectralSampleSet s;
};
struct inc_recovery {
  RecoveryResult r;
};

namespace {

thread_local std::string g_last_error;

inc_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::dimension: return INC_ERR_DIMENSION;
    case ErrorCode::validation: return INC_ERR_VALIDATION;
    case ErrorCode::convergence: return INC_ERR_CONVERGENCE;
    case ErrorCode::not_completely_positive: return INC_ERR_NOT_CP;
    case ErrorCode::ill_conditioned: return INC_ERR_ILL_CONDITIONED;
    case ErrorCode::invalid_argument: return INC_ERR_INVALID_ARGUMENT;
    case ErrorCode::parse: return INC_ERR_PARSE;
  }
  return INC_ERR_INTERNAL;
}

template <class F>
inc_status guard(F&& f) {
  try {
    g_last_error.clear();
    f();
    return INC_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return INC_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return INC_ERR_INTERNAL;
  }
}

template <class T>
void require(const T* p, const char* what) {
  if (p == nullptr) throw InvalidArgument(std::string(what) + " is null");
}

void write_interleaved(const Complex& z, double* out) {
  out[0] = z.real();
  out[1] = z.imag();
}

ComplexMatrix read_row_major(size_t rows, size_t cols, const double* data) {
  ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (size_t i = 0; i < rows; ++i)
    for (size_t j = 0; j < cols; ++j) {
      const double* z = data + 2 * (i * cols + j);
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = Complex(z[0], z[1]);
    }
  return m;
}

const char* warning_at(const std::vector<std::string>& w, size_t i) {
  return i < w.size() ? w[i].c_str() : nullptr;
}

}  // namespace

extern "C" {

const char* inc_version(void) { return INC_VERSION_STRING; }

const char* inc_last_error(void) { return g_last_error.c_str(); }

const char* inc_status_name(inc_status status) {
  switch (status) {
    case INC_OK: return "ok";
    case INC_ERR_DIMENSION: return "dimension";
    case INC_ERR_VALIDATION: return "validation";
    case INC_ERR_CONVERGENCE: return "convergence";
    case INC_ERR_NOT_CP: return "not_completely_positive";
    case INC_ERR_ILL_CONDITIONED: return "ill_conditioned";
    case INC_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case INC_ERR_PARSE: return "parse";
    case INC_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

// ---- matrices ---------------------------------------------------------------

inc_status inc_matrix_create(size_t rows, size_t cols, const double* interleaved,
                             inc_matrix** out) {
  return guard([&] {
    require(interleaved, "data");
    require(out, "out");
    if (rows == 0 || cols == 0) throw DimensionError("matrix must be nonempty");
    *out = new inc_matrix{read_row_major(rows, cols, interleaved)};
  });
}

inc_status inc_matrix_from_pauli(const char* expr, inc_matrix** out) {
  return guard([&] {
    require(expr, "expr");
    require(out, "out");
    *out = new inc_matrix{parse_pauli_sum(expr)};
  });
}

inc_status inc_matrix_axpy(const inc_matrix* a, double scale, const inc_matrix* b,
                           inc_matrix** out) {
  return guard([&] {
    require(a, "a");
    require(b, "b");
    require(out, "out");
    if (a->m.rows() != b->m.rows() || a->m.cols() != b->m.cols()) {
      throw DimensionError("inc_matrix_axpy: shape mismatch");
    }
    *out = new inc_matrix{a->m + scale * b->m};
  });
}

inc_status inc_matrix_multiply(const inc_matrix* a, const inc_matrix* b, inc_matrix** out) {
  return guard([&] {
    require(a, "a");
    require(b, "b");
    require(out, "out");
    if (a->m.cols() != b->m.rows()) throw DimensionError("inc_matrix_multiply: shape mismatch");
    *out = new inc_matrix{a->m * b->m};
  });
}

size_t inc_matrix_rows(const inc_matrix* m) { return m ? static_cast<size_t>(m->m.rows()) : 0; }
size_t inc_matrix_cols(const inc_matrix* m) { return m ? static_cast<size_t>(m->m.cols()) : 0; }

inc_status inc_matrix_get(const inc_matrix* m, double* interleaved) {
  return guard([&] {
    require(m, "matrix");
    require(interleaved, "out");
    const auto cols = static_cast<size_t>(m->m.cols());
    for (Eigen::Index i = 0; i < m->m.rows(); ++i)
      for (Eigen::Index j = 0; j < m->m.cols(); ++j) {
        write_interleaved(m->m(i, j),
                          interleaved + 2 * (static_cast<size_t>(i) * cols + static_cast<size_t>(j)));
      }
  });
}

inc_status inc_expm_unitary(const inc_matrix* h, double t, inc_matrix** out) {
  return guard([&] {
    require(h, "h");
    require(out, "out");
    *out = new inc_matrix{expm_unitary(Hamiltonian(h->m), t)};
  });
}

inc_status inc_random_unitary(size_t dim, uint64_t seed, inc_matrix** out) {
  return guard([&] {
    require(out, "out");
    if (dim == 0) throw InvalidArgument("dim must be positive");
    std::mt19937_64 rng(seed);
    *out = new inc_matrix{random_unitary(dim, rng)};
  });
}

void inc_matrix_free(inc_matrix* m) { delete m; }

// ---- superoperators ----------------------------------------------------------

inc_status inc_superop_from_matrix(const inc_matrix* m, inc_superop** out) {
  return guard([&] {
    require(m, "matrix");
    require(out, "out");
    *out = new inc_superop{Superoperator(m->m)};
  });
}

inc_status inc_superop_from_unitary(const inc_matrix* u, inc_superop** out) {
  return guard([&] {
    require(u, "u");
    require(out, "out");
    *out = new inc_superop{unitary_superoperator(u->m)};
  });
}

inc_status inc_superop_rud(size_t n, const double* weights, const inc_matrix* const* unitaries,
                           inc_superop** out) {
  return guard([&] {
    require(out, "out");
    if (n == 0) throw InvalidArgument("unitary ensemble is empty");
    require(weights, "weights");
    require(unitaries, "unitaries");
    std::vector<EnsembleMember> members;
    for (size_t i = 0; i < n; ++i) {
      require(unitaries[i], "unitary");
      members.push_back({weights[i], unitaries[i]->m});
    }
    *out = new inc_superop{rud_superoperator(UnitaryEnsemble(std::move(members)))};
  });
}

inc_status inc_superop_random_rud(size_t qubits, size_t members, uint64_t seed,
                                  inc_superop** out) {
  return guard([&] {
    require(out, "out");
    *out = new inc_superop{rud_superoperator(random_ensemble(qubits, members, seed))};
  });
}

inc_status inc_superop_rf_channel(const inc_matrix* h0t, const inc_matrix* k,
                                  const inc_profile* profile, inc_superop** out) {
  return guard([&] {
    require(h0t, "h0t");
    require(k, "k");
    require(profile, "profile");
    require(out, "out");
    *out = new inc_superop{rf_incoherent_channel(Hamiltonian(h0t->m), Hamiltonian(k->m), profile->p)};
  });
}

size_t inc_superop_dim(const inc_superop* s) { return s ? s->s.dim() : 0; }

inc_status inc_superop_matrix(const inc_superop* s, inc_matrix** out) {
  return guard([&] {
    require(s, "superop");
    require(out, "out");
    *out = new inc_matrix{s->s.matrix()};
  });
}

inc_status inc_superop_eigenvalues(const inc_superop* s, double* interleaved) {
  return guard([&] {
    require(s, "superop");
    require(interleaved, "out");
    const auto ev = eigenvalues(s->s.matrix());
    for (size_t i = 0; i < ev.size(); ++i) write_interleaved(ev[i], interleaved + 2 * i);
  });
}

inc_status inc_superop_choi_eigenvalues(const inc_superop* s, double* values) {
  return guard([&] {
    require(s, "superop");
    require(values, "out");
    const auto pairs = eig_hermitian(superop_to_choi(s->s).matrix());
    for (size_t i = 0; i < pairs.size(); ++i) values[i] = pairs[i].value;
  });
}

inc_status inc_superop_is_cp(const inc_superop* s, double tol, int* is_cp_out,
                             double* min_eigenvalue) {
  return guard([&] {
    require(s, "superop");
    const CpCheck c = is_cp(s->s, tol);
    if (is_cp_out) *is_cp_out = c.completely_positive ? 1 : 0;
    if (min_eigenvalue) *min_eigenvalue = c.min_eigenvalue;
  });
}

inc_status inc_superop_kraus_count(const inc_superop* s, double rank_tol, size_t* count) {
  return guard([&] {
    require(s, "superop");
    require(count, "count");
    std::optional<double> tol;
    if (rank_tol >= 0.0) tol = rank_tol;
    *count = choi_to_kraus(superop_to_choi(s->s), tol).operators.size();
  });
}

inc_status inc_superop_cp_filter(const inc_superop* s, double tol, inc_superop** out,
                                 double* removed_weight) {
  return guard([&] {
    require(s, "superop");
    require(out, "out");
    CpFilterResult r = cp_filter(s->s, tol);
    if (removed_weight) *removed_weight = r.removed_weight;
    *out = new inc_superop{std::move(r.filtered)};
  });
}

inc_status inc_superop_unitality(const inc_superop* s, double* unital_error,
                                 double* trace_error) {
  return guard([&] {
    require(s, "superop");
    const auto n = static_cast<Eigen::Index>(s->s.dim());
    const ComplexVector id = columnize(ComplexMatrix::Identity(n, n)).entries();
    if (unital_error) *unital_error = (s->s.matrix() * id - id).cwiseAbs().maxCoeff();
    if (trace_error) {
      *trace_error = (id.transpose() * s->s.matrix() - id.transpose()).cwiseAbs().maxCoeff();
    }
  });
}

void inc_superop_free(inc_superop* s) { delete s; }

// ---- profiles -----------------------------------------------------------------

inc_status inc_profile_create(size_t n, const double* deltas, const double* weights,
                              inc_profile** out) {
  return guard([&] {
    require(deltas, "deltas");
    require(weights, "weights");
    require(out, "out");
    *out = new inc_profile{RFProfile::normalized(std::span(deltas, n), std::span(weights, n))};
  });
}

inc_status inc_profile_synthetic(inc_profile_kind kind, double center, double width, double skew,
                                 size_t n_points, inc_profile** out) {
  return guard([&] {
    require(out, "out");
    ProfileKind k{};
    switch (kind) {
      case INC_PROFILE_UNIFORM: k = ProfileKind::uniform; break;
      case INC_PROFILE_GAUSSIAN: k = ProfileKind::gaussian; break;
      case INC_PROFILE_SKEWED: k = ProfileKind::skewed; break;
      default: throw InvalidArgument("unknown profile kind");
    }
    *out = new inc_profile{make_synthetic_profile(k, {center, width, skew}, n_points)};
  });
}

size_t inc_profile_size(const inc_profile* p) { return p ? p->p.size() : 0; }

inc_status inc_profile_get(const inc_profile* p, double* deltas, double* weights) {
  return guard([&] {
    require(p, "profile");
    const auto& pts = p->p.points();
    for (size_t i = 0; i < pts.size(); ++i) {
      if (deltas) deltas[i] = pts[i].delta_omega;
      if (weights) weights[i] = pts[i].weight;
    }
  });
}

inc_status inc_profile_metrics(const inc_profile* p, double* mean, double* std_out,
                               double* skewness, double* clipped_mass) {
  return guard([&] {
    require(p, "profile");
    const ProfileMoments m = profile_metrics(p->p);
    if (mean) *mean = m.mean;
    if (std_out) *std_out = m.std;
    if (skewness) *skewness = m.skewness;
    if (clipped_mass) *clipped_mass = m.clipped_mass;
  });
}

inc_status inc_forward_nudft(const inc_profile* p, size_t n, const double* ks,
                             double* interleaved) {
  return guard([&] {
    require(p, "profile");
    if (n == 0) return;
    require(ks, "ks");
    require(interleaved, "out");
    const auto f = forward_nudft(p->p, std::span(ks, n));
    for (size_t i = 0; i < n; ++i) write_interleaved(f[i], interleaved + 2 * i);
  });
}

void inc_profile_free(inc_profile* p) { delete p; }

// ---- tomography ---------------------------------------------------------------

inc_status inc_qpt_run(const inc_matrix* u_ab, double alpha, double beta, double gamma,
                       int correlated, int cp_filter_flag, double cp_tol, inc_qpt_report** out) {
  return guard([&] {
    require(u_ab, "u_ab");
    require(out, "out");
    QptOptions opts;
    if (cp_tol >= 0.0) opts.cp_tol = cp_tol;
    *out = new inc_qpt_report{run_qpt_scenario(u_ab->m, {alpha, beta, gamma}, correlated != 0,
                                               cp_filter_flag != 0, opts)};
  });
}

inc_status inc_qpt_superop(const inc_qpt_report* r, inc_superop** out) {
  return guard([&] {
    require(r, "report");
    require(out, "out");
    *out = new inc_superop{r->r.s_obs};
  });
}

inc_status inc_qpt_choi_eigenvalues(const inc_qpt_report* r, double* values) {
  return guard([&] {
    require(r, "report");
    require(values, "out");
    std::copy(r->r.choi_eigenvalues.begin(), r->r.choi_eigenvalues.end(), values);
  });
}

int inc_qpt_is_cp(const inc_qpt_report* r) { return r && r->r.is_cp ? 1 : 0; }

double inc_qpt_min_choi_eigenvalue(const inc_qpt_report* r) {
  return r ? r->r.min_choi_eigenvalue : 0.0;
}

int inc_qpt_kraus_count(const inc_qpt_report* r, size_t* count) {
  if (!r || !r->r.kraus_count) return 0;
  if (count) *count = *r->r.kraus_count;
  return 1;
}

int inc_qpt_removed_weight(const inc_qpt_report* r, double* weight) {
  if (!r || !r->r.removed_weight) return 0;
  if (weight) *weight = *r->r.removed_weight;
  return 1;
}

double inc_qpt_condition_number(const inc_qpt_report* r) {
  return r ? r->r.condition_number : 0.0;
}

void inc_qpt_report_free(inc_qpt_report* r) { delete r; }

// ---- spectral -------------------------------------------------------------------

inc_status inc_demo_model(size_t qubits, double coupling_ratio, inc_matrix** h0t,
                          inc_matrix** k) {
  return guard([&] {
    require(h0t, "h0t");
    require(k, "k");
    const SpectralModel model =
        demo_model(qubits, coupling_ratio < 0.0 ? kDemoCouplingRatio : coupling_ratio);
    auto h = std::make_unique<inc_matrix>(inc_matrix{model.h0t.matrix()});
    auto kk = std::make_unique<inc_matrix>(inc_matrix{model.k.matrix()});
    *h0t = h.release();
    *k = kk.release();
  });
}

inc_status inc_pair_eigenvalues(const inc_superop* s, const inc_matrix* h0t, const inc_matrix* k,
                                double match_tol, double degeneracy_tol, inc_pairing** out) {
  return guard([&] {
    require(s, "superop");
    require(h0t, "h0t");
    require(k, "k");
    require(out, "out");
    PairingOptions opts;
    if (match_tol > 0.0) opts.match_tol = match_tol;
    if (degeneracy_tol > 0.0) opts.degeneracy_tol = degeneracy_tol;
    *out = new inc_pairing{pair_eigenvalues(s->s, Hamiltonian(h0t->m), Hamiltonian(k->m), opts)};
  });
}

size_t inc_pairing_size(const inc_pairing* p) { return p ? p->p.entries.size() : 0; }

inc_status inc_pairing_entry(const inc_pairing* p, size_t index, size_t* j, size_t* m,
                             double* lambda_measured, double* lambda_unperturbed, double* k_jm,
                             double* distance, int* degenerate) {
  return guard([&] {
    require(p, "pairing");
    if (index >= p->p.entries.size()) throw InvalidArgument("pairing index out of range");
    const PairingEntry& e = p->p.entries[index];
    if (j) *j = e.j;
    if (m) *m = e.m;
    if (lambda_measured) write_interleaved(e.lambda_measured, lambda_measured);
    if (lambda_unperturbed) write_interleaved(e.lambda_unperturbed, lambda_unperturbed);
    if (k_jm) *k_jm = e.k_jm;
    if (distance) *distance = e.distance;
    if (degenerate) *degenerate = e.degenerate ? 1 : 0;
  });
}

size_t inc_pairing_warning_count(const inc_pairing* p) { return p ? p->p.warnings.size() : 0; }

const char* inc_pairing_warning(const inc_pairing* p, size_t index) {
  return p ? warning_at(p->p.warnings, index) : nullptr;
}

void inc_pairing_free(inc_pairing* p) { delete p; }

inc_status inc_build_samples(const inc_pairing* p, inc_samples** out) {
  return guard([&] {
    require(p, "pairing");
    require(out, "out");
    *out = new inc_samples{build_samples(p->p)};
  });
}

inc_status inc_samples_create(size_t n, const double* ks, const double* f_interleaved,
                              inc_samples** out) {
  return guard([&] {
    require(ks, "ks");
    require(f_interleaved, "f");
    require(out, "out");
    SpectralSampleSet set;
    for (size_t i = 0; i < n; ++i) {
      if (i > 0 && !(ks[i] > ks[i - 1])) {
        throw InvalidArgument("samples must be strictly increasing in k");
      }
      set.samples.push_back({ks[i], Complex(f_interleaved[2 * i], f_interleaved[2 * i + 1])});
    }
    *out = new inc_samples{std::move(set)};
  });
}

size_t inc_samples_size(const inc_samples* s) { return s ? s->s.samples.size() : 0; }

inc_status inc_samples_get(const inc_samples* s, double* ks, double* f_interleaved) {
  return guard([&] {
    require(s, "samples");
    for (size_t i = 0; i < s->s.samples.size(); ++i) {
      if (ks) ks[i] = s->s.samples[i].k;
      if (f_interleaved) write_interleaved(s->s.samples[i].f, f_interleaved + 2 * i);
    }
  });
}

double inc_samples_symmetry_error(const inc_samples* s) {
  return s ? conjugate_symmetry_error(s->s.samples) : 0.0;
}

double inc_samples_window_span(const inc_samples* s) { return s ? s->s.window_span() : 0.0; }

double inc_samples_resolution(const inc_samples* s) {
  return s ? s->s.resolution_estimate() : 0.0;
}

size_t inc_samples_warning_count(const inc_samples* s) { return s ? s->s.warnings.size() : 0; }

const char* inc_samples_warning(const inc_samples* s, size_t index) {
  return s ? warning_at(s->s.warnings, index) : nullptr;
}

void inc_samples_free(inc_samples* s) { delete s; }

inc_status inc_inverse_nudft(const inc_samples* s, double dw_min, double dw_max, size_t n_bins,
                             inc_nudft_method method, double ridge, inc_recovery** out) {
  return guard([&] {
    require(s, "samples");
    require(out, "out");
    NudftOptions opts;
    switch (method) {
      case INC_NUDFT_WEIGHTED_RIEMANN: opts.method = NudftMethod::weighted_riemann; break;
      case INC_NUDFT_LEAST_SQUARES: opts.method = NudftMethod::least_squares; break;
      default: throw InvalidArgument("unknown inverse transform method");
    }
    if (ridge >= 0.0) opts.ridge = ridge;
    *out = new inc_recovery{inverse_nudft(s->s, {dw_min, dw_max, n_bins}, opts)};
  });
}

inc_status inc_recovery_profile(const inc_recovery* r, inc_profile** out) {
  return guard([&] {
    require(r, "recovery");
    require(out, "out");
    *out = new inc_profile{r->r.profile};
  });
}

double inc_recovery_imag_residual(const inc_recovery* r) { return r ? r->r.imag_residual : 0.0; }
double inc_recovery_clipped_mass(const inc_recovery* r) { return r ? r->r.clipped_mass : 0.0; }
double inc_recovery_symmetry_error(const inc_recovery* r) {
  return r ? r->r.symmetry_error : 0.0;
}

int inc_recovery_condition_number(const inc_recovery* r, double* condition) {
  if (!r || !r->r.condition_number) return 0;
  if (condition) *condition = *r->r.condition_number;
  return 1;
}

size_t inc_recovery_warning_count(const inc_recovery* r) { return r ? r->r.warnings.size() : 0; }

const char* inc_recovery_warning(const inc_recovery* r, size_t index) {
  return r ? warning_at(r->r.warnings, index) : nullptr;
}

void inc_recovery_free(inc_recovery* r) { delete r; }

}  // extern "C"
