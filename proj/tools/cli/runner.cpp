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

#include "runner.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include "incoherent/incoherent.h"

namespace incoherent::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kUnitEigenvalueTol = 1e-9;
constexpr double kConjugatePairTol = 1e-9;
// Below this the ground truth counts as symmetric and the sign is not checked.
constexpr double kSkewSignFloor = 0.05;

// ---- C API plumbing ---------------------------------------------------------

class NumericalError : public std::runtime_error {
 public:
  NumericalError(inc_status status, const std::string& what)
      : std::runtime_error(what), status_(status) {}
  inc_status status() const { return status_; }

 private:
  inc_status status_;
};

void check(inc_status status, const char* stage) {
  if (status == INC_OK) return;
  throw NumericalError(status, std::string(stage) + ": " + inc_status_name(status) + ": " +
                                   inc_last_error());
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};

using Matrix = std::unique_ptr<inc_matrix, Deleter<inc_matrix, inc_matrix_free>>;
using Superop = std::unique_ptr<inc_superop, Deleter<inc_superop, inc_superop_free>>;
using Profile = std::unique_ptr<inc_profile, Deleter<inc_profile, inc_profile_free>>;
using QptReport = std::unique_ptr<inc_qpt_report, Deleter<inc_qpt_report, inc_qpt_report_free>>;
using Pairing = std::unique_ptr<inc_pairing, Deleter<inc_pairing, inc_pairing_free>>;
using Samples = std::unique_ptr<inc_samples, Deleter<inc_samples, inc_samples_free>>;
using Recovery = std::unique_ptr<inc_recovery, Deleter<inc_recovery, inc_recovery_free>>;

// Calls an inc_* constructor whose last argument is the output handle.
template <class Handle, class F, class... Args>
Handle make(const char* stage, F f, Args... args) {
  typename Handle::pointer raw = nullptr;
  check(f(args..., &raw), stage);
  return Handle(raw);
}

Matrix pauli_matrix(const std::string& expr) {
  return make<Matrix>("pauli", inc_matrix_from_pauli, expr.c_str());
}

std::vector<std::complex<double>> superop_eigenvalues(const inc_superop* s) {
  const size_t n = inc_superop_dim(s) * inc_superop_dim(s);
  std::vector<double> buf(2 * n);
  check(inc_superop_eigenvalues(s, buf.data()), "eigenvalues");
  std::vector<std::complex<double>> out(n);
  for (size_t i = 0; i < n; ++i) out[i] = {buf[2 * i], buf[2 * i + 1]};
  return out;
}

json matrix_json(const inc_matrix* m) {
  const size_t rows = inc_matrix_rows(m);
  const size_t cols = inc_matrix_cols(m);
  std::vector<double> buf(2 * rows * cols);
  check(inc_matrix_get(m, buf.data()), "matrix");
  json re = json::array();
  json im = json::array();
  for (size_t i = 0; i < rows; ++i) {
    json r = json::array();
    json c = json::array();
    for (size_t j = 0; j < cols; ++j) {
      r.push_back(buf[2 * (i * cols + j)]);
      c.push_back(buf[2 * (i * cols + j) + 1]);
    }
    re.push_back(std::move(r));
    im.push_back(std::move(c));
  }
  return {{"real", re}, {"imag", im}};
}

std::pair<std::vector<double>, std::vector<double>> profile_points(const inc_profile* p) {
  const size_t n = inc_profile_size(p);
  std::vector<double> d(n), w(n);
  check(inc_profile_get(p, d.data(), w.data()), "profile");
  return {d, w};
}

struct Moments {
  double mean, std, skewness, clipped_mass;
};

Moments moments(const inc_profile* p) {
  Moments m{};
  check(inc_profile_metrics(p, &m.mean, &m.std, &m.skewness, &m.clipped_mass), "metrics");
  return m;
}

json moments_json(const Moments& m) {
  return {{"mean", m.mean}, {"std", m.std}, {"skewness", m.skewness}};
}

size_t count_unit_eigenvalues(const std::vector<std::complex<double>>& ev) {
  return static_cast<size_t>(std::count_if(ev.begin(), ev.end(), [](auto z) {
    return std::abs(z - 1.0) < kUnitEigenvalueTol;
  }));
}

// Greedy pairing of eigenvalues with positive imaginary part to unused
// conjugates.
size_t count_conjugate_pairs(const std::vector<std::complex<double>>& ev) {
  std::vector<bool> used(ev.size(), false);
  size_t pairs = 0;
  for (size_t i = 0; i < ev.size(); ++i) {
    if (used[i] || ev[i].imag() <= kConjugatePairTol) continue;
    for (size_t j = 0; j < ev.size(); ++j) {
      if (j == i || used[j]) continue;
      if (std::abs(ev[j] - std::conj(ev[i])) < kConjugatePairTol) {
        used[i] = used[j] = true;
        ++pairs;
        break;
      }
    }
  }
  return pairs;
}

// ---- output -----------------------------------------------------------------

std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Artifact {
  std::string path;
  std::string role;
  std::string content;
};

void write_atomic(const fs::path& target, const std::string& content) {
  const fs::path tmp = target.parent_path() / ("." + target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string profile_csv(const inc_profile* p) {
  const auto [d, w] = profile_points(p);
  std::string s = "delta_omega,weight\n";
  for (size_t i = 0; i < d.size(); ++i) s += fmt_double(d[i]) + "," + fmt_double(w[i]) + "\n";
  return s;
}

// ---- strict schema ------------------------------------------------------------

// Wraps a JSON object; every key read is recorded and finish() rejects the rest.
class Fields {
 public:
  Fields(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + ": expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const json& required(const std::string& key) {
    if (!has(key)) throw ConfigError(where_ + ": missing required field '" + key + "'");
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = required(key);
    if (!v.is_number()) throw ConfigError(path(key) + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(path(key) + ": must be finite");
    return x;
  }

  double number(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  double positive(const std::string& key, double fallback) {
    const double x = number(key, fallback);
    if (!(x > 0.0)) throw ConfigError(path(key) + ": must be positive");
    return x;
  }

  std::uint64_t unsigned_int(const std::string& key) {
    const json& v = required(key);
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      throw ConfigError(path(key) + ": expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::uint64_t unsigned_int(const std::string& key, std::uint64_t fallback) {
    return has(key) ? unsigned_int(key) : fallback;
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError(path(key) + ": expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key) {
    const json& v = required(key);
    if (!v.is_string()) throw ConfigError(path(key) + ": expected a string");
    return v.get<std::string>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    return has(key) ? string(key) : fallback;
  }

  std::string choice(const std::string& key, const std::string& fallback,
                     std::initializer_list<const char*> allowed) {
    std::string v = string(key, fallback);
    for (const char* a : allowed)
      if (v == a) return v;
    std::string msg = path(key) + ": '" + v + "' is not one of";
    for (const char* a : allowed) msg += std::string(" ") + a;
    throw ConfigError(msg);
  }

  const json& array(const std::string& key) {
    const json& v = required(key);
    if (!v.is_array() || v.empty()) throw ConfigError(path(key) + ": expected a nonempty array");
    return v;
  }

  std::string path(const std::string& key) const { return where_ + "." + key; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(where_ + ": unknown field '" + it.key() + "'");
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

void check_pauli(const std::string& expr, const std::string& where) {
  inc_matrix* m = nullptr;
  if (inc_matrix_from_pauli(expr.c_str(), &m) != INC_OK) {
    throw ConfigError(where + ": " + inc_last_error());
  }
  inc_matrix_free(m);
}

json normalize_model(const json& raw, const std::string& where) {
  Fields f(raw, where);
  json out;
  if (f.has("fixture")) {
    const std::string name = f.choice("fixture", "", {"demo2q", "demo3q", "demo4q"});
    out["fixture"] = name;
    out["coupling_ratio"] = f.positive("coupling_ratio", 1e-4);
  } else {
    out["h0t"] = f.string("h0t");
    out["k"] = f.string("k");
    check_pauli(out["h0t"], f.path("h0t"));
    check_pauli(out["k"], f.path("k"));
  }
  f.finish();
  return out;
}

json normalize_profile(const json& raw, const std::string& where) {
  Fields f(raw, where);
  json out;
  const std::string kind = f.choice("kind", "", {"uniform", "gaussian", "skewed", "explicit"});
  out["kind"] = kind;
  if (kind == "explicit") {
    const json& d = f.array("delta_omega");
    const json& w = f.array("weight");
    if (d.size() != w.size()) throw ConfigError(where + ": delta_omega and weight differ in length");
    for (const json* a : {&d, &w})
      for (const json& x : *a)
        if (!x.is_number()) throw ConfigError(where + ": profile entries must be numbers");
    out["delta_omega"] = d;
    out["weight"] = w;
  } else {
    out["center"] = f.number("center", 0.0);
    out["width"] = f.positive("width", 0.05);
    out["skew"] = f.number("skew", 0.0);
    out["n_points"] = f.unsigned_int("n_points", 41);
  }
  f.finish();
  return out;
}

json normalize_qpt(Fields& f) {
  json out;
  json factors = json::array();
  const json& u = f.array("u_ab");
  for (size_t i = 0; i < u.size(); ++i) {
    const std::string where = "u_ab[" + std::to_string(i) + "]";
    Fields g(u[i], where);
    const std::string gen = g.string("generator");
    check_pauli(gen, g.path("generator"));
    factors.push_back({{"generator", gen}, {"angle", g.number("angle")}});
    g.finish();
  }
  out["u_ab"] = factors;

  json scenarios = json::array();
  std::set<std::string> labels;
  const json& sc = f.array("scenarios");
  for (size_t i = 0; i < sc.size(); ++i) {
    const std::string where = "scenarios[" + std::to_string(i) + "]";
    Fields g(sc[i], where);
    json s;
    s["label"] = g.string("label");
    if (!labels.insert(s["label"]).second) throw ConfigError(where + ": duplicate label");
    s["alpha"] = g.number("alpha");
    s["beta"] = g.number("beta");
    s["gamma"] = g.number("gamma");
    s["correlated"] = g.boolean("correlated", true);
    s["cp_filter"] = g.boolean("cp_filter", false);
    g.finish();
    scenarios.push_back(std::move(s));
  }
  out["scenarios"] = scenarios;

  json tol = json::object();
  if (f.has("tolerances")) {
    Fields t(f.required("tolerances"), "tolerances");
    tol["cp"] = t.positive("cp", 1e-9);
    t.finish();
  } else {
    tol["cp"] = 1e-9;
  }
  out["tolerances"] = tol;
  return out;
}

json normalize_rud(Fields& f, bool has_seed) {
  json out;
  if (f.has("random")) {
    Fields r(f.required("random"), "random");
    const auto qubits = r.unsigned_int("qubits");
    const auto members = r.unsigned_int("members");
    if (qubits < 1 || qubits > 4) throw ConfigError("random.qubits: must be 1-4");
    if (members < 1) throw ConfigError("random.members: must be positive");
    r.finish();
    if (!has_seed) throw ConfigError("seed: required for a random ensemble");
    out["random"] = {{"qubits", qubits}, {"members", members}};
  } else {
    out["model"] = normalize_model(f.required("model"), "model");
    out["profile"] = normalize_profile(f.required("profile"), "profile");
    out["offset"] = f.number("offset", 0.0);
  }
  json tol = json::object();
  if (f.has("tolerances")) {
    Fields t(f.required("tolerances"), "tolerances");
    tol["cp"] = t.positive("cp", 1e-9);
    t.finish();
  } else {
    tol["cp"] = 1e-9;
  }
  out["tolerances"] = tol;
  return out;
}

json normalize_recover(Fields& f) {
  json out;
  out["model"] = normalize_model(f.required("model"), "model");
  out["profile"] = normalize_profile(f.required("profile"), "profile");
  out["offset"] = f.number("offset", 0.0);

  json grid = {{"min", -0.15}, {"max", 0.15}, {"bins", 61}};
  if (f.has("grid")) {
    Fields g(f.required("grid"), "grid");
    grid["min"] = g.number("min", -0.15);
    grid["max"] = g.number("max", 0.15);
    grid["bins"] = g.unsigned_int("bins", 61);
    g.finish();
  }
  if (!(grid["min"].get<double>() < grid["max"].get<double>())) {
    throw ConfigError("grid: min must be below max");
  }
  if (grid["bins"].get<std::uint64_t>() < 8) throw ConfigError("grid.bins: need at least 8");
  out["grid"] = grid;

  out["method"] = f.choice("method", "weighted_riemann", {"weighted_riemann", "least_squares"});
  if (f.has("ridge")) {
    const double r = f.number("ridge");
    if (r < 0.0) throw ConfigError("ridge: must be non-negative");
    out["ridge"] = r;
  }

  json tol = {{"match", 0.2},        {"degeneracy", 1e-6}, {"mean_bins", 1.0},
              {"std_relative", 0.3}, {"clipped_mass", 0.1}};
  if (f.has("tolerances")) {
    Fields t(f.required("tolerances"), "tolerances");
    for (auto& [key, value] : tol.items()) value = t.positive(key, value.get<double>());
    t.finish();
  }
  out["tolerances"] = tol;
  return out;
}

// ---- scenario execution -------------------------------------------------------

struct Model {
  Matrix h0t;
  Matrix k;
};

Model build_model(const json& spec) {
  Model m;
  if (spec.contains("fixture")) {
    const std::string name = spec["fixture"];
    const size_t qubits = static_cast<size_t>(name[4] - '0');
    inc_matrix* h = nullptr;
    inc_matrix* k = nullptr;
    check(inc_demo_model(qubits, spec["coupling_ratio"].get<double>(), &h, &k), "model");
    m.h0t.reset(h);
    m.k.reset(k);
  } else {
    m.h0t = pauli_matrix(spec["h0t"]);
    m.k = pauli_matrix(spec["k"]);
  }
  return m;
}

Profile build_profile(const json& spec) {
  const std::string kind = spec["kind"];
  if (kind == "explicit") {
    const auto d = spec["delta_omega"].get<std::vector<double>>();
    const auto w = spec["weight"].get<std::vector<double>>();
    return make<Profile>("profile", inc_profile_create, d.size(), d.data(), w.data());
  }
  const inc_profile_kind k = kind == "uniform"    ? INC_PROFILE_UNIFORM
                             : kind == "gaussian" ? INC_PROFILE_GAUSSIAN
                                                  : INC_PROFILE_SKEWED;
  return make<Profile>("profile", inc_profile_synthetic, k, spec["center"].get<double>(),
                       spec["width"].get<double>(), spec["skew"].get<double>(),
                       spec["n_points"].get<size_t>());
}

// The generator the channel is simulated with: h0t + offset * k.
Matrix true_generator(const Model& m, double offset) {
  return make<Matrix>("offset", inc_matrix_axpy, m.h0t.get(), offset,
                      static_cast<const inc_matrix*>(m.k.get()));
}

json channel_summary(const inc_superop* s, double cp_tol) {
  double unital = 0.0, trace = 0.0;
  check(inc_superop_unitality(s, &unital, &trace), "unitality");
  int cp = 0;
  double min_eig = 0.0;
  check(inc_superop_is_cp(s, cp_tol, &cp, &min_eig), "cp check");
  const auto ev = superop_eigenvalues(s);
  double max_modulus = 0.0;
  for (auto z : ev) max_modulus = std::max(max_modulus, std::abs(z));
  json out = {
      {"dim", inc_superop_dim(s)},
      {"unitality_error", unital},
      {"trace_preservation_error", trace},
      {"completely_positive", cp != 0},
      {"min_choi_eigenvalue", min_eig},
      {"cp_tolerance", cp_tol},
      {"max_eigenvalue_modulus", max_modulus},
      {"unit_eigenvalues", {{"count", count_unit_eigenvalues(ev)}, {"tolerance", kUnitEigenvalueTol}}},
      {"conjugate_pairs", {{"count", count_conjugate_pairs(ev)}, {"tolerance", kConjugatePairTol}}},
  };
  if (cp != 0) {
    size_t kraus = 0;
    check(inc_superop_kraus_count(s, -1.0, &kraus), "kraus");
    out["kraus_count"] = kraus;
  } else {
    out["kraus_count"] = nullptr;
  }
  return out;
}

std::string eigenvalues_csv(const inc_superop* s) {
  std::string out = "real,imag,modulus\n";
  for (auto z : superop_eigenvalues(s)) {
    out += fmt_double(z.real()) + "," + fmt_double(z.imag()) + "," + fmt_double(std::abs(z)) + "\n";
  }
  return out;
}

std::vector<Artifact> run_qpt(const json& cfg) {
  Matrix u;
  for (const json& factor : cfg["u_ab"]) {
    Matrix g = pauli_matrix(factor["generator"]);
    if (inc_matrix_rows(g.get()) != 4) {
      throw NumericalError(INC_ERR_DIMENSION, "u_ab: generators must act on two qubits");
    }
    Matrix step = make<Matrix>("u_ab", inc_expm_unitary, static_cast<const inc_matrix*>(g.get()),
                               factor["angle"].get<double>());
    u = u ? make<Matrix>("u_ab", inc_matrix_multiply, static_cast<const inc_matrix*>(step.get()),
                         static_cast<const inc_matrix*>(u.get()))
          : std::move(step);
  }
  const double cp_tol = cfg["tolerances"]["cp"];

  json rows = json::array();
  std::string table = "label,alpha,beta,gamma,correlated,cp_filter,completely_positive,kraus_count\n";
  for (const json& sc : cfg["scenarios"]) {
    QptReport r = make<QptReport>("qpt", inc_qpt_run, static_cast<const inc_matrix*>(u.get()),
                                  sc["alpha"].get<double>(), sc["beta"].get<double>(),
                                  sc["gamma"].get<double>(), sc["correlated"].get<bool>() ? 1 : 0,
                                  sc["cp_filter"].get<bool>() ? 1 : 0, cp_tol);
    Superop s = make<Superop>("qpt", inc_qpt_superop, static_cast<const inc_qpt_report*>(r.get()));
    Matrix sm = make<Matrix>("qpt", inc_superop_matrix, static_cast<const inc_superop*>(s.get()));
    std::array<double, 4> choi{};
    check(inc_qpt_choi_eigenvalues(r.get(), choi.data()), "qpt");
    size_t kraus = 0;
    const bool has_kraus = inc_qpt_kraus_count(r.get(), &kraus) != 0;
    double removed = 0.0;
    const bool filtered = inc_qpt_removed_weight(r.get(), &removed) != 0;
    const bool cp = inc_qpt_is_cp(r.get()) != 0;

    json row = sc;
    row["superoperator"] = matrix_json(sm.get());
    row["choi_eigenvalues"] = choi;
    row["completely_positive"] = cp;
    row["min_choi_eigenvalue"] = inc_qpt_min_choi_eigenvalue(r.get());
    row["kraus_count"] = has_kraus ? json(kraus) : json(nullptr);
    row["removed_weight"] = filtered ? json(removed) : json(nullptr);
    row["condition_number"] = inc_qpt_condition_number(r.get());
    row["cp_tolerance"] = cp_tol;
    rows.push_back(std::move(row));

    table += sc["label"].get<std::string>() + "," + fmt_double(sc["alpha"]) + "," +
             fmt_double(sc["beta"]) + "," + fmt_double(sc["gamma"]) + "," +
             (sc["correlated"].get<bool>() ? "true" : "false") + "," +
             (sc["cp_filter"].get<bool>() ? "true" : "false") + "," + (cp ? "true" : "false") +
             "," + (has_kraus ? std::to_string(kraus) : std::string()) + "\n";
  }
  json report = {{"mode", "qpt_demo"}, {"u_ab", matrix_json(u.get())}, {"scenarios", rows}};
  return {{"qpt_report.json", "report", dump(report)}, {"qpt_table.csv", "table", table}};
}

std::vector<Artifact> run_rud(const json& cfg) {
  const double cp_tol = cfg["tolerances"]["cp"];
  std::vector<Artifact> out;
  Superop s;
  json report = {{"mode", "rud_build"}};
  if (cfg.contains("random")) {
    s = make<Superop>("rud", inc_superop_random_rud, cfg["random"]["qubits"].get<size_t>(),
                      cfg["random"]["members"].get<size_t>(),
                      cfg["seed"].get<std::uint64_t>());
    report["source"] = "random";
  } else {
    const Model model = build_model(cfg["model"]);
    const Profile profile = build_profile(cfg["profile"]);
    const Matrix h = true_generator(model, cfg["offset"]);
    s = make<Superop>("rud", inc_superop_rf_channel, static_cast<const inc_matrix*>(h.get()),
                      static_cast<const inc_matrix*>(model.k.get()),
                      static_cast<const inc_profile*>(profile.get()));
    report["source"] = "rf_profile";
    out.push_back({"profile.csv", "profile", profile_csv(profile.get())});
  }
  report["channel"] = channel_summary(s.get(), cp_tol);
  out.push_back({"eigenvalues.csv", "spectrum", eigenvalues_csv(s.get())});
  out.push_back({"channel_report.json", "report", dump(report)});
  return out;
}

std::vector<Artifact> run_recover(const json& cfg) {
  const json& tol = cfg["tolerances"];
  const Model model = build_model(cfg["model"]);
  const Profile truth = build_profile(cfg["profile"]);
  const double offset = cfg["offset"];
  const Matrix h = true_generator(model, offset);
  const Superop s = make<Superop>("channel", inc_superop_rf_channel,
                                  static_cast<const inc_matrix*>(h.get()),
                                  static_cast<const inc_matrix*>(model.k.get()),
                                  static_cast<const inc_profile*>(truth.get()));

  const Pairing pairing =
      make<Pairing>("pairing", inc_pair_eigenvalues, static_cast<const inc_superop*>(s.get()),
                    static_cast<const inc_matrix*>(model.h0t.get()),
                    static_cast<const inc_matrix*>(model.k.get()), tol["match"].get<double>(),
                    tol["degeneracy"].get<double>());
  json entries = json::array();
  double max_distance = 0.0;
  for (size_t i = 0; i < inc_pairing_size(pairing.get()); ++i) {
    size_t j = 0, m = 0;
    double meas[2], unpert[2], k_jm = 0.0, dist = 0.0;
    int degenerate = 0;
    check(inc_pairing_entry(pairing.get(), i, &j, &m, meas, unpert, &k_jm, &dist, &degenerate),
          "pairing");
    if (!degenerate) max_distance = std::max(max_distance, dist);
    entries.push_back({{"j", j},
                       {"m", m},
                       {"k_jm", k_jm},
                       {"lambda_measured", {meas[0], meas[1]}},
                       {"lambda_unperturbed", {unpert[0], unpert[1]}},
                       {"distance", dist},
                       {"degenerate", degenerate != 0}});
  }
  json pairing_warnings = json::array();
  for (size_t i = 0; i < inc_pairing_warning_count(pairing.get()); ++i) {
    pairing_warnings.push_back(inc_pairing_warning(pairing.get(), i));
  }
  json pairing_doc = {{"match_tolerance", tol["match"]},
                      {"degeneracy_tolerance", tol["degeneracy"]},
                      {"max_distance", max_distance},
                      {"entries", entries},
                      {"warnings", pairing_warnings}};

  const Samples samples =
      make<Samples>("samples", inc_build_samples, static_cast<const inc_pairing*>(pairing.get()));
  const size_t n = inc_samples_size(samples.get());
  std::vector<double> ks(n), fs_(2 * n);
  check(inc_samples_get(samples.get(), ks.data(), fs_.data()), "samples");
  std::string samples_csv = "k,f_real,f_imag\n";
  for (size_t i = 0; i < n; ++i) {
    samples_csv += fmt_double(ks[i]) + "," + fmt_double(fs_[2 * i]) + "," +
                   fmt_double(fs_[2 * i + 1]) + "\n";
  }

  const json& grid = cfg["grid"];
  const inc_nudft_method method = cfg["method"] == "least_squares" ? INC_NUDFT_LEAST_SQUARES
                                                                   : INC_NUDFT_WEIGHTED_RIEMANN;
  const double ridge = cfg.contains("ridge") ? cfg["ridge"].get<double>() : -1.0;
  const Recovery rec = make<Recovery>(
      "inverse transform", inc_inverse_nudft, static_cast<const inc_samples*>(samples.get()),
      grid["min"].get<double>(), grid["max"].get<double>(), grid["bins"].get<size_t>(), method,
      ridge);
  const Profile recovered =
      make<Profile>("recovery", inc_recovery_profile, static_cast<const inc_recovery*>(rec.get()));

  const Moments mt = moments(truth.get());
  const Moments mr = moments(recovered.get());
  const double bin = (grid["max"].get<double>() - grid["min"].get<double>()) /
                     static_cast<double>(grid["bins"].get<size_t>() - 1);
  const double clipped = inc_recovery_clipped_mass(rec.get());
  const double expected_mean = mt.mean + offset;
  const double mean_tol = tol["mean_bins"].get<double>() * bin;
  const double std_rel = std::abs(mr.std - mt.std) / mt.std;

  json checks = {
      {"mean",
       {{"expected", expected_mean},
        {"recovered", mr.mean},
        {"abs_error", std::abs(mr.mean - expected_mean)},
        {"tolerance", mean_tol},
        {"pass", std::abs(mr.mean - expected_mean) <= mean_tol}}},
      {"std",
       {{"expected", mt.std},
        {"recovered", mr.std},
        {"relative_error", std_rel},
        {"tolerance", tol["std_relative"]},
        {"pass", std_rel <= tol["std_relative"].get<double>()}}},
      {"skewness_sign",
       {{"expected", mt.skewness},
        {"recovered", mr.skewness},
        {"min_abs_expected", kSkewSignFloor},
        {"pass", std::abs(mt.skewness) < kSkewSignFloor
                     ? json(nullptr)
                     : json((mt.skewness > 0) == (mr.skewness > 0))}}},
      {"clipped_mass",
       {{"value", clipped},
        {"tolerance", tol["clipped_mass"]},
        {"pass", clipped < tol["clipped_mass"].get<double>()}}},
  };

  json sample_warnings = json::array();
  for (size_t i = 0; i < inc_samples_warning_count(samples.get()); ++i) {
    sample_warnings.push_back(inc_samples_warning(samples.get(), i));
  }
  json recovery_warnings = json::array();
  for (size_t i = 0; i < inc_recovery_warning_count(rec.get()); ++i) {
    recovery_warnings.push_back(inc_recovery_warning(rec.get(), i));
  }
  double cond = 0.0;
  const bool has_cond = inc_recovery_condition_number(rec.get(), &cond) != 0;

  const auto ev = superop_eigenvalues(s.get());
  json report = {
      {"mode", "recover_profile"},
      {"method", cfg["method"]},
      {"offset", offset},
      {"channel",
       {{"unit_eigenvalues",
         {{"count", count_unit_eigenvalues(ev)}, {"tolerance", kUnitEigenvalueTol}}},
        {"conjugate_pairs",
         {{"count", count_conjugate_pairs(ev)}, {"tolerance", kConjugatePairTol}}}}},
      {"samples",
       {{"count", n},
        {"window_span", inc_samples_window_span(samples.get())},
        {"resolution", inc_samples_resolution(samples.get())},
        {"conjugate_symmetry_error", inc_samples_symmetry_error(samples.get())},
        {"warnings", sample_warnings}}},
      {"grid", {{"min", grid["min"]}, {"max", grid["max"]}, {"bins", grid["bins"]}, {"bin_width", bin}}},
      {"true_moments", moments_json(mt)},
      {"recovered_moments", moments_json(mr)},
      {"imag_residual", inc_recovery_imag_residual(rec.get())},
      {"condition_number", has_cond ? json(cond) : json(nullptr)},
      {"checks", checks},
      {"warnings", recovery_warnings},
  };

  return {{"true_profile.csv", "profile", profile_csv(truth.get())},
          {"samples.csv", "samples", samples_csv},
          {"recovered_profile.csv", "profile", profile_csv(recovered.get())},
          {"pairing.json", "pairing", dump(pairing_doc)},
          {"recovery_report.json", "report", dump(report)}};
}

}  // namespace

// ---- public ---------------------------------------------------------------------

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 0xf];
  }
  return out;
}

nlohmann::json load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

nlohmann::json normalize_config(const json& raw, const RunOverrides& overrides) {
  Fields f(raw, "config");
  const std::string mode = f.choice("mode", "", {"qpt_demo", "rud_build", "recover_profile"});
  std::optional<std::uint64_t> seed;
  if (f.has("seed")) seed = f.unsigned_int("seed");
  if (overrides.seed) seed = overrides.seed;

  json out;
  if (mode == "qpt_demo") {
    out = normalize_qpt(f);
  } else if (mode == "rud_build") {
    out = normalize_rud(f, seed.has_value());
  } else {
    out = normalize_recover(f);
  }
  if (f.has("description")) out["description"] = f.string("description");
  f.finish();

  out["mode"] = mode;
  out["seed"] = seed ? json(*seed) : json(nullptr);
  if (overrides.method) {
    if (mode != "recover_profile") throw ConfigError("--method applies to recover_profile only");
    if (*overrides.method != "weighted_riemann" && *overrides.method != "least_squares") {
      throw ConfigError("--method: unknown method '" + *overrides.method + "'");
    }
    out["method"] = *overrides.method;
  }
  if (overrides.tol) {
    if (!(*overrides.tol > 0.0)) throw ConfigError("--tol: must be positive");
    out["tolerances"][mode == "recover_profile" ? "match" : "cp"] = *overrides.tol;
  }
  return out;
}

int validate(const fs::path& config, std::ostream& log) {
  try {
    const json cfg = normalize_config(load_config(config));
    log << "ok: " << cfg["mode"].get<std::string>() << "\n";
    return kSuccess;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kConfigError;
  }
}

int run(const fs::path& config, const fs::path& out_dir, const RunOverrides& overrides,
        std::ostream& log) {
  json cfg;
  try {
    cfg = normalize_config(load_config(config), overrides);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  std::vector<Artifact> artifacts;
  try {
    const std::string mode = cfg["mode"];
    if (mode == "qpt_demo") {
      artifacts = run_qpt(cfg);
    } else if (mode == "rud_build") {
      artifacts = run_rud(cfg);
    } else {
      artifacts = run_recover(cfg);
    }
  } catch (const NumericalError& e) {
    switch (e.status()) {
      case INC_ERR_PARSE:
      case INC_ERR_VALIDATION:
      case INC_ERR_INVALID_ARGUMENT:
      case INC_ERR_DIMENSION:
        log << "config error: " << e.what() << "\n";
        return kConfigError;
      default:
        log << "numerical failure: " << e.what() << "\n";
        return kNumericalError;
    }
  }

  try {
    fs::create_directories(out_dir);
    json files = json::array();
    std::sort(artifacts.begin(), artifacts.end(),
              [](const Artifact& a, const Artifact& b) { return a.path < b.path; });
    for (const Artifact& a : artifacts) {
      write_atomic(out_dir / a.path, a.content);
      files.push_back({{"path", a.path}, {"sha256", sha256_hex(a.content)}, {"role", a.role}});
    }
    const json manifest = {{"files", files},
                           {"config_hash", sha256_hex(cfg.dump())},
                           {"version", inc_version()}};
    write_atomic(out_dir / "manifest.json", dump(manifest));
    log << "wrote " << artifacts.size() + 1 << " files to " << out_dir.string() << "\n";
  } catch (const std::exception& e) {
    log << "output error: " << e.what() << "\n";
    return kConfigError;
  }
  return kSuccess;
}

}  // namespace incoherent::cli
