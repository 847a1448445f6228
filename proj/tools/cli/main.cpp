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

#include <CLI11.hpp>

#include <iostream>

#include "runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"incoherent: channel tomography and RF-profile recovery"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  incoherent::cli::RunOverrides overrides;
  std::string method;
  double tol = 0.0;
  std::uint64_t seed = 0;

  auto* run = app.add_subcommand("run", "Run a scenario and write artifacts");
  run->add_option("--config", config, "Scenario config (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  auto* method_opt = run->add_option("--method", method, "Inverse transform method")
                         ->check(CLI::IsMember({"weighted_riemann", "least_squares"}));
  auto* tol_opt = run->add_option("--tol", tol, "Primary tolerance override");
  auto* seed_opt = run->add_option("--seed", seed, "Seed override");

  auto* validate = app.add_subcommand("validate", "Check a config without running it");
  validate->add_option("--config", config, "Scenario config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : incoherent::cli::kConfigError;
  }

  if (*validate) return incoherent::cli::validate(config, std::cerr);

  if (*method_opt) overrides.method = method;
  if (*tol_opt) overrides.tol = tol;
  if (*seed_opt) overrides.seed = seed;
  return incoherent::cli::run(config, out_dir, overrides, std::cerr);
}
