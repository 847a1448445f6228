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

// Batch front-end: parses a scenario config, runs it through the C API and
// writes CSV/JSON artifacts plus a manifest into an output directory.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace incoherent::cli {

enum ExitCode : int { kSuccess = 0, kConfigError = 1, kNumericalError = 2 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunOverrides {
  std::optional<std::string> method;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
};

/// Applies overrides, checks the schema strictly and returns the effective
/// config. Throws ConfigError.
nlohmann::json normalize_config(const nlohmann::json& raw, const RunOverrides& overrides = {});

nlohmann::json load_config(const std::filesystem::path& path);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

int run(const std::filesystem::path& config, const std::filesystem::path& out_dir,
        const RunOverrides& overrides, std::ostream& log);

int validate(const std::filesystem::path& config, std::ostream& log);

}  // namespace incoherent::cli
