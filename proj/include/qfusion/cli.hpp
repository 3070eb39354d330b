// Copyright 2026 The qfusion Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file cli.hpp
 * Experiment runner: flat key=value configuration, subcommand dispatch and
 * report/checkpoint/log emission. The logic lives in the library so tests
 * can drive it in-process; the binary is a thin main().
 *
 * Exit codes: 0 success, 1 usage error (bad flags, unknown subcommand,
 * invalid configuration), 2 runtime error. Every emitted artifact carries
 * the FNV-1a hash of the effective configuration.
 */

#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qfusion::cli {

/// Configuration or invocation mistakes; mapped to exit code 1.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Flat, validated key=value store. Unknown keys are rejected on insert.
class RunConfig {
  public:
    void set(const std::string &key, const std::string &value);

    bool has(const std::string &key) const;
    std::string get_string(const std::string &key,
                           const std::string &fallback) const;
    std::int64_t get_int(const std::string &key, std::int64_t fallback) const;
    std::uint64_t get_uint(const std::string &key,
                           std::uint64_t fallback) const;
    double get_double(const std::string &key, double fallback) const;
    std::vector<int> get_int_list(const std::string &key,
                                  const std::string &fallback) const;
    std::vector<double> get_double_list(const std::string &key,
                                        const std::string &fallback) const;
    std::vector<std::string> get_string_list(const std::string &key,
                                             const std::string &fallback) const;

    const std::map<std::string, std::string> &values() const {
        return values_;
    }

  private:
    std::map<std::string, std::string> values_;
};

/// Every accepted configuration key (the documented schema).
const std::vector<std::string> &known_keys();

/// Parses `key = value` lines; '#' starts a comment, blank lines skipped.
RunConfig parse_config_text(const std::string &text);
RunConfig load_config(const std::string &path);

/// FNV-1a 64 over the sorted effective key=value pairs.
std::uint64_t config_hash(const RunConfig &config);
std::string config_hash_hex(const RunConfig &config);

/**
 * Runs one subcommand: train, pqc-metrics, noise-sweep, drem-train,
 * zne-eval, synth-data or evaluate. Returns 0; throws ConfigError for
 * invalid configuration and other exceptions for runtime failures.
 */
int run(const std::string &subcommand, const RunConfig &config);

/// Full argv entry point; catches everything and maps to exit codes.
int main_entry(int argc, const char *const *argv);

} // namespace qfusion::cli
