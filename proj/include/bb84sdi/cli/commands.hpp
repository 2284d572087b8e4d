// Copyright 2026 The bb84sdi Authors
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

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bb84sdi/certify.hpp"

// Subcommand bodies, kept separate from argument parsing so tests can drive
// them with string streams. Each returns the process exit code.
namespace bb84sdi::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitInputError = 2;

inline constexpr std::uint64_t kDefaultSeed = 20240531;
inline constexpr const char* kSeedEnv = "BB84SDI_SEED";

/// Explicit flag, else $BB84SDI_SEED, else kDefaultSeed. Writes a
/// "seed <value> (<source>)" line to `out`.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::ostream& out);

int cmd_certify(const std::string& request_path, std::ostream& out, std::ostream& err);

struct SimulateArgs {
  std::string model_path;
  certify::Variant variant = certify::Variant::improved;
  certify::HabMode hab_mode = certify::HabMode::phi_bound;
};
int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err);

struct ScanArgs {
  std::size_t n = 2000;
  std::optional<std::uint64_t> seed;
  std::vector<std::size_t> bob_dims{2, 3, 4};
  unsigned workers = 0;
  /// Local-search iterations applied to the worst sample (0 = none).
  std::size_t refine = 0;
  /// Optional per-sample CSV: seed,d_B,certified_rate,dw_rate,gap
  std::optional<std::string> csv_path;
};
int cmd_scan(const ScanArgs& args, std::ostream& out, std::ostream& err);

struct LemmasArgs {
  std::size_t n = 500;
  std::optional<std::uint64_t> seed;
};
int cmd_lemmas(const LemmasArgs& args, std::ostream& out, std::ostream& err);

struct SweepArgs {
  double from = 0.0;
  double to = 1.0;
  double step = 0.01;
  /// stdout when empty
  std::optional<std::string> out_path;
};
int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err);

}  // namespace bb84sdi::cli
