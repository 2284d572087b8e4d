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

#include <optional>
#include <string_view>

#include "bb84sdi/entropy.hpp"
#include "bb84sdi/model.hpp"

namespace bb84sdi::certify {

using model::CorrelationSummary;

/// improved: phi(A_z) - phi(sqrt(A_z^2 + G)) - H(A|B)
/// simplified: 1 - phi(sqrt(G)) - H(A|B)
/// with G = lambda^2 (E_xx^2 - E_zx^2).
enum class Variant { improved, simplified };

/// How H(A|B) is charged: phi(E_zz) (error-rate bound) or the exact
/// Shannon conditional entropy of the z,z table.
enum class HabMode { phi_bound, exact };

std::string_view to_string(Variant v);
std::string_view to_string(HabMode m);
Variant parse_variant(std::string_view s);
HabMode parse_hab_mode(std::string_view s);

struct CertifyOptions {
  Variant variant = Variant::improved;
  HabMode hab_mode = HabMode::phi_bound;
  /// Required when hab_mode == exact.
  std::optional<entropy::JointTable> zz_table;
};

struct RateCertificate {
  double raw_rate = 0.0;  // may be negative
  double rate = 0.0;      // max(raw_rate, 0)
  double lambda = 0.0;
  bool precondition_ok = false;  // |E_xx| > |B_x|
  bool condition_ok = false;     // main correlation condition at lambda = 1
  Variant variant = Variant::improved;
  HabMode hab_mode = HabMode::phi_bound;
  CorrelationSummary inputs;
};

/// 1 - h(delta_x) - h(delta_z), unclamped.
double shor_preskill(double delta_x, double delta_z);

/// 1 - phi(sqrt(E_xx^2 - E_zx^2)) - phi(E_zz) for rank-one projective Alice
/// measurements. Throws when |E_xx| < |E_zx|.
double projective_rate(const CorrelationSummary& s);

struct ConditionFlags {
  bool precondition_ok = false;
  bool condition_ok = false;
};

/// Slack applied to the condition inequality.
inline constexpr double kConditionTolerance = 1e-12;

/// precondition: |E_xx| > |B_x| (strict).
/// condition: E_xx^2 + E_zx^2 <= 1 - 2|A_z - E_zx B_x| + A_z^2.
ConditionFlags condition_check(const CorrelationSummary& s);

/// g(t) = 1 - 2|A_z - t E_zx B_x| + A_z^2 - t (E_xx^2 + E_zx^2), the
/// residual whose largest root in [0, 1] is lambda^2.
double lambda_residual(const CorrelationSummary& s, double t);

/// lambda in [0, 1]: 1 if the condition holds, otherwise sqrt of the largest
/// root of lambda_residual on [0, 1], solved piece by piece. Throws when the
/// precondition fails.
double solve_lambda(const CorrelationSummary& s);

/// Top-level entry point. Total on valid summaries: a failed precondition or
/// a negative bound gives rate 0, never an exception.
RateCertificate certified_rate(const CorrelationSummary& s, const CertifyOptions& opts = {});

}  // namespace bb84sdi::certify
