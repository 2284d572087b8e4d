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

#include "bb84sdi/certify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "bb84sdi/error.hpp"

namespace bb84sdi::certify {

using entropy::binary_entropy;
using entropy::phi;

std::string_view to_string(Variant v) { return v == Variant::improved ? "improved" : "simplified"; }

std::string_view to_string(HabMode m) { return m == HabMode::phi_bound ? "phi_bound" : "exact"; }

Variant parse_variant(std::string_view s) {
  if (s == "improved") return Variant::improved;
  if (s == "simplified") return Variant::simplified;
  throw ValidationError("unknown variant \"" + std::string(s) + "\" (improved|simplified)");
}

HabMode parse_hab_mode(std::string_view s) {
  if (s == "phi_bound") return HabMode::phi_bound;
  if (s == "exact") return HabMode::exact;
  throw ValidationError("unknown hab_mode \"" + std::string(s) + "\" (phi_bound|exact)");
}

double shor_preskill(double delta_x, double delta_z) {
  for (double d : {delta_x, delta_z}) {
    if (!(d >= 0.0 && d <= 1.0)) {
      std::ostringstream msg;
      msg << "shor_preskill: error rate " << d << " outside [0, 1]";
      throw ValidationError(msg.str());
    }
  }
  return 1.0 - binary_entropy(delta_x) - binary_entropy(delta_z);
}

double projective_rate(const CorrelationSummary& s) {
  s.validate();
  if (std::abs(s.e_xx) < std::abs(s.e_zx)) {
    std::ostringstream msg;
    msg << "projective_rate: |E_xx| = " << std::abs(s.e_xx) << " < |E_zx| = " << std::abs(s.e_zx)
        << ", bound inapplicable";
    throw ValidationError(msg.str());
  }
  const double arg = std::sqrt(std::max(0.0, s.e_xx * s.e_xx - s.e_zx * s.e_zx));
  return 1.0 - phi(std::min(arg, 1.0)) - phi(s.e_zz);
}

ConditionFlags condition_check(const CorrelationSummary& s) {
  ConditionFlags f;
  f.precondition_ok = std::abs(s.e_xx) > std::abs(s.b_x);
  const double lhs = s.e_xx * s.e_xx + s.e_zx * s.e_zx;
  const double rhs = 1.0 - 2.0 * std::abs(s.a_z - s.e_zx * s.b_x) + s.a_z * s.a_z;
  f.condition_ok = lhs <= rhs + kConditionTolerance;
  return f;
}

double lambda_residual(const CorrelationSummary& s, double t) {
  return 1.0 - 2.0 * std::abs(s.a_z - t * s.e_zx * s.b_x) + s.a_z * s.a_z -
         t * (s.e_xx * s.e_xx + s.e_zx * s.e_zx);
}

double solve_lambda(const CorrelationSummary& s) {
  s.validate();
  const ConditionFlags flags = condition_check(s);
  if (!flags.precondition_ok) {
    std::ostringstream msg;
    msg << "solve_lambda: precondition |E_xx| > |B_x| fails (|E_xx| = " << std::abs(s.e_xx)
        << ", |B_x| = " << std::abs(s.b_x) << ")";
    throw ValidationError(msg.str());
  }
  if (flags.condition_ok) return 1.0;

  // g(t) is linear on each side of the kink t* = A_z / (E_zx B_x):
  //   A_z - t c >= 0:  g = (1 - A_z)^2 + t (2c - S)
  //   A_z - t c <  0:  g = (1 + A_z)^2 - t (2c + S)
  // with c = E_zx B_x and S = E_xx^2 + E_zx^2. g(0) = (1 - |A_z|)^2 >= 0 and
  // g(1) < 0 here, so a root exists; g is concave, so {g >= 0} is an interval
  // starting at 0 and its right end is the largest root.
  const double c = s.e_zx * s.b_x;
  const double big_s = s.e_xx * s.e_xx + s.e_zx * s.e_zx;
  const double az = s.a_z;
  std::vector<double> roots;
  auto consider = [&](double intercept, double slope, int side) {
    if (slope >= 0.0) return;  // piece never crosses zero going right
    const double t = -intercept / slope;
    if (!(t >= 0.0 && t <= 1.0)) return;
    const double inner = az - t * c;
    // side +1 requires inner >= 0, side -1 requires inner <= 0 (kink shared)
    const double slack = 1e-14 * (1.0 + std::abs(az));
    if (side > 0 && inner < -slack) return;
    if (side < 0 && inner > slack) return;
    roots.push_back(t);
  };
  consider((1.0 - az) * (1.0 - az), 2.0 * c - big_s, +1);
  consider((1.0 + az) * (1.0 + az), -(2.0 * c + big_s), -1);

  double t_root = 0.0;
  if (!roots.empty()) {
    t_root = *std::max_element(roots.begin(), roots.end());
  } else if (c != 0.0) {
    // root sits exactly on the kink
    const double kink = az / c;
    if (kink >= 0.0 && kink <= 1.0 && lambda_residual(s, kink) >= 0.0) t_root = kink;
  }
  return std::sqrt(std::clamp(t_root, 0.0, 1.0));
}

RateCertificate certified_rate(const CorrelationSummary& s, const CertifyOptions& opts) {
  s.validate();
  if (opts.hab_mode == HabMode::exact && !opts.zz_table)
    throw ValidationError("certified_rate: hab_mode exact requires the z,z probability table");

  RateCertificate cert;
  cert.variant = opts.variant;
  cert.hab_mode = opts.hab_mode;
  cert.inputs = s;
  const ConditionFlags flags = condition_check(s);
  cert.precondition_ok = flags.precondition_ok;
  cert.condition_ok = flags.condition_ok;
  if (!flags.precondition_ok) {
    cert.lambda = 0.0;
    cert.raw_rate = 0.0;
    cert.rate = 0.0;
    return cert;
  }

  cert.lambda = solve_lambda(s);
  const double hab = opts.hab_mode == HabMode::exact ? entropy::shannon_conditional(*opts.zz_table)
                                                    : phi(s.e_zz);
  const double l2 = cert.lambda * cert.lambda;
  const double g = l2 * (s.e_xx * s.e_xx - s.e_zx * s.e_zx);
  if (g <= 0.0) {
    // |lambda E_xx| <= |lambda E_zx|: nothing to certify
    cert.raw_rate = opts.variant == Variant::improved ? phi(s.a_z) - phi(std::abs(s.a_z)) - hab
                                                      : 1.0 - phi(0.0) - hab;
  } else if (opts.variant == Variant::improved) {
    const double arg = std::min(1.0, std::sqrt(s.a_z * s.a_z + g));
    cert.raw_rate = phi(s.a_z) - phi(arg) - hab;
  } else {
    cert.raw_rate = 1.0 - phi(std::min(1.0, std::sqrt(g))) - hab;
  }
  cert.rate = std::max(cert.raw_rate, 0.0);
  return cert;
}

}  // namespace bb84sdi::certify
