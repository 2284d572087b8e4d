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

#include "bb84sdi/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bb84sdi/error.hpp"

namespace bb84sdi::entropy {
namespace {

// -x log2 x with the 0 log 0 = 0 convention
double eta(double x) { return x <= kEntropyFloor ? 0.0 : -x * std::log2(x); }

}  // namespace

double binary_entropy(double x) {
  if (!(x >= -1e-12 && x <= 1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "binary_entropy: argument " << x << " outside [0, 1]";
    throw ValidationError(msg.str());
  }
  x = std::clamp(x, 0.0, 1.0);
  return eta(x) + eta(1.0 - x);
}

double phi(double x) {
  if (!(std::abs(x) <= 1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "phi: argument " << x << " outside [-1, 1]";
    throw ValidationError(msg.str());
  }
  x = std::clamp(x, -1.0, 1.0);
  // 1 - (1+x)/2 log2(1+x) - (1-x)/2 log2(1-x), written to stay exact at |x| = 1
  const double up = 1.0 + x;
  const double down = 1.0 - x;
  const double t_up = up <= 0.0 ? 0.0 : 0.5 * up * std::log2(up);
  const double t_down = down <= 0.0 ? 0.0 : 0.5 * down * std::log2(down);
  return std::max(0.0, 1.0 - t_up - t_down);
}

void JointTable::validate() const {
  double sum = 0.0;
  for (const auto& row : probs)
    for (double p : row) {
      if (!std::isfinite(p) || p < 0.0) {
        std::ostringstream msg;
        msg << "JointTable: invalid probability " << p;
        throw ValidationError(msg.str());
      }
      sum += p;
    }
  if (std::abs(sum - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "JointTable: probabilities sum to " << sum;
    throw ValidationError(msg.str());
  }
}

double shannon_conditional(const JointTable& table) {
  table.validate();
  double joint = 0.0;
  for (const auto& row : table.probs)
    for (double p : row) joint += eta(p);
  const double bob = eta(table.bob_marginal(0)) + eta(table.bob_marginal(1));
  return std::max(0.0, joint - bob);
}

double von_neumann(const linalg::DensityOperator& rho) {
  double s = 0.0;
  for (double v : rho.eigensystem().values) s += eta(v);
  return s;
}

CqStatePair::CqStatePair(linalg::DensityOperator rho0, linalg::DensityOperator rho1)
    : rho0_(std::move(rho0)), rho1_(std::move(rho1)) {
  if (rho0_.dim() != rho1_.dim())
    throw ValidationError("CqStatePair: conditional states have different dimensions");
  const double total = rho0_.trace() + rho1_.trace();
  if (std::abs(total - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "CqStatePair: traces sum to " << total << ", expected 1";
    throw ValidationError(msg.str());
  }
}

double conditional_HAE(const CqStatePair& pair) {
  const linalg::DensityOperator sum(pair.rho0().matrix() + pair.rho1().matrix());
  return von_neumann(pair.rho0()) + von_neumann(pair.rho1()) - von_neumann(sum);
}

double devetak_winter(const CqStatePair& pair, const JointTable& zz) {
  zz.validate();
  const double mismatch = std::abs(zz.alice_marginal(0) - pair.rho0().trace());
  if (mismatch > 1e-6) {
    std::ostringstream msg;
    msg << "devetak_winter: z,z table gives P_A(0|z) = " << zz.alice_marginal(0)
        << " but Tr rho0_E = " << pair.rho0().trace();
    throw ValidationError(msg.str());
  }
  return conditional_HAE(pair) - shannon_conditional(zz);
}

}  // namespace bb84sdi::entropy
