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

#include <array>

#include "bb84sdi/linalg/operators.hpp"

namespace bb84sdi::entropy {

/// Eigenvalues (or probabilities) below this contribute exactly zero.
inline constexpr double kEntropyFloor = 1e-12;

/// h(x) = -x log2 x - (1 - x) log2 (1 - x). Accepts x within 1e-12 of [0, 1].
double binary_entropy(double x);

/// phi(x) = h((1 + x) / 2). Accepts |x| <= 1 + 1e-12 (clamped to [-1, 1]).
double phi(double x);

/// P(ab|uv) for one setting pair, indexed probs[a][b].
struct JointTable {
  std::array<std::array<double, 2>, 2> probs{};

  /// Validates entries >= 0 and sum 1 +- 1e-9.
  void validate() const;
  double alice_marginal(int a) const { return probs[a][0] + probs[a][1]; }
  double bob_marginal(int b) const { return probs[0][b] + probs[1][b]; }
};

/// H(A|B) = H(AB) - H(B) in bits.
double shannon_conditional(const JointTable& table);

/// S(rho) = -Tr rho log2 rho evaluated on the eigenvalues as given, with no
/// renormalisation of unnormalised inputs.
double von_neumann(const linalg::DensityOperator& rho);

/// Eve's conditional states for Alice's key bit: rho0 = rho^0_E, rho1 = rho^1_E.
class CqStatePair {
 public:
  /// Validates equal dimensions and Tr rho0 + Tr rho1 = 1 +- 1e-9.
  CqStatePair(linalg::DensityOperator rho0, linalg::DensityOperator rho1);

  const linalg::DensityOperator& rho0() const { return rho0_; }
  const linalg::DensityOperator& rho1() const { return rho1_; }
  /// Tr rho0 - Tr rho1, i.e. A_z.
  double bias() const { return rho0_.trace() - rho1_.trace(); }

 private:
  linalg::DensityOperator rho0_;
  linalg::DensityOperator rho1_;
};

/// H(A|E) = S(rho0) + S(rho1) - S(rho0 + rho1) on the classical-quantum state.
double conditional_HAE(const CqStatePair& pair);

/// r = H(A|E) - H(A|B). Unclamped. `zz` must be the key-setting table whose
/// Alice marginal matches the pair's traces within 1e-6.
double devetak_winter(const CqStatePair& pair, const JointTable& zz);

}  // namespace bb84sdi::entropy
