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
#include <cstddef>
#include <cstdint>
#include <random>

#include "bb84sdi/linalg/matrix.hpp"
#include "bb84sdi/linalg/operators.hpp"

namespace bb84sdi::linalg {

/// The one random source of the project: std::mt19937_64 seeded with a
/// splitmix64-scrambled 64-bit seed. Streams are reproducible for a given
/// build (std::normal_distribution is implementation-defined across
/// standard libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  double uniform();  // [0, 1)
  double normal();   // standard normal
  cplx complex_normal();  // E|z|^2 = 1
  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// splitmix64 finaliser; used to derive per-sample seeds from (seed, index).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

/// dim x cols matrix of i.i.d. complex Gaussians.
ComplexMatrix sample_ginibre_matrix(Rng& rng, std::size_t rows, std::size_t cols);

/// G G^dagger / Tr(G G^dagger) for a dim x rank Ginibre G.
DensityOperator sample_ginibre_state(Rng& rng, std::size_t dim, std::size_t rank);
DensityOperator sample_ginibre_state(std::uint64_t seed, std::size_t dim, std::size_t rank);

/// Gram-Schmidt orthonormalisation of a Ginibre matrix. Gram-Schmidt yields
/// an R factor with a positive real diagonal, which is the phase fixing
/// needed for Haar measure.
ComplexMatrix sample_haar_unitary(Rng& rng, std::size_t dim);
ComplexMatrix sample_haar_unitary(std::uint64_t seed, std::size_t dim);

/// Two-outcome POVM {U diag(mu) U^dagger, I - U diag(mu) U^dagger} with
/// mu_i ~ U[0, 1] and U Haar.
std::array<HermitianOperator, 2> sample_povm(Rng& rng, std::size_t dim);
std::array<HermitianOperator, 2> sample_qubit_povm(std::uint64_t seed);

/// Haar-random unit vector.
std::vector<cplx> sample_pure_state(Rng& rng, std::size_t dim);

}  // namespace bb84sdi::linalg
