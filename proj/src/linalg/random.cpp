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

#include "bb84sdi/linalg/random.hpp"

#include <cmath>

#include "bb84sdi/error.hpp"

namespace bb84sdi::linalg {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) : engine_(mix_seed(seed, 0)) {}

double Rng::uniform() { return uniform_(engine_); }

double Rng::normal() { return normal_(engine_); }

cplx Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * M_SQRT1_2, im * M_SQRT1_2};
}

ComplexMatrix sample_ginibre_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  ComplexMatrix g(rows, cols);
  for (cplx& z : g.entries()) z = rng.complex_normal();
  return g;
}

DensityOperator sample_ginibre_state(Rng& rng, std::size_t dim, std::size_t rank) {
  if (rank == 0) throw ValidationError("sample_ginibre_state: rank must be positive");
  if (rank > dim) throw ValidationError("sample_ginibre_state: rank exceeds dimension");
  const ComplexMatrix g = sample_ginibre_matrix(rng, dim, rank);
  ComplexMatrix rho = g * g.adjoint();
  rho *= cplx(1.0 / rho.trace().real());
  return DensityOperator(rho);
}

DensityOperator sample_ginibre_state(std::uint64_t seed, std::size_t dim, std::size_t rank) {
  Rng rng(seed);
  return sample_ginibre_state(rng, dim, rank);
}

ComplexMatrix sample_haar_unitary(Rng& rng, std::size_t dim) {
  ComplexMatrix q = sample_ginibre_matrix(rng, dim, dim);
  // modified Gram-Schmidt with one re-orthogonalisation pass
  for (std::size_t c = 0; c < dim; ++c) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t prev = 0; prev < c; ++prev) {
        cplx proj = 0.0;
        for (std::size_t r = 0; r < dim; ++r) proj += std::conj(q(r, prev)) * q(r, c);
        for (std::size_t r = 0; r < dim; ++r) q(r, c) -= proj * q(r, prev);
      }
    }
    double norm = 0.0;
    for (std::size_t r = 0; r < dim; ++r) norm += std::norm(q(r, c));
    norm = std::sqrt(norm);
    for (std::size_t r = 0; r < dim; ++r) q(r, c) /= norm;
  }
  return q;
}

ComplexMatrix sample_haar_unitary(std::uint64_t seed, std::size_t dim) {
  Rng rng(seed);
  return sample_haar_unitary(rng, dim);
}

std::array<HermitianOperator, 2> sample_povm(Rng& rng, std::size_t dim) {
  const ComplexMatrix u = sample_haar_unitary(rng, dim);
  std::vector<double> mu(dim);
  for (double& m : mu) m = rng.uniform();
  const ComplexMatrix e0 = u * ComplexMatrix::diagonal(mu) * u.adjoint();
  const ComplexMatrix e1 = ComplexMatrix::identity(dim) - e0;
  return {HermitianOperator(e0), HermitianOperator(e1)};
}

std::array<HermitianOperator, 2> sample_qubit_povm(std::uint64_t seed) {
  Rng rng(seed);
  return sample_povm(rng, 2);
}

std::vector<cplx> sample_pure_state(Rng& rng, std::size_t dim) {
  std::vector<cplx> v(dim);
  double norm = 0.0;
  for (cplx& z : v) {
    z = rng.complex_normal();
    norm += std::norm(z);
  }
  norm = std::sqrt(norm);
  for (cplx& z : v) z /= norm;
  return v;
}

}  // namespace bb84sdi::linalg
