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
#include <span>
#include <vector>

#include "bb84sdi/linalg/matrix.hpp"

namespace bb84sdi::linalg {

/// ||M - M^dagger||_max allowed for a Hermitian operator.
inline constexpr double kHermiticityTolerance = 1e-10;
/// Eigenvalues in [-kEigenvalueClamp, 0) are roundoff and are set to zero;
/// anything more negative is a modeling error.
inline constexpr double kEigenvalueClamp = 1e-10;
/// Slack on the trace (and norm) upper bound of 1.
inline constexpr double kTraceSlack = 1e-10;

/// Eigenvalues sorted descending, eigenvectors as the matching columns of a
/// unitary matrix.
struct Eigensystem {
  std::vector<double> values;
  ComplexMatrix vectors;
};

class HermitianOperator {
 public:
  /// Validates squareness, finiteness and Hermiticity, then stores the exact
  /// Hermitian part (M + M^dagger)/2.
  explicit HermitianOperator(const ComplexMatrix& m);

  std::size_t dim() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }

 private:
  ComplexMatrix matrix_;
};

/// Positive semidefinite operator with trace in [0, 1]. Unnormalised states
/// (Eve's conditional states, mixture components) are allowed. The clamped
/// eigensystem computed during validation is kept for reuse.
class DensityOperator {
 public:
  explicit DensityOperator(const ComplexMatrix& m);
  explicit DensityOperator(const HermitianOperator& h);

  std::size_t dim() const { return hermitian_.dim(); }
  const ComplexMatrix& matrix() const { return hermitian_.matrix(); }
  const HermitianOperator& hermitian() const { return hermitian_; }
  /// Clamped eigensystem (all values >= 0).
  const Eigensystem& eigensystem() const { return eig_; }
  double trace() const { return trace_; }

 private:
  HermitianOperator hermitian_;
  Eigensystem eig_;
  double trace_ = 0.0;
};

/// State vector with norm at most 1 (subnormalised vectors allowed).
class PureStateVector {
 public:
  explicit PureStateVector(std::vector<cplx> amplitudes);

  std::size_t dim() const { return amplitudes_.size(); }
  std::span<const cplx> amplitudes() const { return amplitudes_; }
  double norm() const;
  ComplexMatrix projector() const { return ComplexMatrix::outer(amplitudes_, amplitudes_); }

 private:
  std::vector<cplx> amplitudes_;
};

}  // namespace bb84sdi::linalg
