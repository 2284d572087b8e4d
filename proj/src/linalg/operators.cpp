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

#include "bb84sdi/linalg/operators.hpp"

#include <cmath>
#include <sstream>

#include "bb84sdi/error.hpp"
#include "bb84sdi/linalg/ops.hpp"

namespace bb84sdi::linalg {

HermitianOperator::HermitianOperator(const ComplexMatrix& m) {
  if (!m.is_square()) throw ValidationError("HermitianOperator: matrix is not square");
  if (!m.all_finite()) throw ValidationError("HermitianOperator: non-finite entry");
  const ComplexMatrix adj = m.adjoint();
  const double asym = (m - adj).max_abs();
  if (asym > kHermiticityTolerance) {
    std::ostringstream msg;
    msg << "HermitianOperator: ||M - M^dagger||_max = " << asym << " exceeds "
        << kHermiticityTolerance;
    throw ValidationError(msg.str());
  }
  matrix_ = (m + adj) * 0.5;
}

DensityOperator::DensityOperator(const ComplexMatrix& m) : DensityOperator(HermitianOperator(m)) {}

DensityOperator::DensityOperator(const HermitianOperator& h)
    : hermitian_(h), eig_(hermitian_eig(h)) {
  for (double& v : eig_.values) {
    if (v < -kEigenvalueClamp) {
      std::ostringstream msg;
      msg << "DensityOperator: eigenvalue " << v << " below -" << kEigenvalueClamp
          << " (not positive semidefinite)";
      throw ValidationError(msg.str());
    }
    if (v < 0.0) v = 0.0;
  }
  trace_ = h.matrix().trace().real();
  if (trace_ > 1.0 + kTraceSlack) {
    std::ostringstream msg;
    msg << "DensityOperator: trace " << trace_ << " exceeds 1";
    throw ValidationError(msg.str());
  }
  if (trace_ < 0.0) trace_ = 0.0;
}

PureStateVector::PureStateVector(std::vector<cplx> amplitudes) : amplitudes_(std::move(amplitudes)) {
  for (const cplx& z : amplitudes_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw ValidationError("PureStateVector: non-finite amplitude");
  }
  if (norm() > 1.0 + kTraceSlack) throw ValidationError("PureStateVector: norm exceeds 1");
}

double PureStateVector::norm() const { return std::sqrt(inner(amplitudes_, amplitudes_).real()); }

}  // namespace bb84sdi::linalg
