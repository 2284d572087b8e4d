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
#include "bb84sdi/linalg/operators.hpp"

namespace bb84sdi::linalg {

// Subsystem convention, repo-wide: the first tensor factor is the most
// significant index. For A (x) B (x) E the flat index is (a * dB + b) * dE + e.

/// Kronecker product a (x) b.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);
/// Kronecker product of two kets.
std::vector<cplx> tensor_product(std::span<const cplx> a, std::span<const cplx> b);

/// Traces out every subsystem not listed in `keep`. `keep` is a set of
/// subsystem indices into `dims`; its order does not matter, kept systems
/// stay in their original order.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep);

/// Tr_discarded |ket><bra| without forming the full outer product.
ComplexMatrix partial_trace_outer(std::span<const cplx> ket, std::span<const cplx> bra,
                                  std::span<const std::size_t> dims,
                                  std::span<const std::size_t> keep);

/// Cyclic complex Jacobi. H = V diag(values) V^dagger, values descending.
Eigensystem hermitian_eig(const HermitianOperator& h);

/// Eigenvalues below kSqrtFloor * (largest eigenvalue) are rounding noise
/// around a true zero and are mapped to 0 before the square root, which
/// would otherwise inflate 1e-17 to 3e-9.
inline constexpr double kSqrtFloor = 1e-14;

/// Principal square root of a PSD operator.
HermitianOperator psd_sqrt(const DensityOperator& rho);

/// Sum of singular values. The right singular vectors come from the
/// eigendecomposition of M^dagger M; each singular value is then taken as
/// ||M v_j||, which keeps small singular values accurate to roundoff.
double trace_norm(const ComplexMatrix& m);

/// Closed form sqrt(T + 2 sqrt(D)) with T = sum |m_ij|^2 and
/// sqrt(D) = |m00 m11 - m01 m10|. Throws unless m is 2x2.
double trace_norm_2x2(const ComplexMatrix& m);

/// F(rho, sigma) = || sqrt(rho) sqrt(sigma) ||_1 (no square on the outside;
/// defined for unnormalised states).
double fidelity(const DensityOperator& rho, const DensityOperator& sigma);

/// |Psi> = sum_i sqrt(lambda_i) |v_i> (x) |i> on the dim x dim space
/// (system first, ancilla second).
PureStateVector purify(const DensityOperator& rho);

}  // namespace bb84sdi::linalg
