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

#include <complex>
#include <cstddef>
#include <string_view>

namespace bb84sdi::linalg::kernels {

using cplx = std::complex<double>;

// Inner-loop kernels behind ComplexMatrix. All matrices are row-major and
// contiguous; outputs never alias inputs.
//
//   gemm: c[n x m] = a[n x k] * b[k x m]
//   dotc: sum_i conj(x_i) * y_i
struct KernelTable {
  std::string_view name;
  void (*gemm)(std::size_t n, std::size_t k, std::size_t m, const cplx* a, const cplx* b,
               cplx* c);
  cplx (*dotc)(std::size_t n, const cplx* x, const cplx* y);
};

enum class Isa { scalar, avx2 };

const KernelTable& scalar_table();

/// The AVX2+FMA table, or nullptr when the build has no x86 SIMD variant.
const KernelTable* avx2_table();

/// True when the AVX2 table is compiled in and the running CPU supports it.
bool avx2_available();

/// Table used by ComplexMatrix. Chosen once at first use: AVX2 when
/// available, unless the environment variable BB84SDI_KERNELS=scalar.
const KernelTable& active();

/// Overrides the runtime choice (tests and benchmarks). Returns false and
/// leaves the selection unchanged if the ISA is unavailable.
bool select(Isa isa);

}  // namespace bb84sdi::linalg::kernels
