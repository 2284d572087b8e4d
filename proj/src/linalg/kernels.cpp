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

#include "bb84sdi/linalg/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string_view>

namespace bb84sdi::linalg::kernels {

#ifndef BB84SDI_HAVE_AVX2
const KernelTable* avx2_table() { return nullptr; }
#endif

bool avx2_available() {
#if defined(BB84SDI_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

namespace {

const KernelTable* initial_choice() {
  if (const char* env = std::getenv("BB84SDI_KERNELS")) {
    if (std::string_view(env) == "scalar") return &scalar_table();
  }
  return avx2_available() ? avx2_table() : &scalar_table();
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> current{initial_choice()};
  return current;
}

}  // namespace

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

bool select(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      slot().store(&scalar_table(), std::memory_order_release);
      return true;
    case Isa::avx2:
      if (!avx2_available()) return false;
      slot().store(avx2_table(), std::memory_order_release);
      return true;
  }
  return false;
}

}  // namespace bb84sdi::linalg::kernels
