// Copyright 2026 The priormap Authors
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

#include "priormap/kernels/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string_view>

namespace priormap::kernels
{
#if defined(PRIORMAP_HAVE_AVX2)
const KernelTable * avx2_table_unchecked() noexcept;
#endif

namespace
{
std::atomic<const KernelTable *> g_override{nullptr};

const KernelTable & detect() noexcept
{
  const char * env = std::getenv("PRIORMAP_SIMD");
  if (env != nullptr && std::string_view(env) == "scalar") {
    return scalar_kernels();
  }
  if (const KernelTable * t = avx2_kernels()) {
    return *t;
  }
  return scalar_kernels();
}
}  // namespace

const KernelTable * avx2_kernels() noexcept
{
#if defined(PRIORMAP_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? avx2_table_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable & active_kernels() noexcept
{
  if (const KernelTable * t = g_override.load(std::memory_order_relaxed)) {
    return *t;
  }
  static const KernelTable & detected = detect();
  return detected;
}

void set_active_kernels(const KernelTable * table) noexcept
{
  g_override.store(table, std::memory_order_relaxed);
}
}  // namespace priormap::kernels
