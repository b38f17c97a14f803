// SPDX-License-Identifier: Apache-2.0
//
// cfmimo: link-level simulator for asynchronous cell-free mmWave MIMO-OFDM
// Copyright (C) 2026 The cfmimo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "cfmimo/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace cfmimo::kernels
{

namespace
{

struct Table
{
    cd (*cdotc)(const cd *, const cd *, std::size_t);
    double (*sum_abs2)(const cd *, std::size_t);
    void (*caxpy)(cd, const cd *, cd *, std::size_t);
};

constexpr Table kScalar{scalar::cdotc, scalar::sum_abs2, scalar::caxpy};
#if defined(__x86_64__) || defined(__i386__)
constexpr Table kAvx2{avx2::cdotc, avx2::sum_abs2, avx2::caxpy};
#endif
#if defined(__aarch64__)
constexpr Table kNeon{neon::cdotc, neon::sum_abs2, neon::caxpy};
#endif

bool available(Isa isa)
{
    switch (isa)
    {
    case Isa::Scalar:
        return true;
    case Isa::Avx2:
#if defined(__x86_64__) || defined(__i386__)
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    case Isa::Neon:
#if defined(__aarch64__)
        return true;
#else
        return false;
#endif
    }
    return false;
}

const Table *table_for(Isa isa)
{
    switch (isa)
    {
#if defined(__x86_64__) || defined(__i386__)
    case Isa::Avx2:
        return &kAvx2;
#endif
#if defined(__aarch64__)
    case Isa::Neon:
        return &kNeon;
#endif
    default:
        return &kScalar;
    }
}

Isa initial_isa()
{
    const char *env = std::getenv("CFMIMO_KERNELS");
    if (env && std::strcmp(env, "scalar") == 0)
        return Isa::Scalar;
    return detected_isa();
}

std::atomic<Isa> &current()
{
    static std::atomic<Isa> isa{initial_isa()};
    return isa;
}

const Table &active() { return *table_for(current().load(std::memory_order_relaxed)); }

} // namespace

const char *isa_name(Isa isa)
{
    switch (isa)
    {
    case Isa::Scalar:
        return "scalar";
    case Isa::Avx2:
        return "avx2";
    case Isa::Neon:
        return "neon";
    }
    return "unknown";
}

Isa detected_isa()
{
    if (available(Isa::Avx2))
        return Isa::Avx2;
    if (available(Isa::Neon))
        return Isa::Neon;
    return Isa::Scalar;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

Isa force_isa(Isa isa)
{
    const Isa chosen = available(isa) ? isa : Isa::Scalar;
    current().store(chosen, std::memory_order_relaxed);
    return chosen;
}

cd cdotc(const cd *a, const cd *b, std::size_t n) { return active().cdotc(a, b, n); }
double sum_abs2(const cd *a, std::size_t n) { return active().sum_abs2(a, n); }
void caxpy(cd alpha, const cd *x, cd *y, std::size_t n) { active().caxpy(alpha, x, y, n); }

} // namespace cfmimo::kernels
