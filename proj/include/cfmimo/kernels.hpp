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

#pragma once

#include <cstddef>

#include "cfmimo/types.hpp"

// Complex inner-loop kernels. Each has a scalar reference and SIMD variants
// selected once at runtime; CFMIMO_KERNELS=scalar forces the reference path.
namespace cfmimo::kernels
{

enum class Isa
{
    Scalar,
    Avx2,
    Neon
};

const char *isa_name(Isa isa);

// ISA currently used by the dispatched entry points.
Isa active_isa();

// Best ISA this CPU supports, ignoring the environment override.
Isa detected_isa();

// Test hook. Falls back to Scalar if the requested ISA is unavailable and
// returns the ISA actually selected.
Isa force_isa(Isa isa);

// sum_i conj(a_i) * b_i
cd cdotc(const cd *a, const cd *b, std::size_t n);
// sum_i |a_i|^2
double sum_abs2(const cd *a, std::size_t n);
// y_i += alpha * x_i
void caxpy(cd alpha, const cd *x, cd *y, std::size_t n);

namespace scalar
{
cd cdotc(const cd *a, const cd *b, std::size_t n);
double sum_abs2(const cd *a, std::size_t n);
void caxpy(cd alpha, const cd *x, cd *y, std::size_t n);
} // namespace scalar

#if defined(__x86_64__) || defined(__i386__)
namespace avx2
{
cd cdotc(const cd *a, const cd *b, std::size_t n);
double sum_abs2(const cd *a, std::size_t n);
void caxpy(cd alpha, const cd *x, cd *y, std::size_t n);
} // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon
{
cd cdotc(const cd *a, const cd *b, std::size_t n);
double sum_abs2(const cd *a, std::size_t n);
void caxpy(cd alpha, const cd *x, cd *y, std::size_t n);
} // namespace neon
#endif

} // namespace cfmimo::kernels
