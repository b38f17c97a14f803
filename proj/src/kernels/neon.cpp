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

#if defined(__aarch64__)

#include <arm_neon.h>

namespace cfmimo::kernels::neon
{

// One complex double per 128-bit register, laid out [re im].

cd cdotc(const cd *a, const cd *b, std::size_t n)
{
    const double *pa = reinterpret_cast<const double *>(a);
    const double *pb = reinterpret_cast<const double *>(b);
    float64x2_t acc_rr = vdupq_n_f64(0.0);
    float64x2_t acc_ri = vdupq_n_f64(0.0);
    for (std::size_t i = 0; i < n; ++i)
    {
        const float64x2_t va = vld1q_f64(pa + 2 * i);
        const float64x2_t vb = vld1q_f64(pb + 2 * i);
        acc_rr = vfmaq_f64(acc_rr, va, vb);
        acc_ri = vfmaq_f64(acc_ri, va, vextq_f64(vb, vb, 1));
    }
    const double re = vgetq_lane_f64(acc_rr, 0) + vgetq_lane_f64(acc_rr, 1);
    const double im = vgetq_lane_f64(acc_ri, 0) - vgetq_lane_f64(acc_ri, 1);
    return {re, im};
}

double sum_abs2(const cd *a, std::size_t n)
{
    const double *pa = reinterpret_cast<const double *>(a);
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t i = 0; i < n; ++i)
    {
        const float64x2_t va = vld1q_f64(pa + 2 * i);
        acc = vfmaq_f64(acc, va, va);
    }
    return vaddvq_f64(acc);
}

void caxpy(cd alpha, const cd *x, cd *y, std::size_t n)
{
    const double *px = reinterpret_cast<const double *>(x);
    double *py = reinterpret_cast<double *>(y);
    const float64x2_t ar = vdupq_n_f64(alpha.real());
    const double ai_signed[2] = {-alpha.imag(), alpha.imag()};
    const float64x2_t ai = vld1q_f64(ai_signed);
    for (std::size_t i = 0; i < n; ++i)
    {
        const float64x2_t vx = vld1q_f64(px + 2 * i);
        float64x2_t vy = vld1q_f64(py + 2 * i);
        vy = vfmaq_f64(vy, vx, ar);
        vy = vfmaq_f64(vy, vextq_f64(vx, vx, 1), ai);
        vst1q_f64(py + 2 * i, vy);
    }
}

} // namespace cfmimo::kernels::neon

#endif
