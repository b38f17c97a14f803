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

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#define CFMIMO_AVX2 __attribute__((target("avx2,fma")))

namespace cfmimo::kernels::avx2
{

// Two complex doubles per 256-bit register, laid out [re0 im0 re1 im1].

CFMIMO_AVX2 cd cdotc(const cd *a, const cd *b, std::size_t n)
{
    const double *pa = reinterpret_cast<const double *>(a);
    const double *pb = reinterpret_cast<const double *>(b);
    __m256d acc_rr = _mm256_setzero_pd(); // ar*br, ai*bi
    __m256d acc_ri = _mm256_setzero_pd(); // ar*bi, ai*br
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
    {
        const __m256d va = _mm256_loadu_pd(pa + 2 * i);
        const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        acc_rr = _mm256_fmadd_pd(va, vb, acc_rr);
        acc_ri = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0x5), acc_ri);
    }
    alignas(32) double rr[4], ri[4];
    _mm256_store_pd(rr, acc_rr);
    _mm256_store_pd(ri, acc_ri);
    double re = (rr[0] + rr[1]) + (rr[2] + rr[3]);
    double im = (ri[0] - ri[1]) + (ri[2] - ri[3]);
    for (; i < n; ++i)
    {
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

CFMIMO_AVX2 double sum_abs2(const cd *a, std::size_t n)
{
    const double *pa = reinterpret_cast<const double *>(a);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
    {
        const __m256d va = _mm256_loadu_pd(pa + 2 * i);
        acc = _mm256_fmadd_pd(va, va, acc);
    }
    alignas(32) double s[4];
    _mm256_store_pd(s, acc);
    double out = (s[0] + s[1]) + (s[2] + s[3]);
    for (; i < n; ++i)
        out += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
    return out;
}

CFMIMO_AVX2 void caxpy(cd alpha, const cd *x, cd *y, std::size_t n)
{
    const double *px = reinterpret_cast<const double *>(x);
    double *py = reinterpret_cast<double *>(y);
    const __m256d ar = _mm256_set1_pd(alpha.real());
    const __m256d ai = _mm256_set1_pd(alpha.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
    {
        const __m256d vx = _mm256_loadu_pd(px + 2 * i);
        const __m256d t1 = _mm256_mul_pd(vx, ar);
        const __m256d t2 = _mm256_mul_pd(_mm256_permute_pd(vx, 0x5), ai);
        const __m256d prod = _mm256_addsub_pd(t1, t2);
        _mm256_storeu_pd(py + 2 * i, _mm256_add_pd(_mm256_loadu_pd(py + 2 * i), prod));
    }
    for (; i < n; ++i)
        y[i] += alpha * x[i];
}

} // namespace cfmimo::kernels::avx2

#endif
