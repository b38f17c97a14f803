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

#include <doctest.h>

#include <random>
#include <vector>

#include "cfmimo/kernels.hpp"

using namespace cfmimo;
namespace k = cfmimo::kernels;

namespace
{
std::vector<cd> random_vec(std::size_t n, std::mt19937_64 &rng)
{
    std::normal_distribution<double> g;
    std::vector<cd> v(n);
    for (auto &x : v)
        x = {g(rng), g(rng)};
    return v;
}

void check_isa(k::Isa isa)
{
    std::mt19937_64 rng(11);
    for (std::size_t n : {0u, 1u, 2u, 3u, 7u, 16u, 33u, 130u})
    {
        const auto a = random_vec(n, rng), b = random_vec(n, rng);
        const cd alpha{0.3, -1.7};
        cd ref_dot = k::scalar::cdotc(a.data(), b.data(), n);
        double ref_nrm = k::scalar::sum_abs2(a.data(), n);
        auto ref_y = b;
        k::scalar::caxpy(alpha, a.data(), ref_y.data(), n);

        cd dot{};
        double nrm = 0.0;
        auto y = b;
#if defined(__x86_64__) || defined(__i386__)
        REQUIRE(isa == k::Isa::Avx2);
        dot = k::avx2::cdotc(a.data(), b.data(), n);
        nrm = k::avx2::sum_abs2(a.data(), n);
        k::avx2::caxpy(alpha, a.data(), y.data(), n);
#elif defined(__aarch64__)
        REQUIRE(isa == k::Isa::Neon);
        dot = k::neon::cdotc(a.data(), b.data(), n);
        nrm = k::neon::sum_abs2(a.data(), n);
        k::neon::caxpy(alpha, a.data(), y.data(), n);
#else
        (void)isa;
        dot = ref_dot;
        nrm = ref_nrm;
        y = ref_y;
#endif
        const double tol = 1e-12 * (1.0 + static_cast<double>(n));
        CHECK(std::abs(dot - ref_dot) <= tol * (1.0 + std::abs(ref_dot)));
        CHECK(std::abs(nrm - ref_nrm) <= tol * (1.0 + ref_nrm));
        for (std::size_t i = 0; i < n; ++i)
            CHECK(std::abs(y[i] - ref_y[i]) <= 1e-13 * (1.0 + std::abs(ref_y[i])));
    }
}
} // namespace

TEST_CASE("scalar reference matches the definition")
{
    const std::vector<cd> a = {{1, 2}, {3, -1}}, b = {{0, 1}, {2, 2}};
    // conj(1+2j)(j) + conj(3-j)(2+2j) = (2+j) + (4+8j)
    CHECK(std::abs(k::scalar::cdotc(a.data(), b.data(), 2) - cd(6, 9)) < 1e-15);
    CHECK(k::scalar::sum_abs2(a.data(), 2) == doctest::Approx(15.0));
    auto y = b;
    k::scalar::caxpy({0, 1}, a.data(), y.data(), 2);
    CHECK(std::abs(y[0] - cd(-2, 2)) < 1e-15);
    CHECK(std::abs(y[1] - cd(3, 5)) < 1e-15);
}

TEST_CASE("simd kernels match the scalar reference")
{
    if (k::detected_isa() == k::Isa::Scalar)
    {
        MESSAGE("no SIMD ISA on this host; only the scalar path is exercised");
        return;
    }
    check_isa(k::detected_isa());
}

TEST_CASE("dispatch can be forced to scalar and back")
{
    const k::Isa before = k::active_isa();
    CHECK(k::force_isa(k::Isa::Scalar) == k::Isa::Scalar);
    CHECK(k::active_isa() == k::Isa::Scalar);
    std::vector<cd> a = {{1, 1}, {2, 0}, {0, 3}};
    CHECK(k::sum_abs2(a.data(), a.size()) == doctest::Approx(15.0));
    k::force_isa(before);
    CHECK(k::active_isa() == before);
    CHECK(k::sum_abs2(a.data(), a.size()) == doctest::Approx(15.0));
}
