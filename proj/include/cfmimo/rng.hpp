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

#include <cstdint>
#include <random>

namespace cfmimo
{

using Rng = std::mt19937_64;

// Independent substreams per drop and purpose, so drops can run in any order.
enum class Stream : std::uint64_t
{
    Layout = 0,
    Shadowing = 1,
    Paths = 2,
    Association = 3,
    Symbols = 4,
};

inline Rng make_rng(std::uint64_t seed, std::uint64_t drop, Stream stream, std::uint64_t sub = 0)
{
    auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
    auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    const auto s = static_cast<std::uint64_t>(stream);
    std::seed_seq seq{lo(seed), hi(seed), lo(drop), hi(drop), lo(s), hi(s), lo(sub), hi(sub)};
    return Rng(seq);
}

} // namespace cfmimo
