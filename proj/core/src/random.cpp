// SPDX-License-Identifier: Apache-2.0
//
// thzchan - terahertz line-of-sight channel synthesis and sweep post-processing
// Copyright (C) 2026 The thzchan authors
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

#include "thzchan/random.hpp"

#include <cmath>

namespace thzchan {

std::uint64_t splitmix64(std::uint64_t &state)
{
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream)
{
    std::uint64_t state = parent;
    const std::uint64_t a = splitmix64(state);
    state = a ^ (stream * 0xD1B54A32D192ED03ULL);
    return splitmix64(state);
}

std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001B3ULL;
    }
    return hash;
}

Rng::Rng(std::uint64_t seed)
{
    // Expand the user seed so that nearby seeds give unrelated streams.
    std::uint64_t state = seed;
    std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(state)), static_cast<std::uint32_t>(splitmix64(state)),
                      static_cast<std::uint32_t>(splitmix64(state)), static_cast<std::uint32_t>(splitmix64(state))};
    engine_.seed(seq);
}

double Rng::uniform()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    has_spare_ = true;
    return u * scale;
}

double Rng::exponential(double rate)
{
    // 1 - U lies in (0, 1], so the logarithm is finite.
    return -std::log(1.0 - uniform()) / rate;
}

} // namespace thzchan
