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

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace thzchan {

/// One step of the SplitMix64 generator; advances `state`.
std::uint64_t splitmix64(std::uint64_t &state);

/// Derives an independent child seed from a parent seed and a stream id.
/// Children of the same parent with distinct stream ids do not overlap in
/// practice, and the mapping is stable across platforms and releases.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream);

/// 64-bit FNV-1a digest, used for scenario keys and input fingerprints.
std::uint64_t fnv1a64(std::string_view bytes);

// Portable random stream. std::mt19937_64 has a standardised output
// sequence; the distributions on top of it are implemented here because the
// standard library ones are allowed to differ between vendors.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();

    /// Standard normal deviate (Marsaglia polar method).
    double normal();

    /// Exponential deviate with the given rate, by inversion.
    double exponential(double rate);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace thzchan
