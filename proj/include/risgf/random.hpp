// Copyright 2026 The risgf Authors
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

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>

namespace risgf {

//---------------------------------------------------------------------------//
// Reproducible random substreams.
//
// Every Monte Carlo trial owns an engine seeded purely from a counter tuple
// (seed, stream, trial, lane). Results therefore never depend on which worker
// ran a trial or in which order. Normal variates are generated here rather
// than with std::normal_distribution, whose output is library-specific.
//---------------------------------------------------------------------------//

/// SplitMix64 output function (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// xoshiro256** 1.0. Satisfies UniformRandomBitGenerator.
class Xoshiro256 {
public:
    using result_type = std::uint64_t;

    explicit constexpr Xoshiro256(std::uint64_t seed) noexcept
    {
        std::uint64_t x = seed;
        for (auto& s : state_) {
            s = splitmix64(x);
            x += 0x9e3779b97f4a7c15ULL;
        }
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept
    {
        return std::numeric_limits<result_type>::max();
    }

    constexpr result_type operator()() noexcept
    {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept
    {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

/// Seed of the substream addressed by (seed, stream, trial, lane).
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream,
                                       std::uint64_t trial, std::uint64_t lane) noexcept
{
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ stream);
    h = splitmix64(h ^ trial);
    return splitmix64(h ^ lane);
}

/// Uniform double in (0, 1].
template <class Engine>
double uniform_open_closed(Engine& eng)
{
    return static_cast<double>((eng() >> 11) + 1) * 0x1.0p-53;
}

/// Zero-mean circularly-symmetric complex Gaussian with E|z|^2 = 1.
///
/// Box-Muller in polar form: |z|^2 = -ln(u1) is Exp(1) and arg z is uniform.
template <class Engine>
std::complex<double> complex_gaussian(Engine& eng)
{
    const double radius = std::sqrt(-std::log(uniform_open_closed(eng)));
    const double angle = 2.0 * std::numbers::pi * uniform_open_closed(eng);
    return std::polar(radius, angle);
}

}  // namespace risgf
