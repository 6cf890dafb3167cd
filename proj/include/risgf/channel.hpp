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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "risgf/complex_matrix.hpp"
#include "risgf/errors.hpp"
#include "risgf/random.hpp"

namespace risgf {

/// Sensor count N, slot count M (virtual receive antennas) and RIS size K.
struct SystemDims {
    std::size_t sensors = 1;
    std::size_t slots = 1;
    std::size_t ris_elements = 0;

    void validate() const
    {
        if (sensors < 1 || slots < 1) {
            throw DimensionError("SystemDims: sensors and slots must be >= 1");
        }
    }

    friend bool operator==(const SystemDims&, const SystemDims&) = default;
};

/// One draw of the three Rayleigh sub-channels.
struct ChannelRealization {
    ComplexMatrix direct;         ///< sensors -> BS, M x N
    ComplexMatrix sensor_to_ris;  ///< sensors -> RIS, K x N
    ComplexMatrix ris_to_bs;      ///< RIS -> BS, M x K

    SystemDims dims() const
    {
        return {direct.cols(), direct.rows(), sensor_to_ris.rows()};
    }

    friend bool operator==(const ChannelRealization&, const ChannelRealization&) = default;
};

inline constexpr unsigned kMaxPhaseBits = 8;

/// The 2^b unit-modulus reflection values exp(j 2 pi m / 2^b), m = 0 .. 2^b - 1.
inline std::vector<Complex> phase_set(unsigned bits)
{
    if (bits < 1 || bits > kMaxPhaseBits) {
        throw std::invalid_argument("phase_set: resolution must be in [1, 8] bits, got " +
                                    std::to_string(bits));
    }
    const std::size_t levels = std::size_t{1} << bits;
    std::vector<Complex> out;
    out.reserve(levels);
    for (std::size_t m = 0; m < levels; ++m) {
        // Quarter turns are emitted exactly so b = 1, 2 give {+-1, +-j} without rounding.
        const std::size_t quarter = levels / 4;
        if (quarter > 0 && m % quarter == 0) {
            static constexpr Complex exact[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
            out.push_back(exact[m / quarter]);
        } else if (levels == 2) {
            out.push_back(m == 0 ? Complex{1, 0} : Complex{-1, 0});
        } else {
            out.push_back(std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(m) /
                                              static_cast<double>(levels)));
        }
    }
    return out;
}

/// Reflection coefficients of the K RIS elements. Always built from phase
/// indices, so every coefficient lies on the unit circle.
class PhaseConfig {
public:
    PhaseConfig() = default;

    PhaseConfig(unsigned bits, std::vector<unsigned> indices)
        : bits_(bits), indices_(std::move(indices))
    {
        const auto table = phase_set(bits_);
        coefficients_.reserve(indices_.size());
        for (unsigned m : indices_) {
            if (m >= table.size()) {
                throw std::invalid_argument("PhaseConfig: index " + std::to_string(m) +
                                            " out of range for " + std::to_string(bits_) +
                                            "-bit resolution");
            }
            coefficients_.push_back(table[m]);
        }
    }

    /// All K elements set to the same index.
    static PhaseConfig uniform(std::size_t elements, unsigned bits, unsigned index = 0)
    {
        return PhaseConfig(bits, std::vector<unsigned>(elements, index));
    }

    unsigned bits() const noexcept { return bits_; }
    std::size_t size() const noexcept { return indices_.size(); }
    std::span<const unsigned> indices() const noexcept { return indices_; }
    std::span<const Complex> coefficients() const noexcept { return coefficients_; }

    /// Dash-joined indices, e.g. "0-1-1"; empty for K = 0.
    std::string label() const
    {
        std::string out;
        for (std::size_t k = 0; k < indices_.size(); ++k) {
            if (k != 0) {
                out += '-';
            }
            out += std::to_string(indices_[k]);
        }
        return out;
    }

    friend bool operator==(const PhaseConfig& a, const PhaseConfig& b)
    {
        return a.bits_ == b.bits_ && a.indices_ == b.indices_;
    }

private:
    unsigned bits_ = 1;
    std::vector<unsigned> indices_;
    std::vector<Complex> coefficients_;
};

/// Draws H1, H2, H3 from a single engine, i.i.d. unit-variance ZMCSCG entries.
template <class Engine>
ChannelRealization sample_realization(Engine& eng, const SystemDims& dims)
{
    dims.validate();
    const std::size_t n = dims.sensors, m = dims.slots, k = dims.ris_elements;
    ChannelRealization out{ComplexMatrix(m, n), ComplexMatrix(k, n), ComplexMatrix(m, k)};
    for (auto& z : out.direct.entries()) {
        z = complex_gaussian(eng);
    }
    for (auto& z : out.sensor_to_ris.entries()) {
        z = complex_gaussian(eng);
    }
    for (auto& z : out.ris_to_bs.entries()) {
        z = complex_gaussian(eng);
    }
    return out;
}

/// Counter coordinates of one trial's randomness.
struct TrialStream {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::uint64_t trial = 0;
};

namespace detail {

enum : std::uint64_t {
    kLaneDirect = 1ULL << 32,
    kLaneSensorToRis = 2ULL << 32,
    kLaneRisToBs = 3ULL << 32,
};

inline Xoshiro256 lane_engine(const TrialStream& s, std::uint64_t lane)
{
    return Xoshiro256(substream_seed(s.seed, s.stream, s.trial, lane));
}

}  // namespace detail

/// Draws the realization addressed by a trial stream.
///
/// Each column of H1 (per sensor), row of H2 (per element) and column of H3
/// (per element) has its own substream, so realizations nest: growing N, M or
/// K leaves the previously drawn entries untouched. Paired comparisons across
/// system sizes share every common coefficient.
inline ChannelRealization sample_realization(const TrialStream& s, const SystemDims& dims)
{
    dims.validate();
    const std::size_t n = dims.sensors, m = dims.slots, k = dims.ris_elements;
    ChannelRealization out{ComplexMatrix(m, n), ComplexMatrix(k, n), ComplexMatrix(m, k)};
    for (std::size_t col = 0; col < n; ++col) {
        auto eng = detail::lane_engine(s, detail::kLaneDirect | col);
        for (std::size_t row = 0; row < m; ++row) {
            out.direct(row, col) = complex_gaussian(eng);
        }
    }
    for (std::size_t el = 0; el < k; ++el) {
        auto eng = detail::lane_engine(s, detail::kLaneSensorToRis | el);
        for (std::size_t col = 0; col < n; ++col) {
            out.sensor_to_ris(el, col) = complex_gaussian(eng);
        }
    }
    for (std::size_t el = 0; el < k; ++el) {
        auto eng = detail::lane_engine(s, detail::kLaneRisToBs | el);
        for (std::size_t row = 0; row < m; ++row) {
            out.ris_to_bs(row, el) = complex_gaussian(eng);
        }
    }
    return out;
}

/// H = H1 + H3 diag(phi) H2. With K = 0 this is H1.
inline ComplexMatrix effective_channel(const ChannelRealization& real, const PhaseConfig& phase)
{
    const std::size_t k = real.sensor_to_ris.rows();
    if (phase.size() != k || real.ris_to_bs.cols() != k ||
        real.ris_to_bs.rows() != real.direct.rows() ||
        real.sensor_to_ris.cols() != real.direct.cols()) {
        throw DimensionError("effective_channel: phase length " + std::to_string(phase.size()) +
                             " does not match realization with K = " + std::to_string(k));
    }
    ComplexMatrix h = real.direct;
    const auto phi = phase.coefficients();
    for (std::size_t row = 0; row < h.rows(); ++row) {
        for (std::size_t el = 0; el < k; ++el) {
            const Complex scaled = real.ris_to_bs(row, el) * phi[el];
            for (std::size_t col = 0; col < h.cols(); ++col) {
                h(row, col) += scaled * real.sensor_to_ris(el, col);
            }
        }
    }
    return h;
}

}  // namespace risgf
