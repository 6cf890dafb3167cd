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
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "risgf/complex_matrix.hpp"
#include "risgf/errors.hpp"

namespace risgf {

enum class Receiver { ZF, MMSE, MmseSic };

inline std::string_view to_string(Receiver r) noexcept
{
    switch (r) {
    case Receiver::ZF: return "zf";
    case Receiver::MMSE: return "mmse";
    case Receiver::MmseSic: return "mmse-sic";
    }
    return "?";
}

inline Receiver parse_receiver(std::string_view text)
{
    if (text == "zf") {
        return Receiver::ZF;
    }
    if (text == "mmse") {
        return Receiver::MMSE;
    }
    if (text == "mmse-sic") {
        return Receiver::MmseSic;
    }
    throw ConfigError("unknown receiver '" + std::string(text) + "'");
}

/// Symbol power P_x, noise variance sigma^2 and slot length L (all linear).
struct LinkParams {
    double power = 1.0;
    double noise_var = 1.0;
    std::size_t channel_uses = 1;

    void validate() const
    {
        if (!(power > 0.0) || !(noise_var > 0.0) || channel_uses < 1) {
            throw std::invalid_argument("LinkParams: power, noise_var must be > 0 and L >= 1");
        }
    }

    /// sigma^2 / P_x for unit symbol power at the given SNR in dB.
    static LinkParams from_snr_db(double snr_db, std::size_t channel_uses = 1)
    {
        return {1.0, std::pow(10.0, -snr_db / 10.0), channel_uses};
    }
};

struct SinrReport {
    std::vector<double> per_stream_sinr;
    std::vector<std::size_t> decode_order;
    Receiver receiver = Receiver::MMSE;
};

/// Zero-forcing left inverse (H^H H)^{-1} H^H, N x M.
///
/// Throws SingularMatrixError when H is (numerically) column-rank deficient,
/// including whenever M < N.
inline ComplexMatrix zf_filter(const ComplexMatrix& h)
{
    if (h.rows() < h.cols()) {
        throw SingularMatrixError("zf_filter: " + std::to_string(h.cols()) +
                                  " streams cannot be separated on " +
                                  std::to_string(h.rows()) + " slots");
    }
    return solve_hermitian_system(gram(h), hermitian(h));
}

/// (H^H H + sigma^2/P_x I)^{-1} H^H, N x M.
inline ComplexMatrix mmse_filter(const ComplexMatrix& h, const LinkParams& params)
{
    params.validate();
    ComplexMatrix a = gram(h);
    const double reg = params.noise_var / params.power;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        a(i, i) += reg;
    }
    return solve_hermitian_system(a, hermitian(h));
}

/// Post-processing SINR of every stream after filter F.
///
///   SINR(i) = P L |(FH)_ii|^2 / (P L sum_{j!=i} |(FH)_ij|^2 + L sigma^2 (F F^H)_ii)
///
/// The noise term is the filtered noise power; L cancels.
inline SinrReport linear_post_sinr(const ComplexMatrix& f, const ComplexMatrix& h,
                                   const LinkParams& params, Receiver receiver = Receiver::MMSE)
{
    params.validate();
    if (f.cols() != h.rows() || f.rows() != h.cols()) {
        throw DimensionError("linear_post_sinr: filter and channel are not conformable");
    }
    const ComplexMatrix fh = matmul(f, h);
    const double uses = static_cast<double>(params.channel_uses);
    const std::size_t n = fh.rows();

    SinrReport report;
    report.receiver = receiver;
    report.per_stream_sinr.resize(n);
    report.decode_order.resize(n);
    std::iota(report.decode_order.begin(), report.decode_order.end(), std::size_t{0});

    for (std::size_t i = 0; i < n; ++i) {
        const double signal = params.power * uses * std::norm(fh(i, i));
        double interference = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                interference += std::norm(fh(i, j));
            }
        }
        double filter_gain = 0.0;
        for (std::size_t m = 0; m < f.cols(); ++m) {
            filter_gain += std::norm(f(i, m));
        }
        const double denom =
            params.power * uses * interference + uses * params.noise_var * filter_gain;
        report.per_stream_sinr[i] = signal > 0.0 ? signal / denom : 0.0;
    }
    return report;
}

namespace detail {

inline ComplexMatrix select_columns(const ComplexMatrix& h, std::span<const std::size_t> cols)
{
    ComplexMatrix out(h.rows(), cols.size());
    for (std::size_t m = 0; m < h.rows(); ++m) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            out(m, c) = h(m, cols[c]);
        }
    }
    return out;
}

}  // namespace detail

/// MMSE-SIC with optimal ordering.
///
/// Each stage filters the undecoded columns with the MMSE filter, decodes the
/// stream with the highest post-processing SINR (lowest index on ties), then
/// cancels it perfectly. per_stream_sinr[i] is stream i's SINR at its stage.
inline SinrReport mmse_sic_sinr(const ComplexMatrix& h, const LinkParams& params)
{
    const std::size_t n = h.cols();
    SinrReport report;
    report.receiver = Receiver::MmseSic;
    report.per_stream_sinr.assign(n, 0.0);
    report.decode_order.reserve(n);

    std::vector<std::size_t> remaining(n);
    std::iota(remaining.begin(), remaining.end(), std::size_t{0});
    while (!remaining.empty()) {
        const ComplexMatrix sub = detail::select_columns(h, remaining);
        const auto stage = linear_post_sinr(mmse_filter(sub, params), sub, params);
        std::size_t best = 0;
        for (std::size_t c = 1; c < remaining.size(); ++c) {
            // remaining stays sorted, so strict > keeps the lowest index on ties
            if (stage.per_stream_sinr[c] > stage.per_stream_sinr[best]) {
                best = c;
            }
        }
        report.per_stream_sinr[remaining[best]] = stage.per_stream_sinr[best];
        report.decode_order.push_back(remaining[best]);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
    }
    return report;
}

/// MMSE-SIC with a caller-imposed decode order (a permutation of 0..N-1).
inline SinrReport mmse_sic_sinr(const ComplexMatrix& h, const LinkParams& params,
                                std::span<const std::size_t> order)
{
    const std::size_t n = h.cols();
    std::vector<bool> seen(n, false);
    if (order.size() != n) {
        throw std::invalid_argument("mmse_sic_sinr: order is not a permutation");
    }
    for (std::size_t s : order) {
        if (s >= n || seen[s]) {
            throw std::invalid_argument("mmse_sic_sinr: order is not a permutation");
        }
        seen[s] = true;
    }

    SinrReport report;
    report.receiver = Receiver::MmseSic;
    report.per_stream_sinr.assign(n, 0.0);
    report.decode_order.assign(order.begin(), order.end());
    for (std::size_t stage = 0; stage < n; ++stage) {
        const auto remaining = order.subspan(stage);
        const ComplexMatrix sub = detail::select_columns(h, remaining);
        const auto s = linear_post_sinr(mmse_filter(sub, params), sub, params);
        report.per_stream_sinr[order[stage]] = s.per_stream_sinr[0];
    }
    return report;
}

/// Dispatches on the receiver type. ZF propagates SingularMatrixError.
inline SinrReport compute_sinr(Receiver receiver, const ComplexMatrix& h, const LinkParams& params)
{
    switch (receiver) {
    case Receiver::ZF: return linear_post_sinr(zf_filter(h), h, params, Receiver::ZF);
    case Receiver::MMSE: return linear_post_sinr(mmse_filter(h, params), h, params, Receiver::MMSE);
    case Receiver::MmseSic: return mmse_sic_sinr(h, params);
    }
    throw std::logic_error("compute_sinr: unknown receiver");
}

}  // namespace risgf
