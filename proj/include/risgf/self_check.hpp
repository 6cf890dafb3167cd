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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "risgf/complex_matrix.hpp"
#include "risgf/outage.hpp"
#include "risgf/random.hpp"
#include "risgf/receivers.hpp"

namespace risgf {

/// Outcome of one built-in check. margin = limit - observed, so a positive
/// margin means the check passed with room to spare.
struct CheckResult {
    std::string name;
    bool passed = false;
    double observed = 0.0;
    double limit = 0.0;
    double margin = 0.0;
};

namespace detail {

template <class Engine>
ComplexMatrix random_gaussian_matrix(Engine& eng, std::size_t rows, std::size_t cols)
{
    ComplexMatrix out(rows, cols);
    for (auto& z : out.entries()) {
        z = complex_gaussian(eng);
    }
    return out;
}

inline CheckResult make_check(std::string name, double observed, double limit)
{
    return {std::move(name), observed <= limit, observed, limit, limit - observed};
}

}  // namespace detail

/// Analytic-oracle and invariant checks backing the `validate` subcommand:
/// SISO Rayleigh closed form, ZF zero-ISI, MMSE-SIC determinant identity and
/// per-stream MMSE >= ZF.
inline std::vector<CheckResult> run_self_checks(std::uint64_t seed, std::uint64_t siso_trials,
                                                std::size_t random_channels, unsigned workers = 1)
{
    std::vector<CheckResult> out;

    ExperimentConfig siso;
    siso.dims = {1, 1, 0};
    siso.receiver = Receiver::ZF;
    siso.rate = 2.0;
    siso.trials = siso_trials;
    siso.seed = seed;
    EngineOptions opt;
    opt.workers = workers;
    for (double snr_db : {0.0, 5.0, 10.0, 15.0, 20.0}) {
        const auto est = estimate_outage(siso, snr_db, 0, opt).front();
        const double exact = siso_outage_closed_form(std::pow(10.0, snr_db / 10.0), siso.rate);
        const double z = est.std_err > 0.0 ? std::abs(est.p_hat - exact) / est.std_err : 0.0;
        out.push_back(detail::make_check(
            "siso closed form @" + std::to_string(static_cast<int>(snr_db)) + " dB (|z|)", z, 3.0));
    }

    Xoshiro256 eng(substream_seed(seed, 0xc0ffee, 0, 0));

    double worst_isi = 0.0;
    for (std::size_t t = 0; t < random_channels; ++t) {
        const auto h = detail::random_gaussian_matrix(eng, 8, 5);
        const auto fh = matmul(zf_filter(h), h);
        for (std::size_t i = 0; i < fh.rows(); ++i) {
            for (std::size_t j = 0; j < fh.cols(); ++j) {
                if (i != j) {
                    worst_isi = std::max(worst_isi, std::abs(fh(i, j)));
                }
            }
        }
    }
    out.push_back(detail::make_check("zf zero-isi max |(FH)_ij|", worst_isi, 1e-9));

    double worst_rel = 0.0;
    double worst_dominance = 0.0;
    for (std::size_t t = 0; t < random_channels; ++t) {
        const auto h = detail::random_gaussian_matrix(eng, 6, 5);
        for (double snr : {1.0, 10.0, 100.0}) {
            const LinkParams link{1.0, 1.0 / snr, 1};
            const auto sic = mmse_sic_sinr(h, link);
            double sum = 0.0;
            for (double s : sic.per_stream_sinr) {
                sum += std::log2(1.0 + s);
            }
            ComplexMatrix a = gram(h) * Complex(snr);
            for (std::size_t i = 0; i < a.rows(); ++i) {
                a(i, i) += 1.0;
            }
            const double ref = log_det_hermitian(a);
            worst_rel = std::max(worst_rel, std::abs(sum - ref) / std::abs(ref));

            const auto zf = compute_sinr(Receiver::ZF, h, link);
            const auto mmse = compute_sinr(Receiver::MMSE, h, link);
            for (std::size_t i = 0; i < h.cols(); ++i) {
                worst_dominance =
                    std::max(worst_dominance, zf.per_stream_sinr[i] - mmse.per_stream_sinr[i]);
            }
        }
    }
    out.push_back(detail::make_check("mmse-sic sum-rate vs log det (relative)", worst_rel, 1e-8));
    out.push_back(detail::make_check("zf minus mmse per-stream sinr", worst_dominance, 1e-9));
    return out;
}

}  // namespace risgf
