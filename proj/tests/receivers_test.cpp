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

#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "risgf/receivers.hpp"
#include "test_util.hpp"

namespace risgf {
namespace {

double off_diagonal_max(const ComplexMatrix& m)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (i != j) {
                worst = std::max(worst, std::abs(m(i, j)));
            }
        }
    }
    return worst;
}

double sum_rate(const SinrReport& r)
{
    double s = 0.0;
    for (double x : r.per_stream_sinr) {
        s += std::log2(1.0 + x);
    }
    return s;
}

TEST(ZfFilter, Examples)
{
    EXPECT_LT(testing::max_entry_diff(zf_filter(ComplexMatrix::identity(3)), ComplexMatrix::identity(3)),
              1e-15);
    EXPECT_LT(testing::max_entry_diff(zf_filter(ComplexMatrix{{2}}), ComplexMatrix{{0.5}}), 1e-15);
    EXPECT_LT(testing::max_entry_diff(zf_filter(ComplexMatrix{{1}, {1}}), ComplexMatrix{{0.5, 0.5}}),
              1e-15);
}

TEST(ZfFilter, RankDeficiency)
{
    EXPECT_THROW(zf_filter(ComplexMatrix{{1, 1}, {1, 1}}), SingularMatrixError);
    EXPECT_THROW(zf_filter(ComplexMatrix(2, 3)), SingularMatrixError);
    EXPECT_THROW(zf_filter(ComplexMatrix(4, 2)), SingularMatrixError);
}

TEST(ZfFilter, LeftInverseZeroIsi)
{
    Xoshiro256 eng(101);
    for (int rep = 0; rep < 300; ++rep) {
        const std::size_t n = 1 + rep % 6, m = n + rep % 4;
        const auto h = testing::gaussian_matrix(eng, m, n);
        const auto fh = matmul(zf_filter(h), h);
        EXPECT_LT(testing::max_entry_diff(fh, ComplexMatrix::identity(n)), 1e-9);
        EXPECT_LT(off_diagonal_max(fh), 1e-9);
    }
}

TEST(MmseFilter, Examples)
{
    const LinkParams unit{1.0, 1.0, 1};
    EXPECT_LT(testing::max_entry_diff(mmse_filter(ComplexMatrix{{1}}, unit), ComplexMatrix{{0.5}}), 1e-15);
    EXPECT_LT(testing::max_entry_diff(mmse_filter(ComplexMatrix::identity(2), unit),
                                      ComplexMatrix::identity(2) * 0.5),
              1e-15);

    Xoshiro256 eng(5);
    const auto h = testing::gaussian_matrix(eng, 6, 4);
    EXPECT_LT(testing::max_entry_diff(mmse_filter(h, LinkParams{1.0, 1e-12, 1}), zf_filter(h)), 1e-6);
}

TEST(MmseFilter, WideChannelStillSolvable)
{
    Xoshiro256 eng(6);
    const auto h = testing::gaussian_matrix(eng, 3, 7);
    EXPECT_NO_THROW(mmse_filter(h, LinkParams{1.0, 0.1, 1}));
}

TEST(LinearPostSinr, ScalarFilterInvariance)
{
    const ComplexMatrix h{{Complex(0.4, -0.9)}};
    const LinkParams link{2.0, 0.5, 3};
    const double expected = 2.0 * std::norm(h(0, 0)) / 0.5;
    for (Complex f : {Complex(1.0), Complex(-3.0, 2.0), Complex(1e-3, 0.0)}) {
        const auto r = linear_post_sinr(ComplexMatrix{{f}}, h, link);
        EXPECT_NEAR(r.per_stream_sinr[0], expected, 1e-12 * expected);
    }
}

TEST(LinearPostSinr, ZfSinrIdentity)
{
    Xoshiro256 eng(7);
    for (int rep = 0; rep < 100; ++rep) {
        const auto h = testing::gaussian_matrix(eng, 6, 4);
        const LinkParams link{1.0, 0.3, 1};
        const auto r = compute_sinr(Receiver::ZF, h, link);
        const auto inv = testing::gauss_jordan_inverse(testing::schoolbook_product(hermitian(h), h));
        for (std::size_t i = 0; i < 4; ++i) {
            const double expected = 1.0 / (0.3 * inv(i, i).real());
            EXPECT_NEAR(r.per_stream_sinr[i], expected, 1e-9 * expected);
        }
        EXPECT_EQ(r.receiver, Receiver::ZF);
        EXPECT_EQ(r.decode_order, (std::vector<std::size_t>{0, 1, 2, 3}));
    }
}

TEST(LinearPostSinr, MmseOrthogonalColumnsDecouple)
{
    // columns with squared norm g = 2 and zero mutual inner product
    const ComplexMatrix h{{1, 1}, {1, -1}};
    const LinkParams link{1.0, 0.1, 1};
    const auto r = compute_sinr(Receiver::MMSE, h, link);
    EXPECT_NEAR(r.per_stream_sinr[0], 20.0, 1e-12);
    EXPECT_NEAR(r.per_stream_sinr[1], 20.0, 1e-12);
}

TEST(LinearPostSinr, ZeroDiagonalIsZeroSinr)
{
    const ComplexMatrix f{{0, 0}, {0, 1}};
    const auto r = linear_post_sinr(f, ComplexMatrix::identity(2), LinkParams{});
    EXPECT_EQ(r.per_stream_sinr[0], 0.0);
    EXPECT_DOUBLE_EQ(r.per_stream_sinr[1], 1.0);
}

TEST(LinearPostSinr, DimensionMismatch)
{
    EXPECT_THROW(linear_post_sinr(ComplexMatrix(2, 3), ComplexMatrix(2, 2), LinkParams{}),
                 DimensionError);
}

TEST(MmseSic, IdentityChannelTieBreak)
{
    const auto r = mmse_sic_sinr(ComplexMatrix::identity(2), LinkParams{1.0, 1.0, 1});
    EXPECT_NEAR(r.per_stream_sinr[0], 1.0, 1e-14);
    EXPECT_NEAR(r.per_stream_sinr[1], 1.0, 1e-14);
    EXPECT_EQ(r.decode_order, (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(r.receiver, Receiver::MmseSic);
}

TEST(MmseSic, SingleStreamMatchesMmse)
{
    Xoshiro256 eng(8);
    const auto h = testing::gaussian_matrix(eng, 5, 1);
    const LinkParams link{1.0, 0.2, 1};
    EXPECT_NEAR(mmse_sic_sinr(h, link).per_stream_sinr[0],
                compute_sinr(Receiver::MMSE, h, link).per_stream_sinr[0], 1e-12);
}

TEST(MmseSic, DecodesStrongestFirst)
{
    // stream 1 is much stronger and should go first
    const ComplexMatrix h{{0.2, 3.0}, {0.1, 2.0}, {0.3, -1.0}};
    const auto r = mmse_sic_sinr(h, LinkParams{1.0, 0.5, 1});
    EXPECT_EQ(r.decode_order, (std::vector<std::size_t>{1, 0}));
}

TEST(MmseSic, SumRateEqualsLogDetForAnyOrder)
{
    Xoshiro256 eng(9);
    std::vector<std::size_t> order(5);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t m = 3 + rep % 5;  // includes N > M
        const auto h = testing::gaussian_matrix(eng, m, 5);
        for (double snr : {1.0, 10.0, 100.0}) {
            const LinkParams link{1.0, 1.0 / snr, 1};
            const double ref = testing::capacity_log_det(h, snr);
            EXPECT_NEAR(sum_rate(mmse_sic_sinr(h, link)), ref, 1e-8 * ref);

            std::iota(order.begin(), order.end(), std::size_t{0});
            std::shuffle(order.begin(), order.end(), eng);
            const auto forced = mmse_sic_sinr(h, link, order);
            EXPECT_EQ(forced.decode_order, order);
            EXPECT_NEAR(sum_rate(forced), ref, 1e-8 * ref);
        }
    }
}

TEST(MmseSic, RejectsBadOrder)
{
    const std::vector<std::size_t> dup{0, 0};
    EXPECT_THROW(mmse_sic_sinr(ComplexMatrix::identity(2), LinkParams{}, dup), std::invalid_argument);
}

TEST(Receivers, DominanceRelations)
{
    Xoshiro256 eng(10);
    for (int rep = 0; rep < 300; ++rep) {
        const auto h = testing::gaussian_matrix(eng, 6, 5);
        const LinkParams link{1.0, std::pow(10.0, -(rep % 30) / 10.0), 1};
        const auto zf = compute_sinr(Receiver::ZF, h, link);
        const auto mmse = compute_sinr(Receiver::MMSE, h, link);
        const auto sic = compute_sinr(Receiver::MmseSic, h, link);
        for (std::size_t i = 0; i < 5; ++i) {
            EXPECT_GE(mmse.per_stream_sinr[i], zf.per_stream_sinr[i] - 1e-9);
        }
        const double best_mmse = *std::max_element(mmse.per_stream_sinr.begin(), mmse.per_stream_sinr.end());
        EXPECT_GE(sic.per_stream_sinr[sic.decode_order.front()], best_mmse - 1e-9);
    }
}

TEST(Receivers, ScaleCovarianceAndSlotLengthInvariance)
{
    Xoshiro256 eng(12);
    for (int rep = 0; rep < 50; ++rep) {
        const auto h = testing::gaussian_matrix(eng, 6, 4);
        const Complex c(0.3, -2.1);
        const LinkParams base{1.0, 0.4, 1};
        const LinkParams scaled{1.0, 0.4 * std::norm(c), 1};
        const LinkParams long_slot{1.0, 0.4, 128};
        for (auto rx : {Receiver::ZF, Receiver::MMSE, Receiver::MmseSic}) {
            const auto a = compute_sinr(rx, h, base);
            const auto b = compute_sinr(rx, h * c, scaled);
            const auto l = compute_sinr(rx, h, long_slot);
            for (std::size_t i = 0; i < 4; ++i) {
                EXPECT_NEAR(b.per_stream_sinr[i], a.per_stream_sinr[i], 1e-9 * a.per_stream_sinr[i]);
                EXPECT_NEAR(l.per_stream_sinr[i], a.per_stream_sinr[i], 1e-9 * a.per_stream_sinr[i]);
            }
        }
    }
}

TEST(Receiver, ParseNames)
{
    for (auto rx : {Receiver::ZF, Receiver::MMSE, Receiver::MmseSic}) {
        EXPECT_EQ(parse_receiver(to_string(rx)), rx);
    }
    EXPECT_THROW(parse_receiver("ml"), ConfigError);
}

}  // namespace
}  // namespace risgf
