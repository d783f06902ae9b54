// SPDX-License-Identifier: Apache-2.0
//
// allpass: matrix all-pass filter design by boundary interpolation
// Copyright (C) 2026 The allpass authors
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

#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace allpass;
using namespace allpass::test;

namespace
{
    CMatrix diag2(cdouble a, cdouble b)
    {
        CMatrix D = CMatrix::Zero(2, 2);
        D(0, 0) = a;
        D(1, 1) = b;
        return D;
    }

    CMatrix random_phases(int m, std::mt19937_64 &rng)
    {
        std::uniform_real_distribution<double> u(-pi, pi);
        CMatrix D = CMatrix::Zero(m, m);
        for (int i = 0; i < m; ++i)
            D(i, i) = unit_phasor(u(rng));
        return D;
    }
}

TEST(Baselines, UnitaryLogExamples)
{
    EXPECT_LE(unitary_log(CMatrix::Identity(3, 3)).X.norm(), 1e-15);
    auto L = unitary_log(diag2(cdouble(0, 1), cdouble(0, -1)));
    EXPECT_LE((L.X - diag2(cdouble(0, pi / 2), cdouble(0, -pi / 2))).norm(), 1e-14);
    EXPECT_FALSE(L.branch_ambiguous);
    auto M = unitary_log(CMatrix(-CMatrix::Identity(2, 2)));
    EXPECT_TRUE(M.branch_ambiguous);
    EXPECT_LE((skew_hermitian_exp(M.X) + CMatrix::Identity(2, 2)).norm(), 1e-12);
}

TEST(Baselines, LogExpRoundTrip)
{
    std::mt19937_64 rng(51);
    for (int s = 0; s < 50; ++s)
    {
        CMatrix U = random_unitary(1 + s % 6, rng);
        auto L = unitary_log(U);
        EXPECT_LE((L.X + L.X.adjoint()).norm(), 1e-12);
        EXPECT_LE((skew_hermitian_exp(L.X) - U).norm(), 1e-9);
    }
}

TEST(Baselines, GeodesicExamples)
{
    std::mt19937_64 rng(52);
    UnitarySample a{-0.5, random_unitary(3, rng)}, b{0.75, random_unitary(3, rng)};
    EXPECT_LE((geodesic_interpolate(a, b, a.omega).U - a.U).norm(), 0.0);
    EXPECT_LE((geodesic_interpolate(a, b, b.omega).U - b.U).norm(), 0.0);

    UnitarySample I{0.0, CMatrix::Identity(2, 2)}, Q{1.0, diag2(cdouble(0, 1), 1.0)};
    auto mid = geodesic_interpolate(I, Q, 0.5).U;
    EXPECT_LE((mid - diag2(unit_phasor(pi / 4), 1.0)).norm(), 1e-14);

    UnitarySample a2{1.0, a.U};
    EXPECT_LE((geodesic_interpolate({0.0, a.U}, a2, 0.5).U - a.U).norm(), 1e-12);

    for (double w : {-0.4, 0.0, 0.3, 0.7})
        EXPECT_LE(unitarity_defect(geodesic_interpolate(a, b, w).U), 1e-9);
    EXPECT_THROW(geodesic_interpolate(a, b, 1.0), Error);
}

TEST(Baselines, PiecewiseGeodesicHitsAnchorsAndWraps)
{
    std::mt19937_64 rng(53);
    std::vector<UnitarySample> anchors;
    for (double w : six_point_frequencies())
        anchors.push_back({w, random_unitary(2, rng)});
    PiecewiseGeodesic pg(anchors);
    for (const auto &s : anchors)
        EXPECT_LE((pg(s.omega).U - s.U).norm(), 1e-12);
    const double gap_mid = pi;
    auto wrap = pg(gap_mid).U;
    auto direct = geodesic_interpolate(anchors.back(), {anchors.front().omega + 2 * pi, anchors.front().U}, gap_mid).U;
    EXPECT_LE((wrap - direct).norm(), 1e-12);
    EXPECT_LE(unitarity_defect(pg(-pi + 1e-3).U), 1e-9);
}

TEST(Baselines, FrobeniusError)
{
    std::mt19937_64 rng(54);
    CMatrix U = random_unitary(3, rng), V = random_unitary(3, rng);
    EXPECT_EQ(frobenius_error(U, U), 0.0);
    EXPECT_NEAR(frobenius_error(CMatrix::Identity(2, 2), -CMatrix::Identity(2, 2)), 2 * std::sqrt(2.0), 1e-15);
    double sum = 0.0;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            sum += std::norm(U(r, c) - V(r, c));
    EXPECT_NEAR(frobenius_error(U, V), std::sqrt(sum), 1e-14);
}

TEST(Baselines, FlagDistanceExamples)
{
    std::mt19937_64 rng(55);
    CMatrix U = random_unitary(4, rng);
    EXPECT_LE(flag_distance(U, U * random_phases(4, rng)), 1e-14);
    CMatrix swap(2, 2);
    swap << 0.0, 1.0, 1.0, 0.0;
    EXPECT_NEAR(flag_distance(CMatrix::Identity(2, 2), swap), 2.0, 1e-15);
}

TEST(Baselines, FlagDistanceMatchesGridOracle)
{
    std::mt19937_64 rng(56);
    for (int s = 0; s < 5; ++s)
    {
        CMatrix U = random_unitary(2, rng), V = random_unitary(2, rng);
        double best = std::numeric_limits<double>::infinity();
        for (int a = 0; a < 360; ++a)
            for (int b = 0; b < 360; ++b)
            {
                CMatrix T = diag2(unit_phasor(2 * pi * a / 360), unit_phasor(2 * pi * b / 360));
                best = std::min(best, (U - V * T).norm());
            }
        EXPECT_NEAR(flag_distance(U, V), best, 1e-3);
    }
}

TEST(Baselines, FlagDistanceProperties)
{
    std::mt19937_64 rng(57);
    for (int s = 0; s < 100; ++s)
    {
        const int m = 1 + s % 8;
        CMatrix U = random_unitary(m, rng), V = random_unitary(m, rng);
        const double d = flag_distance(U, V);
        EXPECT_LE(d, frobenius_error(U, V) + 1e-14);
        EXPECT_NEAR(d, flag_distance(V, U), 1e-12);
        EXPECT_NEAR(d, flag_distance(U * random_phases(m, rng), V), 1e-12);
        EXPECT_NEAR(d, flag_distance(U, V * random_phases(m, rng)), 1e-12);
        double sum = 0.0;
        CMatrix W = V.adjoint() * U;
        for (int i = 0; i < m; ++i)
            sum += std::abs(W(i, i));
        EXPECT_NEAR(d, std::sqrt(std::max(0.0, 2.0 * m - 2.0 * sum)), 1e-7);
    }
}
