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
    AllPassFilter scalar_example()
    {
        return base_filter(0.0, scalar(-1.0), scalar(2.0));
    }

    AllPassFilter stable_filter(int m, int n, double max_radius, std::mt19937_64 &rng)
    {
        for (int attempt = 0; attempt < 500; ++attempt)
        {
            auto f = design_allpass(random_dominant_set(m, spread_frequencies(n, rng), rng));
            if (pole_radius(f) <= max_radius)
                return f;
        }
        throw std::runtime_error("no stable filter found");
    }

    VectorSignal white_noise(int m, size_t length, std::mt19937_64 &rng)
    {
        std::normal_distribution<double> g(0.0, std::sqrt(0.5));
        VectorSignal x(m, length);
        for (size_t t = 0; t < length; ++t)
            for (int i = 0; i < m; ++i)
                x.at(t, i) = cdouble(g(rng), g(rng));
        return x;
    }
}

TEST(PolyFilter, EvalPoly)
{
    const CMatrix I = CMatrix::Identity(2, 2);
    EXPECT_LE((eval_poly(MatrixPolynomial::identity(2), cdouble(0.3, 4.0)) - I).norm(), 0.0);
    auto P = MatrixPolynomial::from_double({CMatrix(-I), I});
    EXPECT_LE(eval_poly(P, 1.0).norm(), 0.0);
    auto N = MatrixPolynomial::from_double({scalar(-1.5), scalar(0.5)});
    EXPECT_EQ(eval_poly(N, 1.0)(0, 0), cdouble(-1.0));
}

TEST(PolyFilter, EvalFilter)
{
    EXPECT_NEAR(std::abs(eval_filter(scalar_example(), 0.0)(0, 0) + 1.0), 0.0, 1e-15);
    auto id = AllPassFilter::identity(3);
    for (double w : {-3.0, 0.0, 1.0})
        EXPECT_LE((eval_filter(id, w) - CMatrix::Identity(3, 3)).norm(), 0.0);
    for (double w : uniform_circle_grid(16))
    {
        const cdouble z = unit_phasor(w);
        EXPECT_NEAR(std::abs(eval_filter(scalar_example(), w)(0, 0) - (z - 3.0) / (3.0 * z - 1.0)), 0.0, 1e-15);
    }
}

TEST(PolyFilter, SingularDenominatorDetected)
{
    AllPassFilter f{MatrixPolynomial::identity(1), MatrixPolynomial::from_double({scalar(-1.0), scalar(1.0)}), {},
                    std::nullopt};
    try
    {
        eval_filter(f, 0.0);
        FAIL();
    }
    catch (const Error &e)
    {
        EXPECT_EQ(e.code(), ErrorCode::singular_denominator);
    }
}

TEST(PolyFilter, GroupDelayExamples)
{
    auto g = group_delay(scalar_example(), 0.0);
    EXPECT_NEAR(std::abs(g.F(0, 0) - 2.0), 0.0, 1e-14);
    for (double w : uniform_circle_grid(8))
    {
        const cdouble z = unit_phasor(w);
        const double oracle = 8.0 / std::norm(3.0 * z - 1.0);
        EXPECT_NEAR(group_delay(scalar_example(), w).F(0, 0).real(), oracle, 1e-13);
    }
    EXPECT_LE(group_delay(AllPassFilter::identity(2), 0.7).F.norm(), 0.0);
}

TEST(PolyFilter, GroupDelayMatchesFiniteDifference)
{
    std::mt19937_64 rng(31);
    for (int s = 0; s < 10; ++s)
    {
        auto ds = random_dominant_set(2, spread_frequencies(3, rng), rng);
        auto f = design_allpass(ds);
        for (double w : {-2.9, -1.3, 0.05, 1.7, 2.6})
        {
            auto g = group_delay(f, w);
            CMatrix fd = finite_difference_delay(f, w);
            const double scale = std::max(1.0, g.F.cwiseAbs().maxCoeff());
            EXPECT_LE((g.F - fd).cwiseAbs().maxCoeff(), 1e-5 * scale);
            EXPECT_LE(g.skew_norm, 1e-8 * scale);
        }
    }
}

TEST(PolyFilter, UnitarityDeviation)
{
    EXPECT_EQ(unitarity_deviation(AllPassFilter::identity(2), 64), 0.0);
    EXPECT_LE(unitarity_deviation(scalar_example(), 1024), 1e-12);
    auto bad = scalar_example();
    auto c = bad.N.coeffs_double();
    c[0](0, 0) += 0.1;
    bad.N = MatrixPolynomial::from_double(c);
    EXPECT_GT(unitarity_deviation(bad, 1024), 1e-3);
}

TEST(PolyFilter, UniformGridAndPoles)
{
    auto g = uniform_circle_grid(4);
    ASSERT_EQ(g.size(), 4u);
    EXPECT_NEAR(g[0], -pi / 2, 1e-15);
    EXPECT_NEAR(g[3], pi, 1e-15);
    EXPECT_NEAR(pole_radius(scalar_example()), 1.0 / 3.0, 1e-14);
    EXPECT_EQ(pole_radius(AllPassFilter::identity(2)), 0.0);
}

TEST(PolyFilter, ImpulseResponseByHand)
{
    VectorSignal x(1, 6);
    x.at(0, 0) = 1.0;
    auto r = lccde_filter(scalar_example(), x);
    EXPECT_FALSE(r.unstable);
    const double expect[] = {1.0 / 3, -8.0 / 9, -8.0 / 27, -8.0 / 81, -8.0 / 243, -8.0 / 729};
    for (int t = 0; t < 6; ++t)
        EXPECT_NEAR(std::abs(r.output.at((size_t)t, 0) - expect[t]), 0.0, 1e-15);
}

TEST(PolyFilter, IdentityEchoesInput)
{
    std::mt19937_64 rng(32);
    auto x = white_noise(3, 50, rng);
    auto y = lccde_filter(AllPassFilter::identity(3), x).output;
    for (size_t t = 0; t < x.length(); ++t)
        EXPECT_LE((y.sample(t) - x.sample(t)).norm(), 0.0);
}

TEST(PolyFilter, MatchesFrequencyDomainOracle)
{
    std::mt19937_64 rng(33);
    for (int m : {1, 2})
    {
        auto f = stable_filter(m, 3, 0.95, rng);
        auto x = white_noise(m, 512, rng);
        auto y = lccde_filter(f, x).output;
        auto ref = frequency_domain_filter(f, x, 4096);
        double err = 0.0;
        for (size_t t = 4 * (size_t)f.degree(); t < x.length(); ++t)
            err = std::max(err, (y.sample(t) - ref.sample(t)).norm());
        EXPECT_LE(err, 1e-6) << "m = " << m;
    }
}

TEST(PolyFilter, Linearity)
{
    std::mt19937_64 rng(34);
    auto f = stable_filter(2, 3, 0.99, rng);
    auto x1 = white_noise(2, 300, rng), x2 = white_noise(2, 300, rng);
    const cdouble a(0.7, -1.1), b(-2.0, 0.3);
    VectorSignal mix(2, 300);
    for (size_t t = 0; t < 300; ++t)
        mix.set_sample(t, a * x1.sample(t) + b * x2.sample(t));
    auto y1 = lccde_filter(f, x1).output, y2 = lccde_filter(f, x2).output, y = lccde_filter(f, mix).output;
    for (size_t t = 0; t < 300; ++t)
        EXPECT_LE((y.sample(t) - a * y1.sample(t) - b * y2.sample(t)).norm(), 1e-10);
}

TEST(PolyFilter, NormPreservedForStableFilters)
{
    std::mt19937_64 rng(35);
    for (int m : {1, 2, 3})
    {
        auto f = stable_filter(m, 3, 0.95, rng);
        auto x = white_noise(m, 20000, rng);
        auto y = lccde_filter(f, x).output;
        const double ratio = std::sqrt(y.energy() / x.energy());
        EXPECT_NEAR(ratio, 1.0, 1e-3) << "m = " << m;
    }
}

TEST(PolyFilter, SingularLeadingCoefficientRefused)
{
    CMatrix lead = CMatrix::Identity(2, 2);
    lead(1, 1) = 0.0;
    AllPassFilter f{MatrixPolynomial::identity(2),
                    MatrixPolynomial::from_double({CMatrix(CMatrix::Identity(2, 2)), lead}), {}, std::nullopt};
    try
    {
        lccde_filter(f, VectorSignal(2, 4));
        FAIL();
    }
    catch (const Error &e)
    {
        EXPECT_EQ(e.code(), ErrorCode::singular_leading_coefficient);
    }
}

TEST(PolyFilter, UnstableFilterFlagged)
{
    AllPassFilter f{MatrixPolynomial::from_double({scalar(1.0), scalar(-2.0)}),
                    MatrixPolynomial::from_double({scalar(-2.0), scalar(1.0)}), {}, std::nullopt};
    EXPECT_LE(unitarity_deviation(f, 256), 1e-14);
    VectorSignal x(1, 8);
    x.at(0, 0) = 1.0;
    auto r = lccde_filter(f, x);
    EXPECT_TRUE(r.unstable);
    EXPECT_NEAR(r.spectral_radius, 2.0, 1e-12);
}

TEST(PolyFilter, DerotatedFilterAppliesConstantOnInput)
{
    std::mt19937_64 rng(36);
    auto f = stable_filter(2, 2, 0.95, rng);
    f.derotation = random_unitary(2, rng);
    auto x = white_noise(2, 256, rng);
    auto y = lccde_filter(f, x).output;
    auto ref = frequency_domain_filter(f, x, 4096);
    for (size_t t = 4 * (size_t)f.degree(); t < x.length(); ++t)
        EXPECT_LE((y.sample(t) - ref.sample(t)).norm(), 1e-6);
}
