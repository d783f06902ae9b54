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

#include <cstdlib>

using namespace allpass;
using namespace allpass::test;

namespace
{
    PowerDelayProfile single_tap()
    {
        PowerDelayProfile p;
        p.delays = {0};
        p.powers_db = {0.0};
        return p;
    }

    bool invalid(const ComparisonConfig &c)
    {
        try
        {
            c.validate();
        }
        catch (const Error &e)
        {
            return e.code() == ErrorCode::invalid_argument;
        }
        return false;
    }
}

TEST(Experiments, VehicularAProfile)
{
    auto p = PowerDelayProfile::vehicular_a();
    ASSERT_EQ(p.delays.size(), 6u);
    EXPECT_EQ(p.delays, (std::vector<int>{0, 3, 7, 11, 17, 25}));
    auto lin = p.linear_powers();
    double sum = 0.0;
    for (double v : lin)
        sum += v;
    EXPECT_NEAR(sum, 1.0, 1e-12);
    EXPECT_NEAR(lin[1] / lin[0], std::pow(10.0, -0.1), 1e-12);
}

TEST(Experiments, SingleTapEnergy)
{
    for (int m : {1, 2, 4})
    {
        double acc = 0.0;
        const int draws = 10000;
        for (int s = 0; s < draws; ++s)
            acc += gen_channel(single_tap(), m, (std::uint64_t)s).taps[0].squaredNorm();
        EXPECT_NEAR(acc / draws, (double)(m * m), 0.05 * m * m);
    }
}

TEST(Experiments, ChannelDeterministic)
{
    auto a = gen_channel(PowerDelayProfile::vehicular_a(), 3, 17);
    auto b = gen_channel(PowerDelayProfile::vehicular_a(), 3, 17);
    auto c = gen_channel(PowerDelayProfile::vehicular_a(), 3, 18);
    ASSERT_EQ(a.taps.size(), b.taps.size());
    for (size_t l = 0; l < a.taps.size(); ++l)
        EXPECT_EQ((a.taps[l] - b.taps[l]).norm(), 0.0);
    EXPECT_GT((a.taps[0] - c.taps[0]).norm(), 0.0);
}

TEST(Experiments, FrequencyResponse)
{
    auto ch = gen_channel(single_tap(), 2, 3);
    for (double w : {-2.0, 0.0, 1.0})
        EXPECT_LE((channel_freq_response(ch, w) - ch.taps[0]).norm(), 0.0);

    ChannelRealization delay;
    delay.taps = {CMatrix::Identity(2, 2)};
    delay.delays = {1};
    for (double w : {-2.0, 0.5, 3.0})
        EXPECT_LE((channel_freq_response(delay, w) - unit_phasor(-w) * CMatrix::Identity(2, 2)).norm(), 1e-15);

    auto veh = gen_channel(PowerDelayProfile::vehicular_a(), 3, 5);
    CMatrix sum = CMatrix::Zero(3, 3);
    for (const auto &h : veh.taps)
        sum += h;
    EXPECT_LE((channel_freq_response(veh, 0.0) - sum).norm(), 1e-14);
}

TEST(Experiments, PrecoderTrackIdentity)
{
    ChannelRealization ch;
    ch.taps = {CMatrix::Identity(2, 2)};
    ch.delays = {0};
    auto tr = svd_precoder_track(ch, comparison_grid(33, {}));
    for (const auto &s : tr.samples)
        EXPECT_LE((s.U - CMatrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(Experiments, PrecoderTrackDiagonalChannel)
{
    ChannelRealization ch;
    CMatrix h0 = CMatrix::Zero(2, 2), h1 = CMatrix::Zero(2, 2);
    h0(1, 1) = 1.0;
    h1(0, 0) = 2.0;
    ch.taps = {h0, h1};
    ch.delays = {0, 1};
    auto tr = svd_precoder_track(ch, comparison_grid(65, {}));
    EXPECT_FALSE(tr.any_degenerate);
    for (size_t k = 1; k < tr.samples.size(); ++k)
        EXPECT_LE(flag_distance(tr.samples[k].U, tr.samples[k - 1].U), 1e-9);
}

TEST(Experiments, AlignmentNeverHurts)
{
    auto grid = comparison_grid(129, {});
    for (std::uint64_t seed = 0; seed < 10; ++seed)
    {
        auto ch = gen_channel(PowerDelayProfile::vehicular_a(), 2, seed);
        auto aligned = svd_precoder_track(ch, grid, true);
        auto raw = svd_precoder_track(ch, grid, false);
        for (size_t k = 1; k < grid.size(); ++k)
        {
            EXPECT_LE(frobenius_error(aligned.samples[k].U, aligned.samples[k - 1].U),
                      frobenius_error(raw.samples[k].U, aligned.samples[k - 1].U) + 1e-12);
            EXPECT_NEAR(flag_distance(aligned.samples[k].U, aligned.samples[k - 1].U),
                        flag_distance(raw.samples[k].U, raw.samples[k - 1].U), 1e-9);
        }
    }
}

TEST(Experiments, GridContainsPoints)
{
    auto pts = six_point_frequencies();
    EXPECT_NEAR(pts[0], -0.99 * pi, 1e-15);
    EXPECT_NEAR(pts[5], 0.99 * pi, 1e-15);
    auto g = comparison_grid(257, pts);
    EXPECT_EQ(g.size(), 257u + 6u);
    EXPECT_TRUE(std::is_sorted(g.begin(), g.end()));
    EXPECT_GT(g.front(), -pi);
    EXPECT_LE(g.back(), pi);
    for (double w : pts)
        EXPECT_NE(std::find(g.begin(), g.end(), w), g.end());
}

TEST(Experiments, ConfigValidation)
{
    ComparisonConfig c;
    c.methods.clear();
    EXPECT_TRUE(invalid(c));
    c = {};
    c.methods = {"snip_optimized", "givens"};
    EXPECT_TRUE(invalid(c));
    c = {};
    c.methods = {"geodesic", "geodesic"};
    EXPECT_TRUE(invalid(c));
    c = {};
    c.n_seeds = 0;
    EXPECT_TRUE(invalid(c));
    c = {};
    c.point_omegas = {0.1, 0.2};
    EXPECT_TRUE(invalid(c));
}

TEST(Experiments, FlatChannelNearZeroEverywhere)
{
    ComparisonConfig c;
    c.n_seeds = 20;
    c.pdp = single_tap();
    auto r = run_comparison(c);
    ASSERT_EQ(r.methods.size(), 2u);
    for (const auto &mc : r.methods)
    {
        EXPECT_EQ(mc.failures, 0) << mc.method;
        for (size_t g = 0; g < r.grid.size(); ++g)
        {
            EXPECT_LE(mc.flag_median[g], 1e-6) << mc.method << " at " << r.grid[g];
            EXPECT_LE(mc.flag_mean[g], 1e-6) << mc.method << " at " << r.grid[g];
        }
    }
}

TEST(Experiments, SingleMethodReport)
{
    ComparisonConfig c;
    c.n_seeds = 3;
    c.methods = {"geodesic"};
    auto r = run_comparison(c);
    ASSERT_EQ(r.methods.size(), 1u);
    EXPECT_EQ(r.methods[0].method, "geodesic");
    EXPECT_EQ(r.methods[0].flag_median.size(), r.grid.size());
    EXPECT_EQ(r.methods[0].frob_median.size(), r.grid.size());
}

TEST(Experiments, DefaultConfigurationTouchesAtPoints)
{
    ComparisonConfig c;
    c.n_seeds = 100;
    auto r = run_comparison(c);
    ASSERT_EQ(r.methods.size(), 2u);
    const auto &snip = r.methods[0];
    const auto &geo = r.methods[1];
    EXPECT_EQ(snip.method, "snip_optimized");
    EXPECT_EQ(snip.failures, 0);
    EXPECT_LE(snip.max_flag_at_points, 1e-8);
    for (int idx : r.point_indices)
    {
        EXPECT_LE(snip.flag_median[(size_t)idx], 1e-8);
        EXPECT_LE(geo.flag_median[(size_t)idx], 1e-8);
    }
    size_t off_points = 0;
    for (size_t g = 0; g < r.grid.size(); ++g)
        if (std::find(r.point_indices.begin(), r.point_indices.end(), (int)g) == r.point_indices.end() &&
            geo.flag_median[g] > 1e-8)
            ++off_points;
    EXPECT_EQ(off_points, r.grid.size() - r.point_indices.size());
    EXPECT_LE(snip.pooled_flag_median, 2.0 * geo.pooled_flag_median);
}

TEST(Experiments, DeterministicAcrossThreadCounts)
{
    ComparisonConfig c;
    c.n_seeds = 12;
    c.seed = 77;
    c.threads = 1;
    auto a = run_comparison(c);
    c.threads = 4;
    auto b = run_comparison(c);
    ASSERT_EQ(a.methods.size(), b.methods.size());
    for (size_t i = 0; i < a.methods.size(); ++i)
    {
        EXPECT_EQ(a.methods[i].flag_mean, b.methods[i].flag_mean);
        EXPECT_EQ(a.methods[i].flag_median, b.methods[i].flag_median);
        EXPECT_EQ(a.methods[i].frob_mean, b.methods[i].frob_mean);
        EXPECT_EQ(a.methods[i].frob_median, b.methods[i].frob_median);
    }
}

TEST(Experiments, FailureRateOverThousandSeeds)
{
    ComparisonConfig c;
    c.n_seeds = 1000;
    c.grid_size = 17;
    c.methods = {"snip_optimized"};
    auto r = run_comparison(c);
    EXPECT_LE(r.methods[0].failure_rate, 0.01);
    EXPECT_LE(r.methods[0].max_flag_at_points, 1e-8);
}

TEST(Experiments, BenchRowsAndRatios)
{
    BenchConfig c;
    c.m_list = {2, 7};
    c.repetitions = 50;
    auto rows = bench_timing(c);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[2].m, 7);
    EXPECT_EQ(rows[3].m, 7);
    EXPECT_EQ(rows[0].method, "snip_eval");
    EXPECT_EQ(rows[1].method, "geodesic_eval");
    for (const auto &r : rows)
    {
        EXPECT_GT(r.mean_ms, 0.0);
        EXPECT_EQ(r.repetitions, 50);
    }
}

TEST(Experiments, BenchRatioStableWhenRepetitionsDouble)
{
    auto ratio_of = [](int reps) {
        BenchConfig c;
        c.m_list = {4};
        c.repetitions = reps;
        std::vector<double> r;
        for (int trial = 0; trial < 5; ++trial)
            r.push_back(bench_timing(c)[1].ratio_to_snip);
        std::nth_element(r.begin(), r.begin() + 2, r.end());
        return r[2];
    };
    const double a = ratio_of(2000), b = ratio_of(4000);
    EXPECT_NEAR(b / a, 1.0, 0.2);
}

TEST(Experiments, ThreadCountResolution)
{
    EXPECT_EQ(resolve_thread_count(3), 3);
    setenv("ALLPASS_THREADS", "2", 1);
    EXPECT_EQ(resolve_thread_count(0), 2);
    unsetenv("ALLPASS_THREADS");
    EXPECT_GE(resolve_thread_count(0), 1);
}
