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
    const std::vector<double> two_omegas{0.0, pi / 2};
    const std::vector<CMatrix> two_As{scalar(1.0), scalar(-1.0)};

    double trace_of(const std::vector<CMatrix> &gs)
    {
        double t = 0.0;
        for (const auto &g : gs)
            t += g.trace().real();
        return t;
    }
}

TEST(Gdopt, SinglePointBarrierOptimum)
{
    BarrierConfig cfg;
    cfg.newton_tol = 1e-24;
    auto g = optimize_group_delays({0.3}, {scalar(cdouble(0, 1))}, cfg);
    ASSERT_EQ(g.gammas.size(), 1u);
    EXPECT_TRUE(g.converged);
    EXPECT_NEAR(g.final_mu, cfg.mu_final, 1e-15);
    EXPECT_NEAR(g.gammas[0](0, 0).real(), cfg.mu_final + cfg.pd_margin, 1e-9);
}

TEST(Gdopt, ScalarTwoPointCentralPath)
{
    BarrierConfig cfg;
    auto g = optimize_group_delays(two_omegas, two_As, cfg);
    EXPECT_TRUE(g.converged);
    EXPECT_NEAR(g.achieved_trace, 2 * std::sqrt(2.0), 1e-2);
    const double mu = g.final_mu;
    const double central = (mu + std::sqrt(mu * mu + 8)) / 2 + cfg.pd_margin;
    for (const auto &G : g.gammas)
        EXPECT_NEAR(G(0, 0).real(), central, 1e-8);
    EXPECT_GT(g.pd_witness, cfg.pd_margin);
}

TEST(Gdopt, IdenticalResponsesDecouple)
{
    std::mt19937_64 rng(41);
    CMatrix A = random_unitary(2, rng);
    BarrierConfig cfg;
    cfg.newton_tol = 1e-24;
    auto g = optimize_group_delays({-2.0, -0.5, 1.0, 2.5}, {A, A, A, A}, cfg);
    for (const auto &G : g.gammas)
        EXPECT_LE((G - (cfg.mu_final + cfg.pd_margin) * CMatrix::Identity(2, 2)).norm(), 1e-8);
}

TEST(Gdopt, FeasibleInitialization)
{
    const double margin = 1e-6;
    auto one = feasible_initialization({0.2}, {scalar(1.0)}, margin);
    EXPECT_NEAR(one[0](0, 0).real(), margin + 1, 1e-15);

    auto two = feasible_initialization(two_omegas, two_As, margin);
    for (const auto &G : two)
        EXPECT_NEAR(G(0, 0).real(), std::sqrt(2.0) + margin + 1, 1e-14);

    std::mt19937_64 rng(42);
    for (int s = 0; s < 20; ++s)
    {
        auto w = six_point_frequencies();
        std::vector<CMatrix> As;
        for (size_t i = 0; i < w.size(); ++i)
            As.push_back(random_unitary(2, rng));
        auto G0 = feasible_initialization(w, As, margin);
        std::vector<InterpolationPoint> pts;
        for (size_t i = 0; i < w.size(); ++i)
            pts.push_back(point(w[i], As[i], G0[i]));
        EXPECT_TRUE(is_positive_definite(build_pick(validate_dataset(pts))).positive_definite);
    }
}

TEST(Gdopt, GradientMatchesFiniteDifference)
{
    std::mt19937_64 rng(43);
    for (int s = 0; s < 5; ++s)
    {
        auto w = spread_frequencies(4, rng);
        std::vector<CMatrix> As;
        for (size_t i = 0; i < w.size(); ++i)
            As.push_back(random_unitary(2, rng));
        BarrierProblem prob(w, As, 1e-6);
        auto gam = feasible_initialization(w, As, 1e-6);
        const double mu = 0.3;
        auto grad = prob.gradient(gam, mu);
        for (size_t i = 0; i < gam.size(); ++i)
        {
            CMatrix dir = random_hpd(2, -1.0, 1.0, rng);
            const double h = 1e-6;
            auto plus = gam, minus = gam;
            plus[i] += h * dir;
            minus[i] -= h * dir;
            const double fd = (prob.objective(plus, mu) - prob.objective(minus, mu)) / (2 * h);
            const double an = (grad[i] * dir).trace().real();
            EXPECT_NEAR(an, fd, 1e-5 * std::max(1.0, std::abs(fd)));
        }
    }
}

TEST(Gdopt, NewtonDirectionDescends)
{
    std::mt19937_64 rng(44);
    auto w = six_point_frequencies();
    std::vector<CMatrix> As;
    for (size_t i = 0; i < w.size(); ++i)
        As.push_back(random_unitary(3, rng));
    BarrierProblem prob(w, As, 1e-6);
    auto gam = feasible_initialization(w, As, 1e-6);
    double dec = 0.0;
    auto dir = prob.newton_direction(gam, 0.5, dec);
    auto grad = prob.gradient(gam, 0.5);
    double slope = 0.0;
    for (size_t i = 0; i < gam.size(); ++i)
    {
        EXPECT_LE(hermitian_defect(dir[i]), 1e-10 * std::max(1.0, dir[i].norm()));
        slope += (grad[i] * dir[i]).trace().real();
    }
    EXPECT_GT(dec, 0.0);
    EXPECT_NEAR(slope, -dec, 1e-8 * std::max(1.0, dec));
    EXPECT_EQ(prob.objective(std::vector<CMatrix>(gam.size(), CMatrix::Zero(3, 3)), 0.5),
              std::numeric_limits<double>::infinity());
}

TEST(Gdopt, TraceMonotoneAndIteratesFeasible)
{
    std::mt19937_64 rng(45);
    for (int s = 0; s < 10; ++s)
    {
        auto w = six_point_frequencies();
        std::vector<CMatrix> As;
        for (size_t i = 0; i < w.size(); ++i)
            As.push_back(random_unitary(2, rng));
        BarrierConfig cfg;
        auto g = optimize_group_delays(w, As, cfg);
        EXPECT_TRUE(g.converged);
        ASSERT_FALSE(g.trace_history.empty());
        for (size_t k = 1; k < g.trace_history.size(); ++k)
            EXPECT_LE(g.trace_history[k], g.trace_history[k - 1] + 1e-10);
        EXPECT_NEAR(trace_of(g.gammas), g.achieved_trace, 1e-10);
        EXPECT_GT(g.pd_witness, cfg.pd_margin);
        BarrierProblem prob(w, As, cfg.pd_margin);
        EXPECT_GT(min_hermitian_eigenvalue(prob.assemble(g.gammas)), cfg.pd_margin);
    }
}

TEST(Gdopt, OutputAlwaysDesignable)
{
    std::mt19937_64 rng(46);
    for (int s = 0; s < 24; ++s)
    {
        const int m = 1 + s % 4;
        auto ds = random_optimized_set(m, spread_frequencies(2 + s % 5, rng), rng);
        EXPECT_TRUE(is_positive_definite(build_pick(ds)).positive_definite);
        AllPassFilter f;
        ASSERT_NO_THROW(f = design_allpass(ds));
        EXPECT_LE(max_interp_error(f, ds), 1e-8);
    }
}

TEST(Gdopt, ConfigValidation)
{
    auto bad = [](BarrierConfig c) {
        try
        {
            c.validate();
        }
        catch (const Error &e)
        {
            return e.code() == ErrorCode::invalid_argument;
        }
        return false;
    };
    BarrierConfig c;
    c.mu_decay = 1.0;
    EXPECT_TRUE(bad(c));
    c = {};
    c.mu_final = 0.0;
    EXPECT_TRUE(bad(c));
    c = {};
    c.pd_margin = -1.0;
    EXPECT_TRUE(bad(c));
    c = {};
    c.mu_init = 1e-6;
    EXPECT_TRUE(bad(c));
}
