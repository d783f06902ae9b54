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

#include "allpass/io.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

using namespace allpass;
using namespace allpass::test;

namespace
{
    ErrorCode code_of(const std::function<void()> &fn)
    {
        try
        {
            fn();
        }
        catch (const Error &e)
        {
            return e.code();
        }
        return ErrorCode::ok;
    }
}

TEST(Io, DatasetRoundTrip)
{
    std::mt19937_64 rng(61);
    auto ds = random_dominant_set(2, {-1.0, 0.5, 2.0}, rng);
    auto raw = ds.raw_points();
    raw[1].gamma.reset();
    auto back = io::parse_dataset(io::dataset_to_json(raw));
    ASSERT_EQ(back.size(), raw.size());
    for (size_t i = 0; i < raw.size(); ++i)
    {
        EXPECT_EQ(back[i].omega, raw[i].omega);
        EXPECT_EQ((back[i].A - raw[i].A).norm(), 0.0);
        EXPECT_EQ(back[i].gamma.has_value(), raw[i].gamma.has_value());
        if (raw[i].gamma)
            EXPECT_EQ((*back[i].gamma - *raw[i].gamma).norm(), 0.0);
    }
}

TEST(Io, DatasetFormat)
{
    auto pts = io::parse_dataset(R"({"m":2,"points":[{"omega":0.628,"A":[[[1,0],[0,0]],[[0,0],[0,1]]],"gamma":null}]})");
    ASSERT_EQ(pts.size(), 1u);
    EXPECT_EQ(pts[0].A(1, 1), cdouble(0, 1));
    EXPECT_FALSE(pts[0].gamma.has_value());
    EXPECT_EQ(code_of([] { io::parse_dataset(R"({"m":1,"points":[],"extra":1})"); }), ErrorCode::parse_error);
    EXPECT_EQ(code_of([] { io::parse_dataset(R"({"m":1,"points":[{"omega":0,"A":[[[1,0]]],"G":1}]})"); }),
              ErrorCode::parse_error);
    EXPECT_EQ(code_of([] { io::parse_dataset("{not json"); }), ErrorCode::parse_error);
    EXPECT_EQ(code_of([] { io::parse_dataset(R"({"m":2,"points":[{"omega":0,"A":[[[1,0]]]}]})"); }),
              ErrorCode::dimension_mismatch);
}

TEST(Io, FilterRoundTripIsExactInLongDouble)
{
    std::mt19937_64 rng(62);
    auto f = design_allpass(random_optimized_set(2, six_point_frequencies(), rng));
    f.derotation = random_unitary(2, rng);
    auto g = io::parse_filter(io::filter_to_json(f));
    ASSERT_EQ(g.degree(), f.degree());
    ASSERT_TRUE(g.derotation.has_value());
    for (int k = 0; k <= f.degree(); ++k)
    {
        EXPECT_LE((double)(g.N[k] - f.N[k]).norm(), 1e-19 * (double)f.N[k].norm() + 1e-300);
        EXPECT_LE((double)(g.D[k] - f.D[k]).norm(), 1e-19 * (double)f.D[k].norm() + 1e-300);
    }
    for (double w : f.interp_omegas)
        EXPECT_LE((eval_filter(g, w) - eval_filter(f, w)).norm(), 1e-12);
}

TEST(Io, FilterDocumentShape)
{
    auto j = nlohmann::json::parse(io::filter_to_json(base_filter(0.0, scalar(-1.0), scalar(2.0))));
    EXPECT_EQ(j.at("m"), 1);
    EXPECT_EQ(j.at("degree"), 1);
    EXPECT_EQ(j.at("N").size(), 2u);
    EXPECT_TRUE(j.at("derotation").is_null());
    EXPECT_NEAR(j.at("N")[1][0][0][0].get<double>(), 0.5, 1e-15);
    EXPECT_EQ(code_of([] { io::parse_filter(R"({"m":1})"); }), ErrorCode::parse_error);
    EXPECT_NE(code_of([] {
                  io::parse_filter(R"({"m":1,"degree":3,"N":[[[[1,0]]]],"D":[[[[1,0]]]],"derotation":null})");
              }),
              ErrorCode::ok);
}

TEST(Io, GdoptInputForms)
{
    auto a = io::parse_gdopt_input(R"({"omegas":[0,1.5707963267948966],"As":[[[[1,0]]],[[[-1,0]]]]})");
    ASSERT_EQ(a.omegas.size(), 2u);
    EXPECT_EQ(a.As[1](0, 0), cdouble(-1.0));
    auto b = io::parse_gdopt_input(R"({"m":1,"points":[{"omega":0.5,"A":[[[0,1]]],"gamma":null}]})");
    ASSERT_EQ(b.omegas.size(), 1u);
    EXPECT_EQ(b.As[0](0, 0), cdouble(0, 1));
    auto g = optimize_group_delays(a.omegas, a.As);
    auto j = nlohmann::json::parse(io::gamma_assignment_to_json(g));
    EXPECT_NEAR(j.at("achieved_trace").get<double>(), g.achieved_trace, 0.0);
    EXPECT_TRUE(j.contains("pd_witness"));
    EXPECT_EQ(j.at("gammas").size(), 2u);
}

TEST(Io, ConfigParsing)
{
    auto c = io::parse_comparison_config(
        R"({"m":3,"n_seeds":7,"methods":["geodesic"],"pdp":{"profile":"vehicular_a"},"barrier":{"mu_final":1e-3}})");
    EXPECT_EQ(c.m, 3);
    EXPECT_EQ(c.n_seeds, 7);
    EXPECT_EQ(c.methods, std::vector<std::string>{"geodesic"});
    EXPECT_EQ(c.barrier.mu_final, 1e-3);
    EXPECT_TRUE(c.design.anchor_at_pi);
    EXPECT_EQ(code_of([] { io::parse_comparison_config(R"({"methods":[]})"); }), ErrorCode::invalid_argument);
    EXPECT_EQ(code_of([] { io::parse_comparison_config(R"({"unknown":1})"); }), ErrorCode::parse_error);

    auto p = io::parse_pdp(R"({"delays_ns":[0,310,710],"powers_db":[0,-1,-9],"sample_rate_hz":10e6})");
    EXPECT_EQ(p.delays, (std::vector<int>{0, 3, 7}));
    auto q = io::parse_pdp(R"({"delays":[0,2],"powers_db":[0,-3]})");
    EXPECT_EQ(q.delays, (std::vector<int>{0, 2}));

    auto b = io::parse_bench_config(R"({"m_list":[2,7],"repetitions":10})");
    EXPECT_EQ(b.m_list, (std::vector<int>{2, 7}));
    EXPECT_EQ(b.repetitions, 10);
}

TEST(Io, SignalCsv)
{
    VectorSignal x(2, 3);
    x.at(0, 0) = cdouble(1.0, -2.0);
    x.at(2, 1) = cdouble(0.1, 1e-300);
    std::string csv = io::signal_to_csv(x);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,re_1,im_1,re_2,im_2");
    auto y = io::parse_signal_csv(csv);
    ASSERT_EQ(y.dim(), 2);
    ASSERT_EQ(y.length(), 3u);
    for (size_t t = 0; t < 3; ++t)
        EXPECT_EQ((y.sample(t) - x.sample(t)).norm(), 0.0);
    EXPECT_EQ(io::parse_signal_csv("0,1,0\n1,0,0\n").length(), 2u);
    EXPECT_EQ(code_of([] { io::parse_signal_csv("t,a,b\n0,1,x\n"); }), ErrorCode::parse_error);
    EXPECT_EQ(code_of([] { io::parse_signal_csv("0,1\n"); }), ErrorCode::parse_error);
}

TEST(Io, ReportCsvRows)
{
    ComparisonConfig c;
    c.n_seeds = 2;
    c.grid_size = 9;
    auto r = run_comparison(c);
    std::string csv = io::report_to_csv(r);
    size_t lines = (size_t)std::count(csv.begin(), csv.end(), '\n');
    EXPECT_EQ(lines, 1 + 2 * 2 * r.grid.size());
    auto j = nlohmann::json::parse(io::report_summary_json(r));
    EXPECT_EQ(j.at("methods").size(), 2u);
}

TEST(Io, NumbersUseSeventeenDigits)
{
    EXPECT_EQ(io::format_double(1.0 / 3.0), "3.3333333333333331e-01");
}
