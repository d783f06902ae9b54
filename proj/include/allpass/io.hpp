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

#ifndef ALLPASS_IO_HPP
#define ALLPASS_IO_HPP

#include "allpass/construct.hpp"
#include "allpass/experiments.hpp"
#include "allpass/gdopt.hpp"
#include "allpass/pickmat.hpp"
#include "allpass/polyfilter.hpp"

#include <string>
#include <vector>

namespace allpass::io
{
    std::string read_file(const std::string &path);
    void write_file(const std::string &path, const std::string &content);

    // "%.16e"
    std::string format_double(double v);

    // {"m":2,"points":[{"omega":w,"A":M,"gamma":M|null}]}, complex entries as [re, im]
    std::vector<InterpolationPoint> parse_dataset(const std::string &text);
    std::string dataset_to_json(const std::vector<InterpolationPoint> &points);

    // {"m":2,"degree":d,"N":[C0..Cd],"D":[C0..Cd],"derotation":C|null}; 21 significant digits
    std::string filter_to_json(const AllPassFilter &f);
    AllPassFilter parse_filter(const std::string &text);

    struct GdoptInput
    {
        std::vector<double> omegas;
        std::vector<CMatrix> As;
    };

    // {"omegas":[...],"As":[M...]} or a data-set document
    GdoptInput parse_gdopt_input(const std::string &text);
    std::string gamma_assignment_to_json(const GammaAssignment &g);

    std::string pick_to_json(const PickMatrix &P);

    PowerDelayProfile parse_pdp(const std::string &text);
    BarrierConfig parse_barrier_config(const std::string &text);
    ComparisonConfig parse_comparison_config(const std::string &text);
    BenchConfig parse_bench_config(const std::string &text);

    // method,metric,omega,mean,median
    std::string report_to_csv(const ComparisonReport &r);
    std::string report_summary_json(const ComparisonReport &r);

    std::string timing_to_csv(const std::vector<TimingRow> &rows);
    std::string timing_summary_json(const BenchConfig &cfg, const std::vector<TimingRow> &rows);

    // t,re_1,im_1,...,re_m,im_m; a non-numeric first line is treated as a header
    VectorSignal parse_signal_csv(const std::string &text);
    std::string signal_to_csv(const VectorSignal &x);
}

#endif
