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

#ifndef ALLPASS_EXPERIMENTS_HPP
#define ALLPASS_EXPERIMENTS_HPP

#include "allpass/baselines.hpp"
#include "allpass/construct.hpp"
#include "allpass/gdopt.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace allpass
{
    struct PowerDelayProfile
    {
        std::vector<int> delays; // samples
        std::vector<double> powers_db;

        // ITU Vehicular A at the given sample rate
        static PowerDelayProfile vehicular_a(double sample_rate_hz = 10e6);
        static PowerDelayProfile from_ns(const std::vector<double> &delays_ns, const std::vector<double> &powers_db,
                                         double sample_rate_hz);

        void validate() const;

        // Normalized to unit sum
        std::vector<double> linear_powers() const;
    };

    struct ChannelRealization
    {
        std::vector<CMatrix> taps;
        std::vector<int> delays;
        std::uint64_t seed = 0;
    };

    ChannelRealization gen_channel(const PowerDelayProfile &pdp, int m, std::uint64_t seed);

    // sum_l h_l e^{-j omega d_l}
    CMatrix channel_freq_response(const ChannelRealization &ch, double omega);

    struct PrecoderTrack
    {
        std::vector<UnitarySample> samples;
        std::vector<bool> degenerate; // singular-value gap below 1e-9
        bool any_degenerate = false;
    };

    // Right singular vectors per grid point, columns phase-aligned to the previous point
    PrecoderTrack svd_precoder_track(const ChannelRealization &ch, const std::vector<double> &grid, bool align = true);

    inline DesignOptions anchored_design_options()
    {
        DesignOptions d;
        d.anchor_at_pi = true;
        return d;
    }

    struct ComparisonConfig
    {
        int m = 2;
        int n_points = 6;
        std::vector<double> point_omegas; // empty: default set for n_points
        int grid_size = 257;
        int n_seeds = 100;
        std::uint64_t seed = 0;
        std::vector<std::string> methods{"snip_optimized", "geodesic"};
        PowerDelayProfile pdp = PowerDelayProfile::vehicular_a();
        BarrierConfig barrier;
        DesignOptions design = anchored_design_options();
        int threads = 0; // 0: ALLPASS_THREADS or hardware concurrency

        void validate() const;
        std::vector<double> resolved_point_omegas() const;
    };

    // {-0.99pi, -3pi/5, -pi/5, pi/5, 3pi/5, 0.99pi}
    std::vector<double> six_point_frequencies();

    // Midpoint grid of grid_size points in (-pi, pi] merged with the interpolation frequencies
    std::vector<double> comparison_grid(int grid_size, const std::vector<double> &point_omegas);

    struct MethodCurves
    {
        std::string method;
        std::vector<double> frob_mean, frob_median, flag_mean, flag_median;
        double pooled_flag_median = 0.0;
        double pooled_frob_median = 0.0;
        double max_flag_at_points = 0.0; // worst seed, interpolation frequencies
        int successes = 0;
        int failures = 0;
        double failure_rate = 0.0;
        int branch_ambiguities = 0;
    };

    struct TimingRow
    {
        std::string method;
        int m = 0;
        double mean_ms = 0.0;
        int repetitions = 0;
        double ratio_to_snip = 1.0; // mean_ms / snip mean_ms at the same m
    };

    struct ComparisonReport
    {
        ComparisonConfig config;
        std::vector<double> grid;
        std::vector<int> point_indices;
        std::vector<MethodCurves> methods;
        std::vector<TimingRow> timing;
        int degenerate_tracks = 0;
    };

    ComparisonReport run_comparison(const ComparisonConfig &cfg);

    struct BenchConfig
    {
        std::vector<int> m_list{2, 3, 4, 5, 6, 7};
        int n_points = 6;
        int repetitions = 200;
        std::uint64_t seed = 0;
        PowerDelayProfile pdp = PowerDelayProfile::vehicular_a();

        void validate() const;
    };

    // Per-evaluation cost of a prebuilt SNIP filter versus geodesic log/exp interpolation
    std::vector<TimingRow> bench_timing(const BenchConfig &cfg);

    // Explicit request, else ALLPASS_THREADS, else hardware concurrency
    int resolve_thread_count(int requested);
}

#endif
