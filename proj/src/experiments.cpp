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

#include "allpass/experiments.hpp"
#include "allpass/dataset.hpp"
#include "allpass/polyfilter.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <random>
#include <thread>

namespace allpass
{
    PowerDelayProfile PowerDelayProfile::from_ns(const std::vector<double> &delays_ns,
                                                 const std::vector<double> &powers_db, double sample_rate_hz)
    {
        if (delays_ns.size() != powers_db.size())
            throw Error(ErrorCode::invalid_argument, "delay and power lists differ in length");
        if (!(sample_rate_hz > 0.0))
            throw Error(ErrorCode::invalid_argument, "sample rate must be positive");
        PowerDelayProfile p;
        for (double d : delays_ns)
            p.delays.push_back((int)std::lround(d * 1e-9 * sample_rate_hz));
        p.powers_db = powers_db;
        p.validate();
        return p;
    }

    PowerDelayProfile PowerDelayProfile::vehicular_a(double sample_rate_hz)
    {
        return from_ns({0.0, 310.0, 710.0, 1090.0, 1730.0, 2510.0}, {0.0, -1.0, -9.0, -10.0, -15.0, -20.0},
                       sample_rate_hz);
    }

    void PowerDelayProfile::validate() const
    {
        if (delays.empty() || delays.size() != powers_db.size())
            throw Error(ErrorCode::invalid_argument, "power delay profile needs equal, non-empty delay and power lists");
        for (double p : powers_db)
            if (!std::isfinite(p))
                throw Error(ErrorCode::invalid_argument, "tap powers must be finite");
    }

    std::vector<double> PowerDelayProfile::linear_powers() const
    {
        validate();
        std::vector<double> p;
        for (double db : powers_db)
            p.push_back(std::pow(10.0, db / 10.0));
        double s = std::accumulate(p.begin(), p.end(), 0.0);
        for (auto &v : p)
            v /= s;
        return p;
    }

    ChannelRealization gen_channel(const PowerDelayProfile &pdp, int m, std::uint64_t seed)
    {
        if (m < 1)
            throw Error(ErrorCode::invalid_argument, "channel dimension must be positive");
        auto p = pdp.linear_powers();
        std::mt19937_64 rng(seed);
        ChannelRealization ch;
        ch.seed = seed;
        ch.delays = pdp.delays;
        for (double pl : p)
            ch.taps.push_back(std::sqrt(pl) * random_gaussian(m, m, rng));
        return ch;
    }

    CMatrix channel_freq_response(const ChannelRealization &ch, double omega)
    {
        if (ch.taps.empty() || ch.taps.size() != ch.delays.size())
            throw Error(ErrorCode::invalid_argument, "channel has no taps");
        CMatrix H = CMatrix::Zero(ch.taps.front().rows(), ch.taps.front().cols());
        for (size_t l = 0; l < ch.taps.size(); ++l)
            H += ch.taps[l] * unit_phasor(-omega * (double)ch.delays[l]);
        return H;
    }

    PrecoderTrack svd_precoder_track(const ChannelRealization &ch, const std::vector<double> &grid, bool align)
    {
        for (size_t i = 1; i < grid.size(); ++i)
            if (!(grid[i] > grid[i - 1]))
                throw Error(ErrorCode::invalid_argument, "grid must be strictly increasing");
        PrecoderTrack tr;
        tr.samples.reserve(grid.size());
        for (size_t g = 0; g < grid.size(); ++g)
        {
            CMatrix H = channel_freq_response(ch, grid[g]);
            Eigen::JacobiSVD<CMatrix> svd(H, Eigen::ComputeFullU | Eigen::ComputeFullV);
            CMatrix V = svd.matrixV();
            const auto &s = svd.singularValues();
            bool degenerate = false;
            for (Eigen::Index i = 1; i < s.size(); ++i)
                if (s(i - 1) - s(i) < 1e-9)
                    degenerate = true;
            if (align && g > 0)
            {
                const CMatrix &prev = tr.samples.back().U;
                for (Eigen::Index c = 0; c < V.cols(); ++c)
                {
                    cdouble ip = V.col(c).dot(prev.col(c));
                    double a = std::abs(ip);
                    if (a > 0.0)
                        V.col(c) *= ip / a;
                }
            }
            else if (align)
            {
                for (Eigen::Index c = 0; c < V.cols(); ++c)
                {
                    Eigen::Index r;
                    V.col(c).cwiseAbs().maxCoeff(&r);
                    cdouble v = V(r, c);
                    V.col(c) *= std::conj(v) / std::abs(v);
                }
            }
            tr.samples.push_back({grid[g], V});
            tr.degenerate.push_back(degenerate);
            tr.any_degenerate = tr.any_degenerate || degenerate;
        }
        return tr;
    }

    std::vector<double> six_point_frequencies()
    {
        return {-0.99 * pi, -3.0 * pi / 5.0, -pi / 5.0, pi / 5.0, 3.0 * pi / 5.0, 0.99 * pi};
    }

    std::vector<double> comparison_grid(int grid_size, const std::vector<double> &point_omegas)
    {
        if (grid_size < 2)
            throw Error(ErrorCode::invalid_argument, "grid size must be at least 2");
        std::vector<double> g;
        for (int k = 0; k < grid_size; ++k)
            g.push_back(-pi + 2.0 * pi * ((double)k + 0.5) / (double)grid_size);
        for (double w : point_omegas)
        {
            double ww = wrap_angle(w);
            auto it = std::find_if(g.begin(), g.end(), [ww](double v) { return std::abs(v - ww) < 1e-12; });
            if (it != g.end())
                *it = ww;
            else
                g.push_back(ww);
        }
        std::sort(g.begin(), g.end());
        return g;
    }

    void ComparisonConfig::validate() const
    {
        if (m < 1)
            throw Error(ErrorCode::invalid_argument, "m must be positive");
        if (n_points < 1)
            throw Error(ErrorCode::invalid_argument, "n_points must be positive");
        if (!point_omegas.empty() && (int)point_omegas.size() != n_points)
            throw Error(ErrorCode::invalid_argument, "point_omegas length must equal n_points");
        if (grid_size < 2)
            throw Error(ErrorCode::invalid_argument, "grid_size must be at least 2");
        if (n_seeds < 1)
            throw Error(ErrorCode::invalid_argument, "n_seeds must be positive");
        if (methods.empty())
            throw Error(ErrorCode::invalid_argument, "methods list is empty");
        for (size_t i = 0; i < methods.size(); ++i)
        {
            if (methods[i] != "snip_optimized" && methods[i] != "geodesic")
                throw Error(ErrorCode::invalid_argument, "unknown method '" + methods[i] + "'");
            for (size_t k = 0; k < i; ++k)
                if (methods[k] == methods[i])
                    throw Error(ErrorCode::invalid_argument, "method '" + methods[i] + "' listed twice");
        }
        pdp.validate();
        barrier.validate();
    }

    std::vector<double> ComparisonConfig::resolved_point_omegas() const
    {
        if (!point_omegas.empty())
            return point_omegas;
        if (n_points == 6)
            return six_point_frequencies();
        std::vector<double> w;
        for (int k = 0; k < n_points; ++k)
            w.push_back(-pi + pi * (2.0 * k + 1.0) / (double)n_points);
        return w;
    }

    int resolve_thread_count(int requested)
    {
        if (requested > 0)
            return requested;
        if (const char *env = std::getenv("ALLPASS_THREADS"))
        {
            int t = std::atoi(env);
            if (t > 0)
                return t;
        }
        unsigned hc = std::thread::hardware_concurrency();
        return hc > 0 ? (int)hc : 1;
    }

    namespace
    {
        struct SeedResult
        {
            // [method][grid]
            std::vector<std::vector<double>> frob, flag;
            std::vector<bool> ok;
            std::vector<int> ambiguous;
            std::vector<double> eval_seconds;
            std::vector<int> evaluations;
            bool degenerate_track = false;
        };

        double median_of(std::vector<double> v)
        {
            if (v.empty())
                return std::nan("");
            size_t h = v.size() / 2;
            std::nth_element(v.begin(), v.begin() + (long)h, v.end());
            double hi = v[h];
            if (v.size() % 2 == 1)
                return hi;
            double lo = *std::max_element(v.begin(), v.begin() + (long)h);
            return 0.5 * (lo + hi);
        }

        SeedResult run_seed(const ComparisonConfig &cfg, const std::vector<double> &grid,
                            const std::vector<int> &point_idx, std::uint64_t seed)
        {
            using clock = std::chrono::steady_clock;
            const size_t nm = cfg.methods.size();
            SeedResult r;
            r.frob.assign(nm, {});
            r.flag.assign(nm, {});
            r.ok.assign(nm, false);
            r.ambiguous.assign(nm, 0);
            r.eval_seconds.assign(nm, 0.0);
            r.evaluations.assign(nm, 0);

            auto ch = gen_channel(cfg.pdp, cfg.m, seed);
            auto track = svd_precoder_track(ch, grid, true);
            r.degenerate_track = track.any_degenerate;

            std::vector<double> omegas;
            std::vector<CMatrix> As;
            for (int i : point_idx)
            {
                omegas.push_back(grid[(size_t)i]);
                As.push_back(track.samples[(size_t)i].U);
            }

            for (size_t mi = 0; mi < nm; ++mi)
            {
                const std::string &method = cfg.methods[mi];
                std::vector<CMatrix> est(grid.size());
                try
                {
                    if (method == "snip_optimized")
                    {
                        auto gd = optimize_group_delays(omegas, As, cfg.barrier);
                        std::vector<InterpolationPoint> raw(omegas.size());
                        for (size_t i = 0; i < omegas.size(); ++i)
                            raw[i] = {omegas[i], As[i], gd.gammas[i]};
                        DesignOptions opts = cfg.design;
                        opts.seed = cfg.design.seed ^ seed;
                        AllPassFilter f = design_allpass(validate_dataset(raw), opts);
                        FilterEvaluator eval(f);
                        auto t0 = clock::now();
                        for (size_t g = 0; g < grid.size(); ++g)
                            est[g] = eval(grid[g]);
                        r.eval_seconds[mi] = std::chrono::duration<double>(clock::now() - t0).count();
                    }
                    else
                    {
                        std::vector<UnitarySample> anchors;
                        for (size_t i = 0; i < omegas.size(); ++i)
                            anchors.push_back({omegas[i], As[i]});
                        PiecewiseGeodesic geo(anchors);
                        auto t0 = clock::now();
                        for (size_t g = 0; g < grid.size(); ++g)
                        {
                            auto res = geo(grid[g]);
                            est[g] = res.U;
                            if (res.branch_ambiguous)
                                ++r.ambiguous[mi];
                        }
                        r.eval_seconds[mi] = std::chrono::duration<double>(clock::now() - t0).count();
                    }
                }
                catch (const Error &)
                {
                    continue;
                }
                r.evaluations[mi] = (int)grid.size();
                r.ok[mi] = true;
                r.frob[mi].resize(grid.size());
                r.flag[mi].resize(grid.size());
                for (size_t g = 0; g < grid.size(); ++g)
                {
                    r.frob[mi][g] = frobenius_error(est[g], track.samples[g].U);
                    r.flag[mi][g] = flag_distance(est[g], track.samples[g].U);
                }
            }
            return r;
        }
    }

    ComparisonReport run_comparison(const ComparisonConfig &cfg)
    {
        cfg.validate();
        ComparisonReport rep;
        rep.config = cfg;
        auto points = cfg.resolved_point_omegas();
        rep.grid = comparison_grid(cfg.grid_size, points);
        for (double w : points)
        {
            double ww = wrap_angle(w);
            auto it = std::find(rep.grid.begin(), rep.grid.end(), ww);
            rep.point_indices.push_back((int)(it - rep.grid.begin()));
        }
        {
            std::vector<int> sorted = rep.point_indices;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                throw Error(ErrorCode::duplicate_frequency, "interpolation frequencies coincide");
        }

        const int n_seeds = cfg.n_seeds;
        std::vector<SeedResult> results((size_t)n_seeds);
        std::atomic<int> next{0};
        auto worker = [&]() {
            for (int s = next++; s < n_seeds; s = next++)
                results[(size_t)s] = run_seed(cfg, rep.grid, rep.point_indices, cfg.seed + (std::uint64_t)s);
        };
        int nt = std::min(resolve_thread_count(cfg.threads), n_seeds);
        if (nt <= 1)
            worker();
        else
        {
            std::vector<std::thread> pool;
            for (int t = 0; t < nt; ++t)
                pool.emplace_back(worker);
            for (auto &th : pool)
                th.join();
        }

        const size_t G = rep.grid.size();
        for (size_t mi = 0; mi < cfg.methods.size(); ++mi)
        {
            MethodCurves mc;
            mc.method = cfg.methods[mi];
            std::vector<std::vector<double>> frob_cols(G), flag_cols(G);
            std::vector<double> pooled_flag, pooled_frob;
            double eval_s = 0.0;
            long evals = 0;
            for (const auto &r : results)
            {
                if (!r.ok[mi])
                {
                    ++mc.failures;
                    continue;
                }
                ++mc.successes;
                mc.branch_ambiguities += r.ambiguous[mi];
                eval_s += r.eval_seconds[mi];
                evals += r.evaluations[mi];
                for (size_t g = 0; g < G; ++g)
                {
                    frob_cols[g].push_back(r.frob[mi][g]);
                    flag_cols[g].push_back(r.flag[mi][g]);
                    pooled_flag.push_back(r.flag[mi][g]);
                    pooled_frob.push_back(r.frob[mi][g]);
                }
                for (int i : rep.point_indices)
                    mc.max_flag_at_points = std::max(mc.max_flag_at_points, r.flag[mi][(size_t)i]);
            }
            mc.failure_rate = (double)mc.failures / (double)n_seeds;
            for (size_t g = 0; g < G; ++g)
            {
                auto mean = [](const std::vector<double> &v) {
                    return v.empty() ? std::nan("") : std::accumulate(v.begin(), v.end(), 0.0) / (double)v.size();
                };
                mc.frob_mean.push_back(mean(frob_cols[g]));
                mc.flag_mean.push_back(mean(flag_cols[g]));
                mc.frob_median.push_back(median_of(frob_cols[g]));
                mc.flag_median.push_back(median_of(flag_cols[g]));
            }
            mc.pooled_flag_median = median_of(pooled_flag);
            mc.pooled_frob_median = median_of(pooled_frob);
            rep.methods.push_back(std::move(mc));

            TimingRow tr;
            tr.method = cfg.methods[mi] + "_eval";
            tr.m = cfg.m;
            tr.repetitions = (int)evals;
            tr.mean_ms = evals > 0 ? 1e3 * eval_s / (double)evals : 0.0;
            rep.timing.push_back(tr);
        }
        double snip_ms = 0.0;
        for (const auto &t : rep.timing)
            if (t.method == "snip_optimized_eval")
                snip_ms = t.mean_ms;
        for (auto &t : rep.timing)
            t.ratio_to_snip = snip_ms > 0.0 ? t.mean_ms / snip_ms : std::nan("");
        for (const auto &r : results)
            rep.degenerate_tracks += r.degenerate_track ? 1 : 0;
        return rep;
    }

    void BenchConfig::validate() const
    {
        if (m_list.empty())
            throw Error(ErrorCode::invalid_argument, "m_list is empty");
        for (int m : m_list)
            if (m < 1)
                throw Error(ErrorCode::invalid_argument, "matrix dimensions must be positive");
        if (n_points < 2)
            throw Error(ErrorCode::invalid_argument, "n_points must be at least 2");
        if (repetitions < 1)
            throw Error(ErrorCode::invalid_argument, "repetitions must be positive");
        pdp.validate();
    }

    std::vector<TimingRow> bench_timing(const BenchConfig &cfg)
    {
        cfg.validate();
        using clock = std::chrono::steady_clock;
        std::vector<TimingRow> rows;
        ComparisonConfig pc;
        pc.n_points = cfg.n_points;
        auto points = pc.resolved_point_omegas();
        std::sort(points.begin(), points.end());

        for (int m : cfg.m_list)
        {
            auto ch = gen_channel(cfg.pdp, m, cfg.seed + (std::uint64_t)m);
            auto track = svd_precoder_track(ch, points, true);
            std::vector<CMatrix> As;
            for (const auto &s : track.samples)
                As.push_back(s.U);
            auto gd = optimize_group_delays(points, As);
            std::vector<InterpolationPoint> raw;
            for (size_t i = 0; i < points.size(); ++i)
                raw.push_back({points[i], As[i], gd.gammas[i]});
            AllPassFilter f = design_allpass(validate_dataset(raw), anchored_design_options());

            // Query frequencies strictly inside the anchor span
            std::mt19937_64 rng(cfg.seed);
            std::uniform_real_distribution<double> u(0.0, 1.0);
            std::vector<double> q((size_t)cfg.repetitions);
            std::vector<size_t> seg((size_t)cfg.repetitions);
            for (int k = 0; k < cfg.repetitions; ++k)
            {
                size_t s = (size_t)(u(rng) * (double)(points.size() - 1));
                s = std::min(s, points.size() - 2);
                seg[(size_t)k] = s;
                q[(size_t)k] = points[s] + (0.05 + 0.9 * u(rng)) * (points[s + 1] - points[s]);
            }

            FilterEvaluator eval(f);
            double sink = 0.0;
            for (int k = 0; k < std::min(cfg.repetitions, 16); ++k)
                sink += std::abs(eval(q[(size_t)k])(0, 0));

            auto t0 = clock::now();
            for (int k = 0; k < cfg.repetitions; ++k)
                sink += std::abs(eval(q[(size_t)k])(0, 0));
            double snip_s = std::chrono::duration<double>(clock::now() - t0).count();

            t0 = clock::now();
            for (int k = 0; k < cfg.repetitions; ++k)
            {
                size_t s = seg[(size_t)k];
                auto r = geodesic_interpolate(track.samples[s], track.samples[s + 1], q[(size_t)k]);
                sink += std::abs(r.U(0, 0));
            }
            double geo_s = std::chrono::duration<double>(clock::now() - t0).count();
            if (!std::isfinite(sink))
                throw Error(ErrorCode::internal, "non-finite benchmark output");

            TimingRow a{"snip_eval", m, 1e3 * snip_s / cfg.repetitions, cfg.repetitions, 1.0};
            TimingRow b{"geodesic_eval", m, 1e3 * geo_s / cfg.repetitions, cfg.repetitions,
                        snip_s > 0.0 ? geo_s / snip_s : std::nan("")};
            rows.push_back(a);
            rows.push_back(b);
        }
        return rows;
    }
}
