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

#include "allpass/allpass.h"

#include "allpass/io.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <string>

using namespace allpass;

struct ap_dataset
{
    ValidatedDataSet ds;
};

struct ap_gammas
{
    GammaAssignment g;
};

struct ap_filter
{
    AllPassFilter f;
};

struct ap_signal
{
    VectorSignal x;
};

struct ap_report
{
    std::string csv;
    std::string summary;
};

static_assert((int)ErrorCode::internal == AP_ERR_INTERNAL, "status codes out of sync");
static_assert((int)ErrorCode::pick_not_positive_definite == AP_ERR_PICK_NOT_POSITIVE_DEFINITE, "status codes out of sync");
static_assert((int)ErrorCode::degenerate_construction == AP_ERR_DEGENERATE_CONSTRUCTION, "status codes out of sync");
static_assert((int)ErrorCode::singular_leading_coefficient == AP_ERR_SINGULAR_LEADING_COEFFICIENT,
              "status codes out of sync");

namespace
{
    thread_local std::string last_error;
    thread_local double last_value = 0.0;

    template <class F>
    ap_status guarded(F &&fn)
    {
        try
        {
            fn();
            last_error.clear();
            last_value = 0.0;
            return AP_OK;
        }
        catch (const Error &e)
        {
            last_error = e.what();
            last_value = e.witness();
            return (ap_status)e.code();
        }
        catch (const std::bad_alloc &)
        {
            last_error = "out of memory";
            last_value = 0.0;
            return AP_ERR_INTERNAL;
        }
        catch (const std::exception &e)
        {
            last_error = e.what();
            last_value = 0.0;
            return AP_ERR_INTERNAL;
        }
    }

    void require(bool ok, const char *msg)
    {
        if (!ok)
            throw Error(ErrorCode::invalid_argument, msg);
    }

    char *dup_string(const std::string &s)
    {
        char *p = static_cast<char *>(std::malloc(s.size() + 1));
        if (!p)
            throw std::bad_alloc();
        std::memcpy(p, s.c_str(), s.size() + 1);
        return p;
    }

    CMatrix read_matrix(const double *src, int m)
    {
        CMatrix M(m, m);
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c)
            {
                size_t k = 2 * ((size_t)r * (size_t)m + (size_t)c);
                M(r, c) = cdouble(src[k], src[k + 1]);
            }
        return M;
    }

    void write_matrix(const CMatrix &M, double *dst)
    {
        const Eigen::Index m = M.cols();
        for (Eigen::Index r = 0; r < M.rows(); ++r)
            for (Eigen::Index c = 0; c < m; ++c)
            {
                size_t k = 2 * ((size_t)r * (size_t)m + (size_t)c);
                dst[k] = M(r, c).real();
                dst[k + 1] = M(r, c).imag();
            }
    }

    BarrierConfig barrier_from(const ap_barrier_config *cfg)
    {
        BarrierConfig b;
        if (!cfg)
            return b;
        if (cfg->mu_init > 0.0)
            b.mu_init = cfg->mu_init;
        b.mu_decay = cfg->mu_decay;
        b.mu_final = cfg->mu_final;
        b.pd_margin = cfg->pd_margin;
        b.newton_tol = cfg->newton_tol;
        b.max_newton = cfg->max_newton;
        b.max_outer = cfg->max_outer;
        return b;
    }

    template <class T>
    void publish(T *value, T **out)
    {
        *out = value;
    }
}

extern "C" {

const char *ap_last_error(void)
{
    return last_error.c_str();
}

double ap_last_error_value(void)
{
    return last_value;
}

const char *ap_status_name(ap_status status)
{
    return error_name((ErrorCode)status);
}

void ap_string_free(char *s)
{
    std::free(s);
}

void ap_barrier_config_default(ap_barrier_config *cfg)
{
    if (!cfg)
        return;
    BarrierConfig b;
    cfg->mu_init = 0.0;
    cfg->mu_decay = b.mu_decay;
    cfg->mu_final = b.mu_final;
    cfg->pd_margin = b.pd_margin;
    cfg->newton_tol = b.newton_tol;
    cfg->max_newton = b.max_newton;
    cfg->max_outer = b.max_outer;
}

void ap_design_options_default(ap_design_options *opts)
{
    if (!opts)
        return;
    DesignOptions d;
    opts->max_retries = d.max_retries;
    opts->seed = d.seed;
    opts->pd_margin = -1.0;
    opts->degeneracy_condition = d.degeneracy_condition;
}

ap_status ap_dataset_parse(const char *json, ap_dataset **out)
{
    return guarded([&] {
        require(json && out, "null argument");
        auto ds = validate_dataset(io::parse_dataset(json));
        publish(new ap_dataset{std::move(ds)}, out);
    });
}

ap_status ap_dataset_load(const char *path, ap_dataset **out)
{
    return guarded([&] {
        require(path && out, "null argument");
        auto ds = validate_dataset(io::parse_dataset(io::read_file(path)));
        publish(new ap_dataset{std::move(ds)}, out);
    });
}

ap_status ap_dataset_create(int m, int n, const double *omegas, const double *responses, const double *gammas,
                            ap_dataset **out)
{
    return guarded([&] {
        require(m > 0 && n > 0 && omegas && responses && out, "invalid argument");
        std::vector<InterpolationPoint> raw((size_t)n);
        const size_t stride = 2 * (size_t)m * (size_t)m;
        for (int i = 0; i < n; ++i)
        {
            raw[(size_t)i].omega = omegas[i];
            raw[(size_t)i].A = read_matrix(responses + stride * (size_t)i, m);
            if (gammas)
                raw[(size_t)i].gamma = read_matrix(gammas + stride * (size_t)i, m);
        }
        publish(new ap_dataset{validate_dataset(raw)}, out);
    });
}

void ap_dataset_free(ap_dataset *ds)
{
    delete ds;
}

int ap_dataset_dim(const ap_dataset *ds)
{
    return ds ? ds->ds.dim() : 0;
}

int ap_dataset_size(const ap_dataset *ds)
{
    return ds ? ds->ds.size() : 0;
}

int ap_dataset_has_gammas(const ap_dataset *ds)
{
    return ds && ds->ds.has_all_gammas() ? 1 : 0;
}

ap_status ap_dataset_to_json(const ap_dataset *ds, char **out)
{
    return guarded([&] {
        require(ds && out, "null argument");
        *out = dup_string(io::dataset_to_json(ds->ds.raw_points()));
    });
}

ap_status ap_dataset_check_pick(const ap_dataset *ds, double margin, int *is_pd, double *min_eigenvalue)
{
    return guarded([&] {
        require(ds && is_pd && min_eigenvalue, "null argument");
        std::optional<double> mg;
        if (margin >= 0.0)
            mg = margin;
        auto d = is_positive_definite(build_pick(ds->ds), mg);
        *is_pd = d.positive_definite ? 1 : 0;
        *min_eigenvalue = d.min_eigenvalue;
    });
}

ap_status ap_dataset_pick_json(const ap_dataset *ds, char **out)
{
    return guarded([&] {
        require(ds && out, "null argument");
        *out = dup_string(io::pick_to_json(build_pick(ds->ds)));
    });
}

ap_status ap_dataset_with_gammas(const ap_dataset *ds, const ap_gammas *g, ap_dataset **out)
{
    return guarded([&] {
        require(ds && g && out, "null argument");
        publish(new ap_dataset{ds->ds.with_gammas(g->g.gammas)}, out);
    });
}

ap_status ap_optimize_dataset(const ap_dataset *ds, const ap_barrier_config *cfg, ap_gammas **out)
{
    return guarded([&] {
        require(ds && out, "null argument");
        auto g = optimize_group_delays(ds->ds.omegas(), ds->ds.responses(), barrier_from(cfg));
        publish(new ap_gammas{std::move(g)}, out);
    });
}

ap_status ap_optimize_json(const char *json, const ap_barrier_config *cfg, ap_gammas **out)
{
    return guarded([&] {
        require(json && out, "null argument");
        auto in = io::parse_gdopt_input(json);
        auto g = optimize_group_delays(in.omegas, in.As, barrier_from(cfg));
        publish(new ap_gammas{std::move(g)}, out);
    });
}

void ap_gammas_free(ap_gammas *g)
{
    delete g;
}

int ap_gammas_count(const ap_gammas *g)
{
    return g ? (int)g->g.gammas.size() : 0;
}

ap_status ap_gammas_get(const ap_gammas *g, int i, double *out)
{
    return guarded([&] {
        require(g && out && i >= 0 && i < (int)g->g.gammas.size(), "invalid argument");
        write_matrix(g->g.gammas[(size_t)i], out);
    });
}

ap_status ap_gammas_info(const ap_gammas *g, double *achieved_trace, double *pd_witness, int *converged)
{
    return guarded([&] {
        require(g, "null argument");
        if (achieved_trace)
            *achieved_trace = g->g.achieved_trace;
        if (pd_witness)
            *pd_witness = g->g.pd_witness;
        if (converged)
            *converged = g->g.converged ? 1 : 0;
    });
}

ap_status ap_gammas_to_json(const ap_gammas *g, char **out)
{
    return guarded([&] {
        require(g && out, "null argument");
        *out = dup_string(io::gamma_assignment_to_json(g->g));
    });
}

ap_status ap_design(const ap_dataset *ds, const ap_design_options *opts, ap_filter **out)
{
    return guarded([&] {
        require(ds && out, "null argument");
        DesignOptions d;
        if (opts)
        {
            d.max_retries = opts->max_retries;
            d.seed = opts->seed;
            if (opts->pd_margin >= 0.0)
                d.pd_margin = opts->pd_margin;
            d.degeneracy_condition = opts->degeneracy_condition;
        }
        publish(new ap_filter{design_allpass(ds->ds, d)}, out);
    });
}

ap_status ap_filter_parse(const char *json, ap_filter **out)
{
    return guarded([&] {
        require(json && out, "null argument");
        publish(new ap_filter{io::parse_filter(json)}, out);
    });
}

ap_status ap_filter_load(const char *path, ap_filter **out)
{
    return guarded([&] {
        require(path && out, "null argument");
        publish(new ap_filter{io::parse_filter(io::read_file(path))}, out);
    });
}

ap_status ap_filter_save(const ap_filter *f, const char *path)
{
    return guarded([&] {
        require(f && path, "null argument");
        io::write_file(path, io::filter_to_json(f->f));
    });
}

ap_status ap_filter_to_json(const ap_filter *f, char **out)
{
    return guarded([&] {
        require(f && out, "null argument");
        *out = dup_string(io::filter_to_json(f->f));
    });
}

void ap_filter_free(ap_filter *f)
{
    delete f;
}

int ap_filter_dim(const ap_filter *f)
{
    return f ? f->f.dim() : 0;
}

int ap_filter_degree(const ap_filter *f)
{
    return f ? f->f.degree() : 0;
}

ap_status ap_filter_eval(const ap_filter *f, double omega, double *out)
{
    return guarded([&] {
        require(f && out, "null argument");
        write_matrix(eval_filter(f->f, omega), out);
    });
}

ap_status ap_filter_group_delay(const ap_filter *f, double omega, double *out, double *skew_norm)
{
    return guarded([&] {
        require(f && out, "null argument");
        auto g = group_delay(f->f, omega);
        write_matrix(g.F, out);
        if (skew_norm)
            *skew_norm = g.skew_norm;
    });
}

ap_status ap_filter_unitarity_deviation(const ap_filter *f, int grid_size, double *out)
{
    return guarded([&] {
        require(f && out, "null argument");
        *out = unitarity_deviation(f->f, grid_size);
    });
}

ap_status ap_filter_pole_radius(const ap_filter *f, double *out)
{
    return guarded([&] {
        require(f && out, "null argument");
        *out = pole_radius(f->f);
    });
}

ap_status ap_filter_check_point(const ap_filter *f, const ap_dataset *ds, int i, double *interp_error,
                                double *spectrum_error)
{
    return guarded([&] {
        require(f && ds && i >= 0 && i < ds->ds.size(), "invalid argument");
        if (f->f.dim() != ds->ds.dim())
            throw Error(ErrorCode::dimension_mismatch, "filter and data set dimensions differ");
        const auto &p = ds->ds[i];
        if (interp_error)
            *interp_error = (eval_filter(f->f, p.omega) - p.A).norm();
        if (spectrum_error)
        {
            *spectrum_error = std::numeric_limits<double>::quiet_NaN();
            if (p.gamma)
            {
                auto F = group_delay(f->f, p.omega).F;
                Eigen::SelfAdjointEigenSolver<CMatrix> a(F, Eigen::EigenvaluesOnly);
                Eigen::SelfAdjointEigenSolver<CMatrix> b(ds->ds.canonical_gamma(i), Eigen::EigenvaluesOnly);
                *spectrum_error = (a.eigenvalues() - b.eigenvalues()).cwiseAbs().maxCoeff();
            }
        }
    });
}

ap_status ap_signal_create(int m, size_t length, const double *samples, ap_signal **out)
{
    return guarded([&] {
        require(m > 0 && out && (samples || length == 0), "invalid argument");
        VectorSignal x(m, length);
        for (size_t t = 0; t < length; ++t)
            for (int i = 0; i < m; ++i)
            {
                size_t k = 2 * (t * (size_t)m + (size_t)i);
                x.at(t, i) = cdouble(samples[k], samples[k + 1]);
            }
        publish(new ap_signal{std::move(x)}, out);
    });
}

ap_status ap_signal_parse_csv(const char *csv, ap_signal **out)
{
    return guarded([&] {
        require(csv && out, "null argument");
        publish(new ap_signal{io::parse_signal_csv(csv)}, out);
    });
}

ap_status ap_signal_load_csv(const char *path, ap_signal **out)
{
    return guarded([&] {
        require(path && out, "null argument");
        publish(new ap_signal{io::parse_signal_csv(io::read_file(path))}, out);
    });
}

ap_status ap_signal_save_csv(const ap_signal *x, const char *path)
{
    return guarded([&] {
        require(x && path, "null argument");
        io::write_file(path, io::signal_to_csv(x->x));
    });
}

void ap_signal_free(ap_signal *x)
{
    delete x;
}

int ap_signal_dim(const ap_signal *x)
{
    return x ? x->x.dim() : 0;
}

size_t ap_signal_length(const ap_signal *x)
{
    return x ? x->x.length() : 0;
}

ap_status ap_signal_get(const ap_signal *x, size_t t, double *out)
{
    return guarded([&] {
        require(x && out && t < x->x.length(), "invalid argument");
        for (int i = 0; i < x->x.dim(); ++i)
        {
            out[2 * i] = x->x.at(t, i).real();
            out[2 * i + 1] = x->x.at(t, i).imag();
        }
    });
}

ap_status ap_simulate(const ap_filter *f, const ap_signal *x, ap_signal **out, int *unstable, double *spectral_radius)
{
    return guarded([&] {
        require(f && x && out, "null argument");
        auto r = lccde_filter(f->f, x->x);
        if (unstable)
            *unstable = r.unstable ? 1 : 0;
        if (spectral_radius)
            *spectral_radius = r.spectral_radius;
        publish(new ap_signal{std::move(r.output)}, out);
    });
}

ap_status ap_compare_run(const char *config_json, int n_seeds, int has_seed, uint64_t seed, ap_report **out)
{
    return guarded([&] {
        require(config_json && out, "null argument");
        auto cfg = io::parse_comparison_config(config_json);
        if (n_seeds > 0)
            cfg.n_seeds = n_seeds;
        if (has_seed)
            cfg.seed = seed;
        auto rep = run_comparison(cfg);
        publish(new ap_report{io::report_to_csv(rep), io::report_summary_json(rep)}, out);
    });
}

ap_status ap_bench_run(const char *config_json, int has_seed, uint64_t seed, ap_report **out)
{
    return guarded([&] {
        require(config_json && out, "null argument");
        auto cfg = io::parse_bench_config(config_json);
        if (has_seed)
            cfg.seed = seed;
        auto rows = bench_timing(cfg);
        publish(new ap_report{io::timing_to_csv(rows), io::timing_summary_json(cfg, rows)}, out);
    });
}

ap_status ap_report_csv(const ap_report *r, char **out)
{
    return guarded([&] {
        require(r && out, "null argument");
        *out = dup_string(r->csv);
    });
}

ap_status ap_report_summary_json(const ap_report *r, char **out)
{
    return guarded([&] {
        require(r && out, "null argument");
        *out = dup_string(r->summary);
    });
}

void ap_report_free(ap_report *r)
{
    delete r;
}
}
