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

#include <CLI11.hpp>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace
{
    enum Exit
    {
        exit_ok = 0,
        exit_invalid = 2,
        exit_degenerate = 3,
        exit_simulation = 4
    };

    int report_failure(ap_status st, const char *what)
    {
        std::fprintf(stderr, "error: %s: %s (%s)\n", what, ap_last_error(), ap_status_name(st));
        return st == AP_ERR_DEGENERATE_CONSTRUCTION ? exit_degenerate : exit_invalid;
    }

    struct OwnedString
    {
        char *p = nullptr;
        ~OwnedString() { ap_string_free(p); }
    };

    bool write_text(const std::string &path, const std::string &text)
    {
        if (path.empty() || path == "-")
        {
            std::fputs(text.c_str(), stdout);
            return true;
        }
        std::ofstream out(path, std::ios::binary);
        out << text;
        return bool(out);
    }

    std::string num(double x)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.16e", x);
        return buf;
    }

    std::string matrix_header(const char *tag, int m)
    {
        std::string h;
        for (int r = 1; r <= m; ++r)
            for (int c = 1; c <= m; ++c)
            {
                std::string ij = std::to_string(r) + "_" + std::to_string(c);
                h += std::string(",re_") + tag + ij + ",im_" + tag + ij;
            }
        return h;
    }

    void append_matrix(std::string &line, const std::vector<double> &M)
    {
        for (double v : M)
            line += "," + num(v);
    }

    int cmd_design(const std::string &in, const std::string &out, uint64_t seed, int max_retries,
                   const ap_barrier_config &bc)
    {
        ap_dataset *ds = nullptr;
        ap_status st = ap_dataset_load(in.c_str(), &ds);
        if (st != AP_OK)
            return report_failure(st, "reading data set");
        ap_dataset *work = ds;
        if (!ap_dataset_has_gammas(ds))
        {
            ap_gammas *g = nullptr;
            st = ap_optimize_dataset(ds, &bc, &g);
            if (st != AP_OK)
            {
                ap_dataset_free(ds);
                return report_failure(st, "optimizing group delays");
            }
            double trace = 0.0, witness = 0.0;
            int converged = 0;
            ap_gammas_info(g, &trace, &witness, &converged);
            std::printf("gdopt: achieved_trace %s pd_witness %s converged %d\n", num(trace).c_str(),
                        num(witness).c_str(), converged);
            st = ap_dataset_with_gammas(ds, g, &work);
            ap_gammas_free(g);
            if (st != AP_OK)
            {
                ap_dataset_free(ds);
                return report_failure(st, "attaching group delays");
            }
        }
        ap_design_options opts;
        ap_design_options_default(&opts);
        opts.seed = seed;
        opts.max_retries = max_retries;
        ap_filter *f = nullptr;
        st = ap_design(work, &opts, &f);
        if (st != AP_OK)
        {
            int code = report_failure(st, "designing filter");
            if (st == AP_ERR_PICK_NOT_POSITIVE_DEFINITE)
                std::printf("pick_min_eigenvalue %s\n", num(ap_last_error_value()).c_str());
            if (work != ds)
                ap_dataset_free(work);
            ap_dataset_free(ds);
            return code;
        }
        int rc = exit_ok;
        st = ap_filter_save(f, out.c_str());
        if (st != AP_OK)
            rc = report_failure(st, "writing filter");
        double dev = 0.0, radius = 0.0;
        ap_filter_unitarity_deviation(f, 1024, &dev);
        ap_filter_pole_radius(f, &radius);
        std::printf("degree %d\n", ap_filter_degree(f));
        std::printf("unitarity_deviation %s\n", num(dev).c_str());
        std::printf("pole_radius %s\n", num(radius).c_str());
        for (int i = 0; i < ap_dataset_size(work); ++i)
        {
            double ie = 0.0, se = 0.0;
            if (ap_filter_check_point(f, work, i, &ie, &se) == AP_OK)
                std::printf("point %d interp_error %s spectrum_error %s\n", i, num(ie).c_str(), num(se).c_str());
        }
        ap_filter_free(f);
        if (work != ds)
            ap_dataset_free(work);
        ap_dataset_free(ds);
        return rc;
    }

    int cmd_check_pick(const std::string &in, double margin, const std::string &out)
    {
        ap_dataset *ds = nullptr;
        ap_status st = ap_dataset_load(in.c_str(), &ds);
        if (st != AP_OK)
            return report_failure(st, "reading data set");
        int pd = 0;
        double lam = 0.0;
        st = ap_dataset_check_pick(ds, margin, &pd, &lam);
        if (st != AP_OK)
        {
            ap_dataset_free(ds);
            return report_failure(st, "checking Pick matrix");
        }
        std::printf("positive_definite %d\nmin_eigenvalue %s\n", pd, num(lam).c_str());
        int rc = pd ? exit_ok : exit_invalid;
        if (!out.empty())
        {
            OwnedString js;
            st = ap_dataset_pick_json(ds, &js.p);
            if (st != AP_OK)
                rc = report_failure(st, "serializing Pick matrix");
            else if (!write_text(out, js.p))
            {
                std::fprintf(stderr, "error: cannot write %s\n", out.c_str());
                rc = exit_invalid;
            }
        }
        ap_dataset_free(ds);
        return rc;
    }

    int cmd_optimize(const std::string &in, const std::string &out, const ap_barrier_config &bc)
    {
        std::ifstream f(in, std::ios::binary);
        if (!f)
        {
            std::fprintf(stderr, "error: cannot read %s\n", in.c_str());
            return exit_invalid;
        }
        std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
        ap_gammas *g = nullptr;
        ap_status st = ap_optimize_json(text.c_str(), &bc, &g);
        if (st != AP_OK)
            return report_failure(st, "optimizing group delays");
        OwnedString js;
        st = ap_gammas_to_json(g, &js.p);
        int converged = 0;
        ap_gammas_info(g, nullptr, nullptr, &converged);
        ap_gammas_free(g);
        if (st != AP_OK)
            return report_failure(st, "serializing group delays");
        if (!converged)
            std::fprintf(stderr, "warning: barrier method did not reach its tolerance\n");
        if (!write_text(out, std::string(js.p) + "\n"))
        {
            std::fprintf(stderr, "error: cannot write %s\n", out.c_str());
            return exit_invalid;
        }
        return exit_ok;
    }

    int cmd_eval(const std::string &in, const std::vector<double> &omegas, int grid, bool with_delay,
                 const std::string &out)
    {
        ap_filter *f = nullptr;
        ap_status st = ap_filter_load(in.c_str(), &f);
        if (st != AP_OK)
            return report_failure(st, "reading filter");
        const int m = ap_filter_dim(f);
        std::vector<double> ws = omegas;
        for (int k = 0; k < grid; ++k)
            ws.push_back(-M_PI + 2.0 * M_PI * (k + 1) / grid);
        std::string text = "omega" + matrix_header("G", m);
        if (with_delay)
            text += matrix_header("F", m);
        text += "\n";
        std::vector<double> G(2 * (size_t)m * (size_t)m), F(G.size());
        for (double w : ws)
        {
            st = ap_filter_eval(f, w, G.data());
            if (st == AP_OK && with_delay)
                st = ap_filter_group_delay(f, w, F.data(), nullptr);
            if (st != AP_OK)
            {
                ap_filter_free(f);
                return report_failure(st, "evaluating filter");
            }
            std::string line = num(w);
            append_matrix(line, G);
            if (with_delay)
                append_matrix(line, F);
            text += line + "\n";
        }
        ap_filter_free(f);
        if (!write_text(out, text))
        {
            std::fprintf(stderr, "error: cannot write %s\n", out.c_str());
            return exit_invalid;
        }
        return exit_ok;
    }

    int cmd_simulate(const std::string &filter, const std::string &signal, const std::string &out)
    {
        ap_filter *f = nullptr;
        ap_status st = ap_filter_load(filter.c_str(), &f);
        if (st != AP_OK)
            return report_failure(st, "reading filter");
        ap_signal *x = nullptr;
        st = ap_signal_load_csv(signal.c_str(), &x);
        if (st != AP_OK)
        {
            ap_filter_free(f);
            return report_failure(st, "reading signal");
        }
        ap_signal *y = nullptr;
        int unstable = 0;
        double radius = 0.0;
        st = ap_simulate(f, x, &y, &unstable, &radius);
        ap_signal_free(x);
        ap_filter_free(f);
        if (st != AP_OK)
        {
            std::fprintf(stderr, "error: simulation failed: %s (%s)\n", ap_last_error(), ap_status_name(st));
            if (st == AP_ERR_SINGULAR_LEADING_COEFFICIENT)
                std::fprintf(stderr, "hint: the leading denominator block is singular; evaluate the filter in the "
                                     "frequency domain with 'eval --grid' instead\n");
            return st == AP_ERR_INVALID_ARGUMENT || st == AP_ERR_PARSE || st == AP_ERR_IO ||
                           st == AP_ERR_DIMENSION_MISMATCH
                       ? exit_invalid
                       : exit_simulation;
        }
        if (unstable)
            std::fprintf(stderr, "UnstableWarning: spectral radius %s exceeds 1\n", num(radius).c_str());
        int rc = exit_ok;
        if (out.empty() || out == "-")
        {
            std::string csv = "t";
            const int m = ap_signal_dim(y);
            for (int i = 1; i <= m; ++i)
                csv += ",re_" + std::to_string(i) + ",im_" + std::to_string(i);
            csv += "\n";
            std::vector<double> s(2 * (size_t)m);
            for (size_t t = 0; t < ap_signal_length(y); ++t)
            {
                ap_signal_get(y, t, s.data());
                csv += std::to_string(t);
                append_matrix(csv, s);
                csv += "\n";
            }
            std::fputs(csv.c_str(), stdout);
        }
        else if ((st = ap_signal_save_csv(y, out.c_str())) != AP_OK)
            rc = report_failure(st, "writing signal");
        ap_signal_free(y);
        return rc;
    }

    int write_report(ap_report *r, const std::string &prefix)
    {
        OwnedString csv, js;
        ap_status st = ap_report_csv(r, &csv.p);
        if (st == AP_OK)
            st = ap_report_summary_json(r, &js.p);
        if (st != AP_OK)
            return report_failure(st, "serializing report");
        if (!write_text(prefix + ".csv", csv.p) || !write_text(prefix + ".json", std::string(js.p) + "\n"))
        {
            std::fprintf(stderr, "error: cannot write report files with prefix %s\n", prefix.c_str());
            return exit_invalid;
        }
        std::printf("%s\n", js.p);
        return exit_ok;
    }

    std::optional<std::string> slurp(const std::string &path)
    {
        std::ifstream f(path, std::ios::binary);
        if (!f)
            return std::nullopt;
        return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    }

    int cmd_compare(const std::string &cfg, int seeds, bool has_seed, uint64_t seed, const std::string &prefix)
    {
        auto text = slurp(cfg);
        if (!text)
        {
            std::fprintf(stderr, "error: cannot read %s\n", cfg.c_str());
            return exit_invalid;
        }
        ap_report *r = nullptr;
        ap_status st = ap_compare_run(text->c_str(), seeds, has_seed ? 1 : 0, seed, &r);
        if (st != AP_OK)
            return report_failure(st, "running comparison");
        int rc = write_report(r, prefix);
        ap_report_free(r);
        return rc;
    }

    int cmd_bench(const std::string &cfg, bool has_seed, uint64_t seed, const std::string &prefix)
    {
        auto text = slurp(cfg);
        if (!text)
        {
            std::fprintf(stderr, "error: cannot read %s\n", cfg.c_str());
            return exit_invalid;
        }
        ap_report *r = nullptr;
        ap_status st = ap_bench_run(text->c_str(), has_seed ? 1 : 0, seed, &r);
        if (st != AP_OK)
            return report_failure(st, "running benchmark");
        int rc = write_report(r, prefix);
        ap_report_free(r);
        return rc;
    }

    void add_barrier_flags(CLI::App *cmd, ap_barrier_config &bc)
    {
        cmd->add_option("--mu-init", bc.mu_init, "initial barrier weight (<= 0 selects automatically)");
        cmd->add_option("--mu-decay", bc.mu_decay, "barrier weight decay factor")->check(CLI::Range(1e-6, 0.999999));
        cmd->add_option("--mu-final", bc.mu_final, "final barrier weight")->check(CLI::PositiveNumber);
        cmd->add_option("--gd-margin", bc.pd_margin, "Pick positivity margin")->check(CLI::NonNegativeNumber);
        cmd->add_option("--max-newton", bc.max_newton, "Newton step limit")->check(CLI::PositiveNumber);
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Matrix all-pass filter design by boundary interpolation"};
    app.require_subcommand(1);

    ap_barrier_config bc;
    ap_barrier_config_default(&bc);
    uint64_t seed = 0;

    std::string in, out, signal;
    int max_retries = 8;
    auto *design = app.add_subcommand("design", "design a filter from a data set");
    design->add_option("dataset", in, "data set JSON")->required();
    design->add_option("-o,--output", out, "filter JSON")->required();
    design->add_option("--seed", seed, "seed for derotation retries");
    design->add_option("--max-retries", max_retries, "derotation retries")->check(CLI::Range(0, 64));
    add_barrier_flags(design, bc);

    double margin = -1.0;
    auto *check = app.add_subcommand("check-pick", "test the Pick matrix of a data set");
    check->add_option("dataset", in, "data set JSON")->required();
    check->add_option("--margin", margin, "positivity margin (default relative to the trace)");
    check->add_option("-o,--output", out, "write the Pick matrix JSON");

    auto *opt = app.add_subcommand("optimize-gd", "choose group delays by the barrier method");
    opt->add_option("input", in, "JSON with omegas and As")->required();
    opt->add_option("-o,--output", out, "output JSON (default stdout)");
    add_barrier_flags(opt, bc);

    std::vector<double> omegas;
    int grid = 0;
    bool with_delay = false;
    auto *eval = app.add_subcommand("eval", "evaluate a filter on the unit circle");
    eval->add_option("filter", in, "filter JSON")->required();
    eval->add_option("--omega", omegas, "frequencies in radians");
    eval->add_option("--grid", grid, "uniform grid size")->check(CLI::NonNegativeNumber);
    eval->add_flag("--group-delay", with_delay, "append the group delay matrix");
    eval->add_option("-o,--output", out, "CSV output (default stdout)");

    auto *sim = app.add_subcommand("simulate", "run a filter as a difference equation");
    sim->add_option("filter", in, "filter JSON")->required();
    sim->add_option("signal", signal, "input signal CSV")->required();
    sim->add_option("-o,--output", out, "output signal CSV (default stdout)");

    int seeds = 0;
    std::string prefix = "report";
    auto *cmp = app.add_subcommand("compare", "compare interpolation methods on random channels");
    cmp->add_option("config", in, "comparison config JSON")->required();
    cmp->add_option("--seeds", seeds, "number of channel realizations")->check(CLI::PositiveNumber);
    auto *cmp_seed = cmp->add_option("--seed", seed, "base seed");
    cmp->add_option("--out-prefix", prefix, "prefix for the CSV and JSON reports");

    auto *bench = app.add_subcommand("bench", "time precoder reconstruction");
    bench->add_option("config", in, "bench config JSON")->required();
    auto *bench_seed = bench->add_option("--seed", seed, "base seed");
    bench->add_option("--out-prefix", prefix, "prefix for the CSV and JSON reports");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        int rc = app.exit(e);
        return rc == 0 ? 0 : exit_invalid;
    }

    if (*design)
        return cmd_design(in, out, seed, max_retries, bc);
    if (*check)
        return cmd_check_pick(in, margin, out);
    if (*opt)
        return cmd_optimize(in, out, bc);
    if (*eval)
    {
        if (omegas.empty() && grid == 0)
        {
            std::fprintf(stderr, "error: eval needs --omega or --grid\n");
            return exit_invalid;
        }
        return cmd_eval(in, omegas, grid, with_delay, out);
    }
    if (*sim)
        return cmd_simulate(in, signal, out);
    if (*cmp)
        return cmd_compare(in, seeds, cmp_seed->count() > 0, seed, prefix);
    if (*bench)
        return cmd_bench(in, bench_seed->count() > 0, seed, prefix);
    return exit_invalid;
}
