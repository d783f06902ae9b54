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

#include "allpass/io.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace allpass::io
{
    using json = nlohmann::json;
    using ljson = nlohmann::basic_json<std::map, std::vector, std::string, bool, std::int64_t, std::uint64_t,
                                       long double>;

    namespace
    {
        [[noreturn]] void parse_fail(const std::string &msg)
        {
            throw Error(ErrorCode::parse_error, msg);
        }

        template <class J>
        J parse_text(const std::string &text)
        {
            try
            {
                return J::parse(text);
            }
            catch (const std::exception &e)
            {
                parse_fail(std::string("malformed JSON: ") + e.what());
            }
        }

        template <class J>
        const J &require(const J &obj, const char *key)
        {
            if (!obj.is_object() || !obj.contains(key))
                parse_fail(std::string("missing field '") + key + "'");
            return obj.at(key);
        }

        template <class J>
        void reject_unknown(const J &obj, const std::set<std::string> &allowed, const char *what)
        {
            if (!obj.is_object())
                parse_fail(std::string(what) + " must be a JSON object");
            for (auto it = obj.begin(); it != obj.end(); ++it)
                if (!allowed.count(it.key()))
                    parse_fail(std::string("unknown field '") + it.key() + "' in " + what);
        }

        template <class J>
        double num(const J &v, const char *what)
        {
            if (!v.is_number())
                parse_fail(std::string(what) + " must be a number");
            return v.template get<double>();
        }

        template <class J>
        int integer(const J &v, const char *what)
        {
            if (!v.is_number_integer())
                parse_fail(std::string(what) + " must be an integer");
            return v.template get<int>();
        }

        template <class T, class J>
        std::complex<T> complex_entry(const J &v)
        {
            if (v.is_number())
                return {v.template get<T>(), T(0)};
            if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
                parse_fail("complex entries must be [re, im] pairs");
            return {v[0].template get<T>(), v[1].template get<T>()};
        }

        template <class T, class J>
        Eigen::Matrix<std::complex<T>, Eigen::Dynamic, Eigen::Dynamic> matrix_from(const J &v)
        {
            if (!v.is_array() || v.empty())
                parse_fail("matrix must be a non-empty array of rows");
            const size_t rows = v.size();
            const size_t cols = v[0].is_array() ? v[0].size() : 0;
            if (cols == 0)
                parse_fail("matrix rows must be non-empty arrays");
            Eigen::Matrix<std::complex<T>, Eigen::Dynamic, Eigen::Dynamic> M((Eigen::Index)rows, (Eigen::Index)cols);
            for (size_t r = 0; r < rows; ++r)
            {
                if (!v[r].is_array() || v[r].size() != cols)
                    parse_fail("matrix rows differ in length");
                for (size_t c = 0; c < cols; ++c)
                    M((Eigen::Index)r, (Eigen::Index)c) = complex_entry<T>(v[r][c]);
            }
            return M;
        }

        json matrix_json(const CMatrix &M)
        {
            json rows = json::array();
            for (Eigen::Index r = 0; r < M.rows(); ++r)
            {
                json row = json::array();
                for (Eigen::Index c = 0; c < M.cols(); ++c)
                    row.push_back(json::array({M(r, c).real(), M(r, c).imag()}));
                rows.push_back(row);
            }
            return rows;
        }

        std::string long_number(long double v)
        {
            if (!std::isfinite((double)v))
                throw Error(ErrorCode::invalid_argument, "cannot serialize a non-finite coefficient");
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.20Le", v);
            return buf;
        }

        void append_long_matrix(std::string &out, const LMatrix &M)
        {
            out += '[';
            for (Eigen::Index r = 0; r < M.rows(); ++r)
            {
                if (r)
                    out += ',';
                out += '[';
                for (Eigen::Index c = 0; c < M.cols(); ++c)
                {
                    if (c)
                        out += ',';
                    out += '[' + long_number(M(r, c).real()) + ',' + long_number(M(r, c).imag()) + ']';
                }
                out += ']';
            }
            out += ']';
        }

        PowerDelayProfile pdp_from(const json &j)
        {
            reject_unknown(j, {"profile", "delays", "delays_ns", "powers_db", "sample_rate_hz"}, "power delay profile");
            if (j.contains("profile"))
            {
                if (j.at("profile") != "vehicular_a")
                    parse_fail("unknown profile name");
                double fs = j.contains("sample_rate_hz") ? num(j.at("sample_rate_hz"), "sample_rate_hz") : 10e6;
                return PowerDelayProfile::vehicular_a(fs);
            }
            std::vector<double> p;
            for (const auto &v : require(j, "powers_db"))
                p.push_back(num(v, "powers_db"));
            if (j.contains("delays_ns"))
            {
                std::vector<double> d;
                for (const auto &v : j.at("delays_ns"))
                    d.push_back(num(v, "delays_ns"));
                double fs = j.contains("sample_rate_hz") ? num(j.at("sample_rate_hz"), "sample_rate_hz") : 10e6;
                return PowerDelayProfile::from_ns(d, p, fs);
            }
            PowerDelayProfile pdp;
            for (const auto &v : require(j, "delays"))
                pdp.delays.push_back(integer(v, "delays"));
            pdp.powers_db = p;
            pdp.validate();
            return pdp;
        }

        BarrierConfig barrier_from(const json &j)
        {
            reject_unknown(j, {"mu_init", "mu_decay", "mu_final", "pd_margin", "newton_tol", "max_newton", "max_outer"},
                           "barrier config");
            BarrierConfig c;
            if (j.contains("mu_init") && !j.at("mu_init").is_null())
                c.mu_init = num(j.at("mu_init"), "mu_init");
            if (j.contains("mu_decay"))
                c.mu_decay = num(j.at("mu_decay"), "mu_decay");
            if (j.contains("mu_final"))
                c.mu_final = num(j.at("mu_final"), "mu_final");
            if (j.contains("pd_margin"))
                c.pd_margin = num(j.at("pd_margin"), "pd_margin");
            if (j.contains("newton_tol"))
                c.newton_tol = num(j.at("newton_tol"), "newton_tol");
            if (j.contains("max_newton"))
                c.max_newton = integer(j.at("max_newton"), "max_newton");
            if (j.contains("max_outer"))
                c.max_outer = integer(j.at("max_outer"), "max_outer");
            c.validate();
            return c;
        }

        json pdp_json(const PowerDelayProfile &p)
        {
            return json{{"delays", p.delays}, {"powers_db", p.powers_db}};
        }

        json number_or_null(double v)
        {
            return std::isfinite(v) ? json(v) : json(nullptr);
        }
    }

    std::string read_file(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw Error(ErrorCode::io_error, "cannot open '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    void write_file(const std::string &path, const std::string &content)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw Error(ErrorCode::io_error, "cannot write '" + path + "'");
        out << content;
        if (!out)
            throw Error(ErrorCode::io_error, "write to '" + path + "' failed");
    }

    std::string format_double(double v)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.16e", v);
        return buf;
    }

    std::vector<InterpolationPoint> parse_dataset(const std::string &text)
    {
        json j = parse_text<json>(text);
        reject_unknown(j, {"m", "points"}, "data set");
        const int m = integer(require(j, "m"), "m");
        const json &pts = require(j, "points");
        if (!pts.is_array() || pts.empty())
            parse_fail("points must be a non-empty array");
        std::vector<InterpolationPoint> out;
        for (const auto &p : pts)
        {
            reject_unknown(p, {"omega", "A", "gamma"}, "point");
            InterpolationPoint q;
            q.omega = num(require(p, "omega"), "omega");
            q.A = matrix_from<double>(require(p, "A"));
            if (p.contains("gamma") && !p.at("gamma").is_null())
                q.gamma = matrix_from<double>(p.at("gamma"));
            if (q.A.rows() != m || q.A.cols() != m)
                throw Error(ErrorCode::dimension_mismatch, "response dimension does not match m");
            out.push_back(std::move(q));
        }
        return out;
    }

    std::string dataset_to_json(const std::vector<InterpolationPoint> &points)
    {
        json pts = json::array();
        int m = points.empty() ? 0 : (int)points.front().A.rows();
        for (const auto &p : points)
        {
            json q{{"omega", p.omega}, {"A", matrix_json(p.A)}};
            q["gamma"] = p.gamma ? matrix_json(*p.gamma) : json(nullptr);
            pts.push_back(q);
        }
        return json{{"m", m}, {"points", pts}}.dump(1) + "\n";
    }

    std::string filter_to_json(const AllPassFilter &f)
    {
        std::string out = "{\"m\":" + std::to_string(f.dim()) + ",\"degree\":" + std::to_string(f.degree());
        for (const char *name : {"N", "D"})
        {
            const MatrixPolynomial &P = name[0] == 'N' ? f.N : f.D;
            out += ",\n\"";
            out += name;
            out += "\":[";
            for (int k = 0; k <= P.degree(); ++k)
            {
                if (k)
                    out += ",\n ";
                append_long_matrix(out, P[k]);
            }
            out += ']';
        }
        out += ",\n\"derotation\":";
        if (f.derotation)
            append_long_matrix(out, to_long(*f.derotation));
        else
            out += "null";
        out += ",\n\"interp_omegas\":[";
        for (size_t i = 0; i < f.interp_omegas.size(); ++i)
        {
            if (i)
                out += ',';
            out += long_number((long double)f.interp_omegas[i]);
        }
        out += "]}\n";
        return out;
    }

    AllPassFilter parse_filter(const std::string &text)
    {
        ljson j = parse_text<ljson>(text);
        reject_unknown(j, {"m", "degree", "N", "D", "derotation", "interp_omegas"}, "filter");
        const int m = integer(require(j, "m"), "m");
        auto poly = [m](const ljson &arr) {
            if (!arr.is_array() || arr.empty())
                parse_fail("polynomial must be a non-empty coefficient list");
            std::vector<LMatrix> c;
            for (const auto &C : arr)
            {
                c.push_back(matrix_from<long double>(C));
                if (c.back().rows() != m || c.back().cols() != m)
                    throw Error(ErrorCode::dimension_mismatch, "coefficient dimension does not match m");
            }
            return MatrixPolynomial(std::move(c));
        };
        AllPassFilter f;
        f.N = poly(require(j, "N"));
        f.D = poly(require(j, "D"));
        if (j.contains("degree") && integer(j.at("degree"), "degree") != f.degree())
            parse_fail("declared degree does not match the coefficient lists");
        if (j.contains("derotation") && !j.at("derotation").is_null())
        {
            CMatrix C = to_double(matrix_from<long double>(j.at("derotation")));
            if (C.rows() != m || C.cols() != m)
                throw Error(ErrorCode::dimension_mismatch, "derotation dimension does not match m");
            if (!(unitarity_defect(C) <= 1e-8))
                throw Error(ErrorCode::non_unitary, "derotation is not unitary");
            f.derotation = C;
        }
        if (j.contains("interp_omegas"))
            for (const auto &w : j.at("interp_omegas"))
                f.interp_omegas.push_back(num(w, "interp_omegas"));
        return f;
    }

    GdoptInput parse_gdopt_input(const std::string &text)
    {
        json j = parse_text<json>(text);
        GdoptInput in;
        if (j.is_object() && j.contains("points"))
        {
            for (const auto &p : parse_dataset(text))
            {
                in.omegas.push_back(p.omega);
                in.As.push_back(p.A);
            }
            return in;
        }
        reject_unknown(j, {"omegas", "As"}, "optimizer input");
        for (const auto &w : require(j, "omegas"))
            in.omegas.push_back(num(w, "omegas"));
        for (const auto &A : require(j, "As"))
            in.As.push_back(matrix_from<double>(A));
        if (in.omegas.size() != in.As.size() || in.omegas.empty())
            throw Error(ErrorCode::dimension_mismatch, "omegas and As must be non-empty and equally long");
        return in;
    }

    std::string gamma_assignment_to_json(const GammaAssignment &g)
    {
        json gs = json::array();
        for (const auto &G : g.gammas)
            gs.push_back(matrix_json(G));
        json j{{"gammas", gs},
               {"achieved_trace", g.achieved_trace},
               {"pd_witness", g.pd_witness},
               {"converged", g.converged},
               {"newton_steps", g.newton_steps},
               {"outer_steps", g.outer_steps},
               {"final_mu", g.final_mu}};
        return j.dump(1) + "\n";
    }

    std::string pick_to_json(const PickMatrix &P)
    {
        json j{{"m", P.dim()}, {"n", P.blocks()}, {"P", matrix_json(P.matrix())}};
        return j.dump(1) + "\n";
    }

    PowerDelayProfile parse_pdp(const std::string &text)
    {
        return pdp_from(parse_text<json>(text));
    }

    BarrierConfig parse_barrier_config(const std::string &text)
    {
        return barrier_from(parse_text<json>(text));
    }

    ComparisonConfig parse_comparison_config(const std::string &text)
    {
        json j = parse_text<json>(text);
        reject_unknown(j,
                       {"m", "n_points", "point_omegas", "grid_size", "n_seeds", "seed", "methods", "pdp", "barrier",
                        "threads", "max_retries", "anchor_at_pi"},
                       "comparison config");
        ComparisonConfig c;
        if (j.contains("m"))
            c.m = integer(j.at("m"), "m");
        if (j.contains("point_omegas"))
        {
            for (const auto &w : j.at("point_omegas"))
                c.point_omegas.push_back(num(w, "point_omegas"));
            c.n_points = (int)c.point_omegas.size();
        }
        if (j.contains("n_points"))
            c.n_points = integer(j.at("n_points"), "n_points");
        if (j.contains("grid_size"))
            c.grid_size = integer(j.at("grid_size"), "grid_size");
        if (j.contains("n_seeds"))
            c.n_seeds = integer(j.at("n_seeds"), "n_seeds");
        if (j.contains("seed"))
            c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("methods"))
        {
            if (!j.at("methods").is_array())
                parse_fail("methods must be an array");
            c.methods.clear();
            for (const auto &m : j.at("methods"))
                c.methods.push_back(m.get<std::string>());
        }
        if (j.contains("pdp"))
            c.pdp = pdp_from(j.at("pdp"));
        if (j.contains("barrier"))
            c.barrier = barrier_from(j.at("barrier"));
        if (j.contains("threads"))
            c.threads = integer(j.at("threads"), "threads");
        if (j.contains("max_retries"))
            c.design.max_retries = integer(j.at("max_retries"), "max_retries");
        if (j.contains("anchor_at_pi"))
        {
            if (!j.at("anchor_at_pi").is_boolean())
                throw Error(ErrorCode::parse_error, "anchor_at_pi must be a boolean");
            c.design.anchor_at_pi = j.at("anchor_at_pi").get<bool>();
        }
        c.validate();
        return c;
    }

    BenchConfig parse_bench_config(const std::string &text)
    {
        json j = parse_text<json>(text);
        reject_unknown(j, {"m_list", "n_points", "repetitions", "seed", "pdp"}, "bench config");
        BenchConfig c;
        if (j.contains("m_list"))
        {
            c.m_list.clear();
            for (const auto &m : j.at("m_list"))
                c.m_list.push_back(integer(m, "m_list"));
        }
        if (j.contains("n_points"))
            c.n_points = integer(j.at("n_points"), "n_points");
        if (j.contains("repetitions"))
            c.repetitions = integer(j.at("repetitions"), "repetitions");
        if (j.contains("seed"))
            c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("pdp"))
            c.pdp = pdp_from(j.at("pdp"));
        c.validate();
        return c;
    }

    std::string report_to_csv(const ComparisonReport &r)
    {
        std::string out = "method,metric,omega,mean,median\n";
        for (const auto &mc : r.methods)
            for (int metric = 0; metric < 2; ++metric)
            {
                const auto &mean = metric == 0 ? mc.flag_mean : mc.frob_mean;
                const auto &med = metric == 0 ? mc.flag_median : mc.frob_median;
                for (size_t g = 0; g < r.grid.size(); ++g)
                    out += mc.method + (metric == 0 ? ",flag," : ",frobenius,") + format_double(r.grid[g]) + "," +
                           format_double(mean[g]) + "," + format_double(med[g]) + "\n";
            }
        return out;
    }

    std::string report_summary_json(const ComparisonReport &r)
    {
        const auto &c = r.config;
        json methods = json::array();
        for (const auto &mc : r.methods)
            methods.push_back(json{{"method", mc.method},
                                   {"pooled_flag_median", number_or_null(mc.pooled_flag_median)},
                                   {"pooled_frobenius_median", number_or_null(mc.pooled_frob_median)},
                                   {"max_flag_at_points", mc.max_flag_at_points},
                                   {"successes", mc.successes},
                                   {"failures", mc.failures},
                                   {"failure_rate", mc.failure_rate},
                                   {"branch_ambiguities", mc.branch_ambiguities}});
        json timing = json::array();
        for (const auto &t : r.timing)
            timing.push_back(json{{"method", t.method},
                                  {"m", t.m},
                                  {"mean_ms", t.mean_ms},
                                  {"evaluations", t.repetitions},
                                  {"ratio_to_snip", number_or_null(t.ratio_to_snip)}});
        std::vector<double> pts;
        for (int i : r.point_indices)
            pts.push_back(r.grid[(size_t)i]);
        json config{{"m", c.m},         {"n_points", c.n_points},   {"point_omegas", pts},
                    {"grid_size", c.grid_size}, {"n_seeds", c.n_seeds}, {"seed", c.seed},
                    {"methods", c.methods},     {"pdp", pdp_json(c.pdp)}, {"anchor_at_pi", c.design.anchor_at_pi}};
        json j{{"config", config},
               {"grid_points", r.grid.size()},
               {"point_indices", r.point_indices},
               {"methods", methods},
               {"timing", timing},
               {"degenerate_tracks", r.degenerate_tracks}};
        return j.dump(1) + "\n";
    }

    std::string timing_to_csv(const std::vector<TimingRow> &rows)
    {
        std::string out = "method,m,mean_ms,repetitions,ratio_to_snip\n";
        for (const auto &t : rows)
            out += t.method + "," + std::to_string(t.m) + "," + format_double(t.mean_ms) + "," +
                   std::to_string(t.repetitions) + "," + format_double(t.ratio_to_snip) + "\n";
        return out;
    }

    std::string timing_summary_json(const BenchConfig &cfg, const std::vector<TimingRow> &rows)
    {
        json rs = json::array();
        for (const auto &t : rows)
            rs.push_back(json{{"method", t.method},
                              {"m", t.m},
                              {"mean_ms", t.mean_ms},
                              {"repetitions", t.repetitions},
                              {"ratio_to_snip", number_or_null(t.ratio_to_snip)}});
        json config{{"m_list", cfg.m_list},
                    {"n_points", cfg.n_points},
                    {"repetitions", cfg.repetitions},
                    {"seed", cfg.seed},
                    {"pdp", pdp_json(cfg.pdp)}};
        return json{{"config", config}, {"rows", rs}}.dump(1) + "\n";
    }

    VectorSignal parse_signal_csv(const std::string &text)
    {
        std::istringstream in(text);
        std::string line;
        std::vector<std::vector<double>> rows;
        bool first = true;
        size_t lineno = 0;
        while (std::getline(in, line))
        {
            ++lineno;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (line.find_first_not_of(" \t") == std::string::npos)
                continue;
            std::vector<double> vals;
            std::istringstream ls(line);
            std::string cell;
            bool numeric = true;
            while (std::getline(ls, cell, ','))
            {
                char *end = nullptr;
                double v = std::strtod(cell.c_str(), &end);
                while (end && *end && std::isspace((unsigned char)*end))
                    ++end;
                if (end == cell.c_str() || (end && *end))
                {
                    numeric = false;
                    break;
                }
                vals.push_back(v);
            }
            if (!numeric)
            {
                if (first)
                {
                    first = false;
                    continue;
                }
                parse_fail("non-numeric value on line " + std::to_string(lineno));
            }
            first = false;
            rows.push_back(std::move(vals));
        }
        if (rows.empty())
            parse_fail("signal file has no samples");
        const size_t cols = rows.front().size();
        if (cols < 3 || (cols - 1) % 2 != 0)
            parse_fail("signal rows need t followed by re/im pairs");
        const int m = (int)(cols - 1) / 2;
        VectorSignal x(m, rows.size());
        for (size_t t = 0; t < rows.size(); ++t)
        {
            if (rows[t].size() != cols)
                parse_fail("signal rows differ in length");
            for (int i = 0; i < m; ++i)
                x.at(t, i) = cdouble(rows[t][1 + 2 * (size_t)i], rows[t][2 + 2 * (size_t)i]);
        }
        return x;
    }

    std::string signal_to_csv(const VectorSignal &x)
    {
        std::string out = "t";
        for (int i = 1; i <= x.dim(); ++i)
            out += ",re_" + std::to_string(i) + ",im_" + std::to_string(i);
        out += "\n";
        for (size_t t = 0; t < x.length(); ++t)
        {
            out += std::to_string(t);
            for (int i = 0; i < x.dim(); ++i)
                out += "," + format_double(x.at(t, i).real()) + "," + format_double(x.at(t, i).imag());
            out += "\n";
        }
        return out;
    }
}
