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

#include "allpass/polyfilter.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace allpass
{
    CVector VectorSignal::sample(size_t t) const
    {
        CVector v(m_);
        for (int i = 0; i < m_; ++i)
            v(i) = at(t, i);
        return v;
    }

    void VectorSignal::set_sample(size_t t, const CVector &v)
    {
        if (v.size() != m_)
            throw Error(ErrorCode::dimension_mismatch, "sample has wrong dimension");
        for (int i = 0; i < m_; ++i)
            at(t, i) = v(i);
    }

    double VectorSignal::energy() const
    {
        double e = 0.0;
        for (const auto &v : data_)
            e += std::norm(v);
        return e;
    }

    CMatrix eval_poly(const MatrixPolynomial &P, cdouble z)
    {
        return to_double(P.evaluate(cldouble(z.real(), z.imag())));
    }

    namespace
    {
        void check_filter(const AllPassFilter &f)
        {
            if (f.N.empty() || f.D.empty() || f.N.dim() != f.D.dim())
                throw Error(ErrorCode::dimension_mismatch, "filter numerator and denominator dimensions differ");
        }

        // sigma_min / sigma_max, 0 for the zero matrix
        long double reciprocal_condition(const LMatrix &M)
        {
            Eigen::JacobiSVD<LMatrix> svd(M);
            const auto &s = svd.singularValues();
            return s(0) > 0 ? s(s.size() - 1) / s(0) : 0.0L;
        }

        Eigen::PartialPivLU<LMatrix> denominator_lu(const AllPassFilter &f, cldouble z)
        {
            LMatrix Dz = f.D.evaluate(z);
            long double rc = reciprocal_condition(Dz);
            Eigen::PartialPivLU<LMatrix> lu(Dz);
            if (!(rc > 1e-12L))
                throw Error(ErrorCode::singular_denominator, "denominator is singular at the evaluation point",
                            rc > 0 ? (double)(1.0L / rc) : INFINITY);
            return lu;
        }
    }

    LMatrix eval_filter_long(const AllPassFilter &f, double omega)
    {
        check_filter(f);
        cldouble z = std::polar(1.0L, (long double)omega);
        auto lu = denominator_lu(f, z);
        LMatrix G = f.N.evaluate(z) * lu.inverse();
        if (f.derotation)
            G = G * to_long(f.derotation->adjoint());
        return G;
    }

    CMatrix eval_filter(const AllPassFilter &f, double omega)
    {
        return to_double(eval_filter_long(f, omega));
    }

    FilterEvaluator::FilterEvaluator(const AllPassFilter &f)
    {
        check_filter(f);
        m_ = f.dim();
        dn_ = f.N.degree();
        dd_ = f.D.degree();
        const size_t mm = (size_t)m_ * (size_t)m_;
        auto pack = [&](const MatrixPolynomial &P, std::vector<cldouble> &dst) {
            dst.resize(mm * (size_t)(P.degree() + 1));
            for (int k = 0; k <= P.degree(); ++k)
                for (int r = 0; r < m_; ++r)
                    for (int c = 0; c < m_; ++c)
                        dst[(size_t)k * mm + (size_t)(r * m_ + c)] = P[k](r, c);
        };
        pack(f.N, n_);
        pack(f.D, d_);
        if (f.derotation)
        {
            cstar_.resize(mm);
            for (int r = 0; r < m_; ++r)
                for (int c = 0; c < m_; ++c)
                    cstar_[(size_t)(r * m_ + c)] = std::conj((cldouble)(*f.derotation)(c, r));
        }
        a_.resize(mm);
        b_.resize(mm);
        out_.resize(m_, m_);
    }

    const CMatrix &FilterEvaluator::operator()(double omega)
    {
        const int m = m_;
        const size_t mm = (size_t)m * (size_t)m;
        const long double zr = std::cos((long double)omega), zi = std::sin((long double)omega);
        auto horner = [&](const std::vector<cldouble> &P, int deg, size_t e) {
            long double re = P[(size_t)deg * mm + e].real(), im = P[(size_t)deg * mm + e].imag();
            for (int k = deg - 1; k >= 0; --k)
            {
                const cldouble &c = P[(size_t)k * mm + e];
                const long double t = re * zr - im * zi + c.real();
                im = re * zi + im * zr + c.imag();
                re = t;
            }
            return cldouble(re, im);
        };
        // a = D(z)^T, b = N(z)^T
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c)
            {
                const size_t e = (size_t)(r * m + c), t = (size_t)(c * m + r);
                a_[t] = horner(d_, dd_, e);
                b_[t] = horner(n_, dn_, e);
            }
        long double scale = 0.0L;
        for (size_t e = 0; e < mm; ++e)
            scale = std::max(scale, std::abs(a_[e]));
        // Solve D^T X = N^T, X = G^T
        for (int k = 0; k < m; ++k)
        {
            int p = k;
            for (int r = k + 1; r < m; ++r)
                if (std::abs(a_[(size_t)(r * m + k)]) > std::abs(a_[(size_t)(p * m + k)]))
                    p = r;
            const cldouble piv = a_[(size_t)(p * m + k)];
            if (!(std::abs(piv) > 1e-15L * scale))
                throw Error(ErrorCode::singular_denominator, "denominator is singular on the unit circle");
            if (p != k)
                for (int c = 0; c < m; ++c)
                {
                    std::swap(a_[(size_t)(p * m + c)], a_[(size_t)(k * m + c)]);
                    std::swap(b_[(size_t)(p * m + c)], b_[(size_t)(k * m + c)]);
                }
            const cldouble inv = 1.0L / piv;
            for (int r = k + 1; r < m; ++r)
            {
                const cldouble l = a_[(size_t)(r * m + k)] * inv;
                for (int c = k + 1; c < m; ++c)
                    a_[(size_t)(r * m + c)] -= l * a_[(size_t)(k * m + c)];
                for (int c = 0; c < m; ++c)
                    b_[(size_t)(r * m + c)] -= l * b_[(size_t)(k * m + c)];
            }
        }
        for (int k = m - 1; k >= 0; --k)
        {
            const cldouble inv = 1.0L / a_[(size_t)(k * m + k)];
            for (int c = 0; c < m; ++c)
            {
                cldouble acc = b_[(size_t)(k * m + c)];
                for (int j = k + 1; j < m; ++j)
                    acc -= a_[(size_t)(k * m + j)] * b_[(size_t)(j * m + c)];
                b_[(size_t)(k * m + c)] = acc * inv;
            }
        }
        // G(r, c) = X(c, r), then G C*
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c)
            {
                if (cstar_.empty())
                {
                    const cldouble g = b_[(size_t)(c * m + r)];
                    out_(r, c) = cdouble((double)g.real(), (double)g.imag());
                    continue;
                }
                cldouble acc = 0.0L;
                for (int j = 0; j < m; ++j)
                    acc += b_[(size_t)(j * m + r)] * cstar_[(size_t)(j * m + c)];
                out_(r, c) = cdouble((double)acc.real(), (double)acc.imag());
            }
        return out_;
    }

    GroupDelayMatrix group_delay(const AllPassFilter &f, double omega)
    {
        check_filter(f);
        cldouble z = std::polar(1.0L, (long double)omega);
        auto lu = denominator_lu(f, z);
        LMatrix Dinv = lu.inverse();
        LMatrix G = f.N.evaluate(z) * Dinv;
        LMatrix dG = (f.N.derivative().evaluate(z) - G * f.D.derivative().evaluate(z)) * Dinv;
        // F = j G* (j z dG/dz) = -z G* dG/dz
        LMatrix F = -(G.adjoint() * dG) * z;
        if (f.derotation)
        {
            LMatrix C = to_long(*f.derotation);
            F = C * F * C.adjoint();
        }
        GroupDelayMatrix out;
        out.omega = omega;
        CMatrix Fd = to_double(F);
        out.F = 0.5 * (Fd + Fd.adjoint());
        out.skew_norm = 0.5 * (Fd - Fd.adjoint()).norm();
        return out;
    }

    std::vector<double> uniform_circle_grid(int n)
    {
        if (n < 1)
            throw Error(ErrorCode::invalid_argument, "grid size must be positive");
        std::vector<double> w((size_t)n);
        for (int k = 0; k < n; ++k)
            w[(size_t)k] = -pi + 2.0 * pi * (double)(k + 1) / (double)n;
        return w;
    }

    double unitarity_deviation(const AllPassFilter &f, int grid_size)
    {
        if (grid_size < 2)
            throw Error(ErrorCode::invalid_argument, "grid size must be at least 2");
        const int m = f.dim();
        double worst = 0.0;
        for (double w : uniform_circle_grid(grid_size))
        {
            LMatrix G = eval_filter_long(f, w);
            LMatrix E = G.adjoint() * G - LMatrix::Identity(m, m);
            worst = std::max(worst, (double)E.norm());
        }
        return worst;
    }

    double pole_radius(const AllPassFilter &f)
    {
        check_filter(f);
        const int m = f.dim();
        const int d = f.D.degree();
        if (d == 0)
            return 0.0;
        Eigen::PartialPivLU<LMatrix> lu(f.D[d]);
        LMatrix Dd_inv = lu.inverse();
        CMatrix Cmp = CMatrix::Zero(m * d, m * d);
        for (int k = 0; k + 1 < d; ++k)
            Cmp.block(k * m, (k + 1) * m, m, m) = CMatrix::Identity(m, m);
        for (int k = 0; k < d; ++k)
            Cmp.block((d - 1) * m, k * m, m, m) = -to_double(LMatrix(Dd_inv * f.D[k]));
        Eigen::ComplexEigenSolver<CMatrix> es(Cmp, false);
        return es.eigenvalues().cwiseAbs().maxCoeff();
    }

    SimulationResult lccde_filter(const AllPassFilter &f, const VectorSignal &x)
    {
        check_filter(f);
        const int m = f.dim();
        if (x.dim() != m)
            throw Error(ErrorCode::dimension_mismatch, "signal dimension does not match filter");
        const int d = f.D.degree();
        const int dn = f.N.degree();
        if (dn > d)
            throw Error(ErrorCode::invalid_argument, "numerator degree exceeds denominator degree (non-causal)");

        long double rc = reciprocal_condition(f.D[d]);
        Eigen::PartialPivLU<LMatrix> lu(f.D[d]);
        if (!(rc > 1e-10L))
            throw Error(ErrorCode::singular_leading_coefficient,
                        "leading denominator coefficient is singular; filter in the frequency domain instead",
                        rc > 0 ? (double)(1.0L / rc) : INFINITY);
        LMatrix Dd_inv = lu.inverse();

        SimulationResult res;
        res.spectral_radius = pole_radius(f);
        res.unstable = res.spectral_radius > 1.0 + 1e-9;

        LMatrix Cstar;
        if (f.derotation)
            Cstar = to_long(f.derotation->adjoint());

        const size_t T = x.length();
        using LVector = Eigen::Matrix<cldouble, Eigen::Dynamic, 1>;
        std::vector<LVector> w(T + (size_t)d, LVector::Zero(m));
        res.output = VectorSignal(m, T);
        for (size_t t = 0; t < T; ++t)
        {
            LVector xt(m);
            for (int i = 0; i < m; ++i)
                xt(i) = cldouble(x.at(t, i).real(), x.at(t, i).imag());
            if (f.derotation)
                xt = Cstar * xt;
            LVector acc = xt;
            for (int k = 0; k < d; ++k)
                acc -= f.D[k] * w[t + (size_t)k];
            w[t + (size_t)d] = Dd_inv * acc;
            LVector y = LVector::Zero(m);
            for (int k = 0; k <= dn; ++k)
                y += f.N[k] * w[t + (size_t)k];
            for (int i = 0; i < m; ++i)
                res.output.at(t, i) = cdouble((double)y(i).real(), (double)y(i).imag());
        }
        return res;
    }
}
