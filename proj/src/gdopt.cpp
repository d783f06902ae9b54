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

#include "allpass/gdopt.hpp"
#include "allpass/dataset.hpp"
#include "allpass/pickmat.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace allpass
{
    void BarrierConfig::validate() const
    {
        if (mu_init && !(*mu_init > 0.0))
            throw Error(ErrorCode::invalid_argument, "mu_init must be positive");
        if (!(mu_decay > 0.0 && mu_decay < 1.0))
            throw Error(ErrorCode::invalid_argument, "mu_decay must lie in (0, 1)");
        if (!(mu_final > 0.0))
            throw Error(ErrorCode::invalid_argument, "mu_final must be positive");
        if (mu_init && !(mu_final < *mu_init))
            throw Error(ErrorCode::invalid_argument, "mu_final must be below mu_init");
        if (!(pd_margin > 0.0))
            throw Error(ErrorCode::invalid_argument, "pd_margin must be positive");
        if (!(newton_tol > 0.0))
            throw Error(ErrorCode::invalid_argument, "newton_tol must be positive");
        if (max_newton < 1 || max_outer < 1)
            throw Error(ErrorCode::invalid_argument, "iteration budgets must be positive");
    }

    BarrierProblem::BarrierProblem(const std::vector<double> &omegas, const std::vector<CMatrix> &As, double margin)
        : margin_(margin)
    {
        if (omegas.size() != As.size())
            throw Error(ErrorCode::dimension_mismatch, "omegas and responses differ in length");
        std::vector<InterpolationPoint> raw(omegas.size());
        for (size_t i = 0; i < omegas.size(); ++i)
        {
            raw[i].omega = omegas[i];
            raw[i].A = As[i];
        }
        auto ds = validate_dataset(raw);
        m_ = ds.dim();
        n_ = ds.size();
        P0_ = CMatrix::Zero(n_ * m_, n_ * m_);
        for (int i = 0; i < n_; ++i)
            for (int k = i + 1; k < n_; ++k)
            {
                CMatrix Q = pick_block_canonical(ds[i].omega, ds[i].A, ds[k].omega, ds[k].A);
                P0_.block(i * m_, k * m_, m_, m_) = Q;
                P0_.block(k * m_, i * m_, m_, m_) = Q.adjoint();
            }
    }

    CMatrix BarrierProblem::assemble(const std::vector<CMatrix> &gammas) const
    {
        if ((int)gammas.size() != n_)
            throw Error(ErrorCode::dimension_mismatch, "gamma count does not match point count");
        CMatrix P = P0_;
        for (int i = 0; i < n_; ++i)
            P.block(i * m_, i * m_, m_, m_) = gammas[(size_t)i];
        return P;
    }

    namespace
    {
        // Cholesky of P - margin I, or empty on failure
        bool shifted_cholesky(const CMatrix &P, double margin, Eigen::LLT<CMatrix> &llt)
        {
            CMatrix S = 0.5 * (P + P.adjoint());
            S.diagonal().array() -= margin;
            llt.compute(S);
            if (llt.info() != Eigen::Success)
                return false;
            return (llt.matrixLLT().diagonal().real().array() > 0.0).all();
        }

        double total_trace(const std::vector<CMatrix> &g)
        {
            double t = 0.0;
            for (const auto &G : g)
                t += G.trace().real();
            return t;
        }
    }

    double BarrierProblem::objective(const std::vector<CMatrix> &gammas, double mu) const
    {
        CMatrix P = assemble(gammas);
        Eigen::LLT<CMatrix> llt;
        if (!shifted_cholesky(P, margin_, llt))
            return std::numeric_limits<double>::infinity();
        double logdet = 2.0 * llt.matrixLLT().diagonal().real().array().log().sum();
        return total_trace(gammas) - mu * logdet;
    }

    std::vector<CMatrix> BarrierProblem::gradient(const std::vector<CMatrix> &gammas, double mu) const
    {
        CMatrix P = assemble(gammas);
        Eigen::LLT<CMatrix> llt;
        if (!shifted_cholesky(P, margin_, llt))
            throw Error(ErrorCode::invalid_argument, "gradient requested outside the barrier domain");
        CMatrix X = llt.solve(CMatrix::Identity(P.rows(), P.cols()));
        std::vector<CMatrix> g((size_t)n_);
        for (int i = 0; i < n_; ++i)
        {
            CMatrix Xii = X.block(i * m_, i * m_, m_, m_);
            CMatrix G = CMatrix::Identity(m_, m_) - mu * Xii;
            g[(size_t)i] = 0.5 * (G + G.adjoint());
        }
        return g;
    }

    std::vector<CMatrix> BarrierProblem::newton_direction(const std::vector<CMatrix> &gammas, double mu,
                                                          double &decrement_sq) const
    {
        CMatrix P = assemble(gammas);
        Eigen::LLT<CMatrix> llt;
        if (!shifted_cholesky(P, margin_, llt))
            throw Error(ErrorCode::invalid_argument, "Newton step requested outside the barrier domain");
        CMatrix X = llt.solve(CMatrix::Identity(P.rows(), P.cols()));
        X = 0.5 * (X + X.adjoint());

        const int m2 = m_ * m_;
        const int N = n_ * m2;
        // Column-major vec: vec(A D B) = (B^T kron A) vec(D)
        CMatrix H(N, N);
        for (int i = 0; i < n_; ++i)
            for (int k = 0; k < n_; ++k)
            {
                CMatrix Xik = X.block(i * m_, k * m_, m_, m_);
                CMatrix XkiT = X.block(k * m_, i * m_, m_, m_).transpose();
                for (int a = 0; a < m_; ++a)
                    for (int b = 0; b < m_; ++b)
                        H.block(i * m2 + a * m_, k * m2 + b * m_, m_, m_) = (mu * XkiT(a, b)) * Xik;
            }

        CVector rhs(N);
        for (int i = 0; i < n_; ++i)
        {
            CMatrix G = CMatrix::Identity(m_, m_) - mu * X.block(i * m_, i * m_, m_, m_);
            G = 0.5 * (G + G.adjoint());
            rhs.segment(i * m2, m2) = -Eigen::Map<const CVector>(G.data(), m2);
        }

        CMatrix Hh = 0.5 * (H + H.adjoint());
        Eigen::LLT<CMatrix> hl(Hh);
        CVector sol = hl.info() == Eigen::Success ? CVector(hl.solve(rhs)) : CVector(Hh.partialPivLu().solve(rhs));

        std::vector<CMatrix> dir((size_t)n_);
        decrement_sq = 0.0;
        for (int i = 0; i < n_; ++i)
        {
            CMatrix D = Eigen::Map<const CMatrix>(sol.data() + i * m2, m_, m_);
            D = 0.5 * (D + D.adjoint());
            CMatrix G = -Eigen::Map<const CMatrix>(rhs.data() + i * m2, m_, m_);
            decrement_sq -= (G * D).trace().real();
            dir[(size_t)i] = std::move(D);
        }
        return dir;
    }

    std::vector<CMatrix> feasible_initialization(const std::vector<double> &omegas, const std::vector<CMatrix> &As,
                                                 double margin)
    {
        BarrierProblem prob(omegas, As, margin);
        const int m = prob.dim();
        const int n = prob.size();
        std::vector<CMatrix> g((size_t)n);
        for (int i = 0; i < n; ++i)
        {
            double r = 0.0;
            for (int k = 0; k < n; ++k)
                if (k != i)
                {
                    Eigen::JacobiSVD<CMatrix> svd(prob.off_diagonal().block(i * m, k * m, m, m));
                    r += svd.singularValues()(0);
                }
            g[(size_t)i] = (r + margin + 1.0) * CMatrix::Identity(m, m);
        }
        return g;
    }

    GammaAssignment optimize_group_delays(const std::vector<double> &omegas, const std::vector<CMatrix> &As,
                                          const BarrierConfig &cfg)
    {
        cfg.validate();
        BarrierProblem prob(omegas, As, cfg.pd_margin);
        const int m = prob.dim();
        const int n = prob.size();

        std::vector<CMatrix> gam = feasible_initialization(omegas, As, cfg.pd_margin);
        if (!std::isfinite(prob.objective(gam, 1.0)))
            throw Error(ErrorCode::infeasible_start, "initial group-delay matrices are not feasible");

        double mu = cfg.mu_init ? *cfg.mu_init : total_trace(gam) / (double)(n * m);
        if (!cfg.mu_init && !(cfg.mu_final < mu))
            mu = cfg.mu_final;

        GammaAssignment out;
        out.converged = true;
        const double armijo = 0.01;
        const double shrink = 0.5;
        for (int outer = 0; outer < cfg.max_outer; ++outer)
        {
            bool centered = false;
            for (int it = 0; it < cfg.max_newton; ++it)
            {
                double lam2 = 0.0;
                auto dir = prob.newton_direction(gam, mu, lam2);
                if (!(lam2 >= 0.0) || 0.5 * lam2 <= cfg.newton_tol)
                {
                    centered = true;
                    break;
                }
                double f0 = prob.objective(gam, mu);
                double t = 1.0;
                std::vector<CMatrix> trial((size_t)n);
                bool accepted = false;
                for (int ls = 0; ls < 80; ++ls)
                {
                    for (int i = 0; i < n; ++i)
                        trial[(size_t)i] = gam[(size_t)i] + t * dir[(size_t)i];
                    double f1 = prob.objective(trial, mu);
                    if (std::isfinite(f1) && f1 <= f0 - armijo * t * lam2)
                    {
                        accepted = true;
                        break;
                    }
                    t *= shrink;
                }
                ++out.newton_steps;
                if (!accepted)
                {
                    // No progress possible in double precision: treat as centered
                    centered = true;
                    break;
                }
                gam = trial;
            }
            if (!centered)
                out.converged = false;
            out.trace_history.push_back(total_trace(gam));
            ++out.outer_steps;
            out.final_mu = mu;
            if (mu <= cfg.mu_final)
                break;
            mu = std::max(mu * cfg.mu_decay, cfg.mu_final);
            if (outer + 1 == cfg.max_outer)
                out.converged = false;
        }

        for (auto &G : gam)
            G = 0.5 * (G + G.adjoint());
        out.gammas = gam;
        out.achieved_trace = total_trace(gam);
        out.pd_witness = min_hermitian_eigenvalue(prob.assemble(gam));
        return out;
    }
}
