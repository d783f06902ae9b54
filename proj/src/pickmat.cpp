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

#include "allpass/pickmat.hpp"

#include <cmath>
#include <string>

namespace allpass
{
    CMatrix signature_matrix(int m)
    {
        CMatrix J = CMatrix::Identity(2 * m, 2 * m);
        J.bottomRightCorner(m, m) *= -1.0;
        return J;
    }

    PickMatrix::PickMatrix(CMatrix P, int m) : P_(std::move(P)), m_(m)
    {
        if (m < 1 || P_.rows() != P_.cols() || P_.rows() % m != 0)
            throw Error(ErrorCode::dimension_mismatch, "Pick matrix must be square with m x m blocks");
    }

    CMatrix pick_block(double omega_i, const CMatrix &B_i, double omega_k, const CMatrix &B_k)
    {
        const Eigen::Index m = B_i.cols();
        CMatrix JBk = B_k;
        JBk.bottomRows(m) *= -1.0;
        cdouble den = 1.0 - unit_phasor(omega_i - omega_k);
        return (B_i.adjoint() * JBk) / den;
    }

    CMatrix pick_block_canonical(double omega_i, const CMatrix &A_i, double omega_k, const CMatrix &A_k)
    {
        const Eigen::Index m = A_i.cols();
        cdouble den = 1.0 - unit_phasor(omega_i - omega_k);
        return (CMatrix::Identity(m, m) - A_i.adjoint() * A_k) / den;
    }

    PickMatrix build_pick(const ValidatedDataSet &ds)
    {
        const int m = ds.dim();
        const int n = ds.size();
        for (int i = 0; i < n; ++i)
            if (!ds[i].gamma)
                throw Error(ErrorCode::missing_gamma,
                            "point " + std::to_string(i) + " has no gamma; run the group-delay optimizer first");

        CMatrix P(n * m, n * m);
        for (int i = 0; i < n; ++i)
        {
            P.block(i * m, i * m, m, m) = *ds[i].gamma;
            for (int k = i + 1; k < n; ++k)
            {
                CMatrix Q = pick_block(ds[i].omega, ds[i].lift.basis(), ds[k].omega, ds[k].lift.basis());
                P.block(i * m, k * m, m, m) = Q;
                P.block(k * m, i * m, m, m) = Q.adjoint();
            }
        }
        return PickMatrix(std::move(P), m);
    }

    double default_pd_margin(const PickMatrix &P)
    {
        const double nm = (double)P.matrix().rows();
        return 1e-10 * P.matrix().trace().real() / nm;
    }

    Definiteness is_positive_definite(const PickMatrix &P, std::optional<double> margin)
    {
        const CMatrix &M = P.matrix();
        if (!(hermitian_defect(M) <= 1e-10 * std::max(1.0, M.norm())))
            throw Error(ErrorCode::non_hermitian_input, "Pick matrix is not Hermitian");

        Definiteness d;
        d.margin = margin ? *margin : std::max(0.0, default_pd_margin(P));
        if (d.margin < 0.0)
            throw Error(ErrorCode::invalid_argument, "margin must be nonnegative");

        CMatrix H = 0.5 * (M + M.adjoint());
        CMatrix S = H - d.margin * CMatrix::Identity(H.rows(), H.cols());
        Eigen::LLT<CMatrix> llt(S);

        Eigen::SelfAdjointEigenSolver<CMatrix> es(H, Eigen::EigenvaluesOnly);
        d.min_eigenvalue = es.eigenvalues()(0);

        // A pivot can round either way at the boundary; the eigenvalue decides there
        if (llt.info() == Eigen::Success)
            d.positive_definite = d.min_eigenvalue > d.margin;
        else
            d.positive_definite = d.min_eigenvalue > d.margin * (1.0 + 1e-8);
        return d;
    }

    PickMatrix schur_reduce(const PickMatrix &P)
    {
        const int m = P.dim();
        const int n = P.blocks();
        if (n < 2)
            throw Error(ErrorCode::invalid_argument, "Schur reduction needs at least two blocks");
        const CMatrix &M = P.matrix();
        const Eigen::Index r = (Eigen::Index)(n - 1) * m;
        CMatrix G1 = M.topLeftCorner(m, m);
        double c = condition_number(G1);
        if (!(c < 1e14))
            throw Error(ErrorCode::singular_leading_block, "leading block is singular", c);
        CMatrix P12 = M.topRightCorner(m, r);
        CMatrix P21 = M.bottomLeftCorner(r, m);
        CMatrix S = M.bottomRightCorner(r, r) - P21 * G1.partialPivLu().solve(P12);
        S = 0.5 * (S + S.adjoint());
        return PickMatrix(std::move(S), m);
    }
}
