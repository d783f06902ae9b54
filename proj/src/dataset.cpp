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

#include "allpass/dataset.hpp"

#include <cmath>
#include <string>

namespace allpass
{
    namespace
    {
        CMatrix signature(int m)
        {
            CMatrix J = CMatrix::Identity(2 * m, 2 * m);
            J.bottomRightCorner(m, m) *= -1.0;
            return J;
        }

        void check_unitary(const CMatrix &A, double tol, const char *what)
        {
            if (A.rows() != A.cols() || A.rows() == 0)
                throw Error(ErrorCode::dimension_mismatch, std::string(what) + " must be a non-empty square matrix");
            if (!A.allFinite())
                throw Error(ErrorCode::invalid_argument, std::string(what) + " has non-finite entries");
            double d = unitarity_defect(A);
            if (!(d <= tol))
                throw Error(ErrorCode::non_unitary, std::string(what) + " is not unitary (|A*A - I|_F = " +
                                                        std::to_string(d) + ")");
        }

        void check_gamma(const CMatrix &G, int m, const Tolerances &tol, bool require_positive, int index)
        {
            std::string where = "gamma of point " + std::to_string(index);
            if (G.rows() != m || G.cols() != m)
                throw Error(ErrorCode::dimension_mismatch, where + " has wrong dimension");
            if (!G.allFinite())
                throw Error(ErrorCode::invalid_argument, where + " has non-finite entries");
            double scale = std::max(1.0, G.norm());
            if (!(hermitian_defect(G) <= tol.hermitian * scale))
                throw Error(ErrorCode::non_hermitian_gamma, where + " is not Hermitian");
            if (require_positive)
            {
                double lmin = min_hermitian_eigenvalue(G);
                if (!(lmin > 0.0))
                    throw Error(ErrorCode::non_positive_gamma, where + " is not positive definite", lmin);
            }
        }
    }

    NeutralLift NeutralLift::from_basis(const CMatrix &B, const Tolerances &tol)
    {
        if (B.cols() == 0 || B.rows() != 2 * B.cols())
            throw Error(ErrorCode::dimension_mismatch, "lift basis must be 2m x m");
        if (!B.allFinite())
            throw Error(ErrorCode::invalid_argument, "lift basis has non-finite entries");
        NeutralLift L(B);
        double scale = B.squaredNorm();
        if (!(L.neutrality_defect() <= tol.neutrality * scale))
            throw Error(ErrorCode::lost_neutrality, "lift basis is not neutral (|B*JB|_F = " +
                                                        std::to_string(L.neutrality_defect()) + ")");
        double c = condition_number(L.block1());
        if (!(c <= tol.max_block_condition))
            throw Error(ErrorCode::non_invertible_top_block, "top block of lift basis is singular", c);
        return L;
    }

    CMatrix NeutralLift::ratio() const
    {
        // X B1 = B2  <=>  B1^* X^* = B2^*
        CMatrix B1 = block1();
        CMatrix B2 = block2();
        return B1.adjoint().partialPivLu().solve(B2.adjoint()).adjoint();
    }

    double NeutralLift::neutrality_defect() const
    {
        return (B_.adjoint() * signature(dim()) * B_).norm();
    }

    NeutralLift lift_neutral(const CMatrix &A, const Tolerances &tol)
    {
        check_unitary(A, tol.unitarity, "response");
        const Eigen::Index m = A.rows();
        CMatrix B(2 * m, m);
        B.topRows(m) = CMatrix::Identity(m, m);
        B.bottomRows(m) = A;
        return NeutralLift::from_basis(B, tol);
    }

    ValidatedDataSet ValidatedDataSet::from_points(int m, std::vector<DataPoint> points, const Tolerances &tol,
                                                   bool require_positive_gamma)
    {
        if (points.empty())
            throw Error(ErrorCode::invalid_argument, "data set must contain at least one point");
        if (m < 1)
            throw Error(ErrorCode::dimension_mismatch, "matrix dimension must be positive");

        for (size_t i = 0; i < points.size(); ++i)
        {
            auto &p = points[i];
            if (!std::isfinite(p.omega))
                throw Error(ErrorCode::invalid_argument, "frequency of point " + std::to_string(i) + " is not finite");
            p.omega = wrap_angle(p.omega);
            if (angular_distance(p.omega, pi) < tol.pi_guard)
                throw Error(ErrorCode::frequency_at_pi, "frequency of point " + std::to_string(i) +
                                                            " is too close to pi; rotate the frequencies first");
            if (p.lift.dim() != m)
                throw Error(ErrorCode::dimension_mismatch, "point " + std::to_string(i) + " has wrong dimension");
            p.A = p.lift.ratio();
            check_unitary(p.A, tol.unitarity, "response");
            if (p.gamma)
                check_gamma(*p.gamma, m, tol, require_positive_gamma, (int)i);
        }
        for (size_t i = 0; i < points.size(); ++i)
            for (size_t k = i + 1; k < points.size(); ++k)
                if (angular_distance(points[i].omega, points[k].omega) < tol.min_separation)
                    throw Error(ErrorCode::duplicate_frequency, "points " + std::to_string(i) + " and " +
                                                                    std::to_string(k) + " share a frequency");

        ValidatedDataSet ds;
        ds.m_ = m;
        ds.points_ = std::move(points);
        ds.tol_ = tol;
        return ds;
    }

    bool ValidatedDataSet::has_all_gammas() const
    {
        for (const auto &p : points_)
            if (!p.gamma)
                return false;
        return true;
    }

    std::vector<double> ValidatedDataSet::omegas() const
    {
        std::vector<double> w;
        w.reserve(points_.size());
        for (const auto &p : points_)
            w.push_back(p.omega);
        return w;
    }

    std::vector<CMatrix> ValidatedDataSet::responses() const
    {
        std::vector<CMatrix> a;
        a.reserve(points_.size());
        for (const auto &p : points_)
            a.push_back(p.A);
        return a;
    }

    CMatrix ValidatedDataSet::canonical_gamma(int i) const
    {
        const auto &p = points_.at((size_t)i);
        if (!p.gamma)
            throw Error(ErrorCode::missing_gamma, "point " + std::to_string(i) + " has no gamma");
        CMatrix B1 = p.lift.block1();
        auto lu = B1.partialPivLu();
        // B1^-* G B1^-1
        CMatrix X = lu.inverse();
        CMatrix G = X.adjoint() * (*p.gamma) * X;
        return 0.5 * (G + G.adjoint());
    }

    std::vector<InterpolationPoint> ValidatedDataSet::raw_points() const
    {
        std::vector<InterpolationPoint> raw;
        raw.reserve(points_.size());
        for (int i = 0; i < size(); ++i)
        {
            const auto &p = points_[(size_t)i];
            InterpolationPoint q;
            q.omega = p.omega;
            q.A = p.A;
            if (p.gamma)
            {
                bool canonical = (p.lift.block1() - CMatrix::Identity(m_, m_)).norm() == 0.0;
                q.gamma = canonical ? *p.gamma : canonical_gamma(i);
            }
            raw.push_back(std::move(q));
        }
        return raw;
    }

    ValidatedDataSet ValidatedDataSet::with_gammas(const std::vector<CMatrix> &gammas) const
    {
        if ((int)gammas.size() != size())
            throw Error(ErrorCode::dimension_mismatch, "gamma count does not match point count");
        auto raw = raw_points();
        for (size_t i = 0; i < raw.size(); ++i)
            raw[i].gamma = gammas[i];
        return validate_dataset(raw, tol_);
    }

    ValidatedDataSet validate_dataset(const std::vector<InterpolationPoint> &raw_points, const Tolerances &tol)
    {
        if (raw_points.empty())
            throw Error(ErrorCode::invalid_argument, "data set must contain at least one point");
        const int m = (int)raw_points.front().A.rows();
        std::vector<DataPoint> pts;
        pts.reserve(raw_points.size());
        for (size_t i = 0; i < raw_points.size(); ++i)
        {
            const auto &r = raw_points[i];
            if (r.A.rows() != m || r.A.cols() != m)
                throw Error(ErrorCode::dimension_mismatch, "point " + std::to_string(i) + " has wrong dimension");
            DataPoint p;
            p.omega = r.omega;
            p.lift = lift_neutral(r.A, tol);
            p.gamma = r.gamma;
            pts.push_back(std::move(p));
        }
        return ValidatedDataSet::from_points(m, std::move(pts), tol, true);
    }

    ValidatedDataSet derotate(const ValidatedDataSet &ds, const CMatrix &C)
    {
        const auto &tol = ds.tolerances();
        check_unitary(C, tol.unitarity, "derotation");
        if (C.rows() != ds.dim())
            throw Error(ErrorCode::dimension_mismatch, "derotation has wrong dimension");
        auto raw = ds.raw_points();
        for (auto &p : raw)
        {
            p.A = p.A * C;
            if (p.gamma)
                p.gamma = C.adjoint() * (*p.gamma) * C;
        }
        return validate_dataset(raw, tol);
    }

    CMatrix random_gaussian(int rows, int cols, std::mt19937_64 &rng)
    {
        std::normal_distribution<double> nd(0.0, 1.0);
        const double s = 1.0 / std::sqrt(2.0);
        CMatrix X(rows, cols);
        for (int c = 0; c < cols; ++c)
            for (int r = 0; r < rows; ++r)
            {
                double re = nd(rng);
                double im = nd(rng);
                X(r, c) = cdouble(s * re, s * im);
            }
        return X;
    }

    CMatrix random_unitary(int m, std::mt19937_64 &rng)
    {
        CMatrix X = random_gaussian(m, m, rng);
        Eigen::HouseholderQR<CMatrix> qr(X);
        CMatrix Q = qr.householderQ() * CMatrix::Identity(m, m);
        CMatrix R = qr.matrixQR().triangularView<Eigen::Upper>();
        for (int i = 0; i < m; ++i)
        {
            cdouble d = R(i, i);
            double a = std::abs(d);
            if (a > 0.0)
                Q.col(i) *= d / a;
        }
        return Q;
    }
}
