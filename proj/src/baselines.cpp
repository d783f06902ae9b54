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

#include "allpass/baselines.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace allpass
{
    UnitaryLog unitary_log(const CMatrix &U)
    {
        if (U.rows() != U.cols() || U.rows() == 0)
            throw Error(ErrorCode::dimension_mismatch, "logarithm needs a square matrix");
        const Eigen::Index m = U.rows();
        Eigen::ComplexSchur<CMatrix> schur(U);
        const CMatrix &Q = schur.matrixU();
        const CMatrix &T = schur.matrixT();
        UnitaryLog out;
        CVector theta(m);
        for (Eigen::Index i = 0; i < m; ++i)
        {
            cdouble t = T(i, i);
            double phase = std::arg(t);
            if (std::abs(t + 1.0) < 1e-9)
            {
                out.branch_ambiguous = true;
                phase = pi;
            }
            theta(i) = cdouble(0.0, phase);
        }
        CMatrix X = Q * theta.asDiagonal() * Q.adjoint();
        out.X = 0.5 * (X - X.adjoint());
        return out;
    }

    CMatrix skew_hermitian_exp(const CMatrix &X)
    {
        // X = jH with H Hermitian
        CMatrix H = cdouble(0.0, -1.0) * X;
        H = 0.5 * (H + H.adjoint());
        Eigen::SelfAdjointEigenSolver<CMatrix> es(H);
        CVector e(H.rows());
        for (Eigen::Index i = 0; i < H.rows(); ++i)
            e(i) = unit_phasor(es.eigenvalues()(i));
        return es.eigenvectors() * e.asDiagonal() * es.eigenvectors().adjoint();
    }

    GeodesicResult geodesic_interpolate(const UnitarySample &a, const UnitarySample &b, double omega)
    {
        if (a.U.rows() != b.U.rows() || a.U.cols() != b.U.cols())
            throw Error(ErrorCode::dimension_mismatch, "geodesic endpoints differ in dimension");
        if (!(a.omega < b.omega) || omega < a.omega || omega > b.omega)
            throw Error(ErrorCode::invalid_argument, "geodesic frequency outside the anchor interval");
        if (omega == a.omega)
            return {a.U, false};
        if (omega == b.omega)
            return {b.U, false};
        double t = (omega - a.omega) / (b.omega - a.omega);
        UnitaryLog L = unitary_log(a.U.adjoint() * b.U);
        return {a.U * skew_hermitian_exp(t * L.X), L.branch_ambiguous};
    }

    PiecewiseGeodesic::PiecewiseGeodesic(std::vector<UnitarySample> anchors) : anchors_(std::move(anchors))
    {
        if (anchors_.empty())
            throw Error(ErrorCode::invalid_argument, "geodesic interpolation needs at least one anchor");
        for (auto &a : anchors_)
            a.omega = wrap_angle(a.omega);
        std::sort(anchors_.begin(), anchors_.end(),
                  [](const UnitarySample &x, const UnitarySample &y) { return x.omega < y.omega; });
        for (size_t i = 1; i < anchors_.size(); ++i)
            if (!(anchors_[i].omega > anchors_[i - 1].omega))
                throw Error(ErrorCode::duplicate_frequency, "geodesic anchors share a frequency");
    }

    GeodesicResult PiecewiseGeodesic::operator()(double omega) const
    {
        const size_t n = anchors_.size();
        if (n == 1)
            return {anchors_.front().U, false};
        double w = wrap_angle(omega);
        const auto &first = anchors_.front();
        const auto &last = anchors_.back();
        if (w >= first.omega && w <= last.omega)
        {
            auto it = std::upper_bound(anchors_.begin(), anchors_.end(), w,
                                       [](double v, const UnitarySample &s) { return v < s.omega; });
            size_t k = (size_t)(it - anchors_.begin());
            if (k == n)
                return {last.U, false};
            return geodesic_interpolate(anchors_[k - 1], anchors_[k], w);
        }
        UnitarySample wrapped{first.omega + 2.0 * pi, first.U};
        if (w < first.omega)
            w += 2.0 * pi;
        return geodesic_interpolate(last, wrapped, w);
    }

    double frobenius_error(const CMatrix &U, const CMatrix &V)
    {
        if (U.rows() != V.rows() || U.cols() != V.cols())
            throw Error(ErrorCode::dimension_mismatch, "matrices differ in dimension");
        return (U - V).norm();
    }

    double flag_distance(const CMatrix &U, const CMatrix &V)
    {
        if (U.rows() != V.rows() || U.cols() != V.cols())
            throw Error(ErrorCode::dimension_mismatch, "matrices differ in dimension");
        // Evaluates |U - V T|_F at the optimal phases T_ii = arg (V*U)_ii; equal to
        // sqrt(2m - 2 sum |(V*U)_ii|) for unitary inputs without its cancellation near zero
        const Eigen::Index m = U.cols();
        double s = 0.0;
        for (Eigen::Index i = 0; i < m; ++i)
        {
            cdouble d = V.col(i).dot(U.col(i));
            double a = std::abs(d);
            cdouble t = a > 0.0 ? d / a : cdouble(1.0);
            s += (U.col(i) - t * V.col(i)).squaredNorm();
        }
        return std::sqrt(s);
    }
}
