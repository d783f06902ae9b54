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

#ifndef ALLPASS_QUAD_HPP
#define ALLPASS_QUAD_HPP

#include "allpass/common.hpp"

#include <boost/multiprecision/complex128.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/float128.hpp>

#include <vector>

namespace allpass::detail
{
    using qreal = boost::multiprecision::float128;
    using qcomplex = boost::multiprecision::complex128;
    using QMatrix = Eigen::Matrix<qcomplex, Eigen::Dynamic, Eigen::Dynamic>;
    using QPoly = std::vector<QMatrix>;

    inline qcomplex q_phasor(double omega)
    {
        qreal w(omega);
        return qcomplex(boost::multiprecision::cos(w), boost::multiprecision::sin(w));
    }

    inline QMatrix q_eye(Eigen::Index m) { return QMatrix::Identity(m, m); }

    inline QMatrix to_quad(const CMatrix &M)
    {
        QMatrix R(M.rows(), M.cols());
        for (Eigen::Index c = 0; c < M.cols(); ++c)
            for (Eigen::Index r = 0; r < M.rows(); ++r)
                R(r, c) = qcomplex(qreal(M(r, c).real()), qreal(M(r, c).imag()));
        return R;
    }

    inline QMatrix to_quad(const LMatrix &M)
    {
        QMatrix R(M.rows(), M.cols());
        for (Eigen::Index c = 0; c < M.cols(); ++c)
            for (Eigen::Index r = 0; r < M.rows(); ++r)
                R(r, c) = qcomplex(qreal(M(r, c).real()), qreal(M(r, c).imag()));
        return R;
    }

    inline LMatrix to_long(const QMatrix &M)
    {
        LMatrix R(M.rows(), M.cols());
        for (Eigen::Index c = 0; c < M.cols(); ++c)
            for (Eigen::Index r = 0; r < M.rows(); ++r)
                R(r, c) = cldouble(static_cast<long double>(M(r, c).real()),
                                   static_cast<long double>(M(r, c).imag()));
        return R;
    }

    inline CMatrix to_double(const QMatrix &M)
    {
        CMatrix R(M.rows(), M.cols());
        for (Eigen::Index c = 0; c < M.cols(); ++c)
            for (Eigen::Index r = 0; r < M.rows(); ++r)
                R(r, c) = cdouble(static_cast<double>(M(r, c).real()), static_cast<double>(M(r, c).imag()));
        return R;
    }

    inline QMatrix q_hermitize(const QMatrix &M)
    {
        QMatrix H = M + M.adjoint();
        return H * qcomplex(0.5);
    }

    inline QMatrix q_inverse(const QMatrix &M) { return M.partialPivLu().inverse(); }

    inline qreal q_norm(const QMatrix &M)
    {
        qreal s = 0;
        for (Eigen::Index c = 0; c < M.cols(); ++c)
            for (Eigen::Index r = 0; r < M.rows(); ++r)
                s += boost::multiprecision::norm(M(r, c));
        return boost::multiprecision::sqrt(s);
    }

    // Unitary polar factor by Newton iteration X <- (X + X^-*) / 2
    inline QMatrix q_polar_unitary(const QMatrix &A)
    {
        QMatrix X = A;
        const qreal half(0.5);
        for (int it = 0; it < 60; ++it)
        {
            QMatrix Y = (X + q_inverse(X).adjoint()) * qcomplex(half);
            qreal d = q_norm(Y - X);
            X = std::move(Y);
            if (d < qreal(1e-32))
                break;
        }
        return X;
    }

    inline QMatrix q_eval(const QPoly &P, const qcomplex &z)
    {
        QMatrix R = P.back();
        for (size_t k = P.size() - 1; k-- > 0;)
            R = R * z + P[k];
        return R;
    }
}

#endif
