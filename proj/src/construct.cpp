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

#include "allpass/construct.hpp"
#include "allpass/pickmat.hpp"

#include "quad.hpp"

#include <cmath>
#include <random>
#include <string>

namespace allpass
{
    using namespace detail;

    MatrixPolynomial::MatrixPolynomial(std::vector<LMatrix> coeffs) : coeffs_(std::move(coeffs))
    {
        if (coeffs_.empty())
            throw Error(ErrorCode::invalid_argument, "polynomial needs at least one coefficient");
        const Eigen::Index m = coeffs_.front().rows();
        if (m == 0)
            throw Error(ErrorCode::dimension_mismatch, "polynomial coefficients must be non-empty");
        for (const auto &C : coeffs_)
            if (C.rows() != m || C.cols() != m)
                throw Error(ErrorCode::dimension_mismatch, "polynomial coefficients must be square and equal-sized");
        while (coeffs_.size() > 1 && coeffs_.back().isZero(0))
            coeffs_.pop_back();
    }

    MatrixPolynomial MatrixPolynomial::from_double(const std::vector<CMatrix> &coeffs)
    {
        std::vector<LMatrix> c;
        c.reserve(coeffs.size());
        for (const auto &C : coeffs)
            c.push_back(to_long(C));
        return MatrixPolynomial(std::move(c));
    }

    MatrixPolynomial MatrixPolynomial::constant(const CMatrix &C)
    {
        return MatrixPolynomial({to_long(C)});
    }

    MatrixPolynomial MatrixPolynomial::identity(int m)
    {
        return MatrixPolynomial({LMatrix::Identity(m, m)});
    }

    std::vector<CMatrix> MatrixPolynomial::coeffs_double() const
    {
        std::vector<CMatrix> c;
        c.reserve(coeffs_.size());
        for (const auto &C : coeffs_)
            c.push_back(allpass::to_double(C));
        return c;
    }

    LMatrix MatrixPolynomial::evaluate(cldouble z) const
    {
        if (coeffs_.empty())
            throw Error(ErrorCode::invalid_argument, "empty polynomial");
        LMatrix R = coeffs_.back();
        for (size_t k = coeffs_.size() - 1; k-- > 0;)
            R = R * z + coeffs_[k];
        return R;
    }

    MatrixPolynomial MatrixPolynomial::derivative() const
    {
        const int m = dim();
        if (degree() == 0)
            return MatrixPolynomial({LMatrix::Zero(m, m)});
        std::vector<LMatrix> c;
        for (size_t k = 1; k < coeffs_.size(); ++k)
            c.push_back(coeffs_[k] * cldouble((long double)k, 0.0L));
        return MatrixPolynomial(std::move(c));
    }

    MatrixPolynomial MatrixPolynomial::substitute_scale(cldouble s) const
    {
        std::vector<LMatrix> c = coeffs_;
        cldouble p = 1.0L;
        for (auto &C : c)
        {
            C *= p;
            p *= s;
        }
        return MatrixPolynomial(std::move(c));
    }

    MatrixPolynomial MatrixPolynomial::scaled(cldouble s) const
    {
        std::vector<LMatrix> c = coeffs_;
        for (auto &C : c)
            C *= s;
        return MatrixPolynomial(std::move(c));
    }

    AllPassFilter AllPassFilter::identity(int m)
    {
        AllPassFilter f;
        f.N = MatrixPolynomial::identity(m);
        f.D = MatrixPolynomial::identity(m);
        return f;
    }

    namespace
    {
        struct QPoint
        {
            double omega;
            QMatrix B; // 2m x m
            QMatrix G; // paired with B
        };

        void check_not_pi(double omega)
        {
            if (angular_distance(omega, pi) < 1e-6)
                throw Error(ErrorCode::frequency_at_pi, "interpolation frequency too close to pi");
        }

        qcomplex kappa0(const qcomplex &z1)
        {
            return qcomplex(2) * z1 / (qcomplex(1) + z1);
        }

        QMatrix gamma_inverse(const QMatrix &G)
        {
            double c = condition_number(detail::to_double(G));
            if (!(c < 1e14))
                throw Error(ErrorCode::singular_gamma, "group-delay matrix is singular", c);
            return q_hermitize(q_inverse(G));
        }

        QMatrix apply_j(const QMatrix &B)
        {
            const Eigen::Index m = B.cols();
            QMatrix R = B;
            R.bottomRows(m) = -R.bottomRows(m);
            return R;
        }

        QMatrix canonical_basis(const QMatrix &A)
        {
            const Eigen::Index m = A.rows();
            QMatrix B(2 * m, m);
            B.topRows(m) = q_eye(m);
            B.bottomRows(m) = A;
            return B;
        }

        // B_a* J B_b / (1 - z_a conj(z_b))
        QMatrix q_pick_block(const QPoint &a, const QPoint &b)
        {
            qcomplex za = q_phasor(a.omega);
            qcomplex zb = q_phasor(b.omega);
            qcomplex den = qcomplex(1) - za * conj(zb);
            return (a.B.adjoint() * apply_j(b.B)) / den;
        }

        std::vector<QPoint> q_reduce(const std::vector<QPoint> &pts)
        {
            const QPoint &p1 = pts.front();
            QMatrix g = gamma_inverse(p1.G);
            qcomplex z1 = q_phasor(p1.omega);
            qcomplex k0 = kappa0(z1);
            QMatrix B1g = p1.B * g;
            QMatrix JB1 = apply_j(p1.B);

            std::vector<QPoint> out;
            out.reserve(pts.size() - 1);
            for (size_t i = 1; i < pts.size(); ++i)
            {
                const QPoint &p = pts[i];
                qcomplex z = q_phasor(p.omega);
                QMatrix Pi1 = q_pick_block(p, p1);
                QMatrix Ghat = q_hermitize(p.G - Pi1 * g * Pi1.adjoint());
                qcomplex s = k0 * (qcomplex(1) + z) / (qcomplex(2) * (z - z1));
                QMatrix Bhat = p.B - B1g * (JB1.adjoint() * p.B) * s;
                out.push_back({p.omega, std::move(Bhat), std::move(Ghat)});
            }
            return out;
        }

        QPoint q_canonical(const QPoint &p, double max_cond)
        {
            const Eigen::Index m = p.B.cols();
            QMatrix B1 = p.B.topRows(m);
            double c = condition_number(detail::to_double(B1));
            if (!(c <= max_cond))
                throw Error(ErrorCode::non_invertible_top_block, "reduced lift has a singular top block", c);
            QMatrix X = q_inverse(B1);
            QMatrix A = p.B.bottomRows(m) * X;
            double defect = unitarity_defect(detail::to_double(A));
            if (!(defect <= 1e-6))
                throw Error(ErrorCode::lost_neutrality, "reduced lift lost neutrality", defect);
            A = q_polar_unitary(A);
            QMatrix G = q_hermitize(X.adjoint() * p.G * X);
            return {p.omega, canonical_basis(A), std::move(G)};
        }

        QPoly poly_sub(const QPoly &a, const QPoly &b)
        {
            const Eigen::Index m = a.front().rows();
            size_t L = std::max(a.size(), b.size());
            QPoly r(L, QMatrix::Zero(m, m));
            for (size_t k = 0; k < a.size(); ++k)
                r[k] += a[k];
            for (size_t k = 0; k < b.size(); ++k)
                r[k] -= b[k];
            return r;
        }

        // P(z) * (c0 + c1 z)
        QPoly poly_mul_linear(const QPoly &P, const qcomplex &c0, const qcomplex &c1)
        {
            const Eigen::Index m = P.front().rows();
            QPoly r(P.size() + 1, QMatrix::Zero(m, m));
            for (size_t k = 0; k < P.size(); ++k)
            {
                r[k] += P[k] * c0;
                r[k + 1] += P[k] * c1;
            }
            return r;
        }

        QPoly poly_left_mul(const QMatrix &M, const QPoly &P)
        {
            QPoly r;
            r.reserve(P.size());
            for (const auto &C : P)
                r.push_back(M * C);
            return r;
        }

        QPoly poly_add(const QPoly &a, const QPoly &b)
        {
            const Eigen::Index m = a.front().rows();
            size_t L = std::max(a.size(), b.size());
            QPoly r(L, QMatrix::Zero(m, m));
            for (size_t k = 0; k < a.size(); ++k)
                r[k] += a[k];
            for (size_t k = 0; k < b.size(); ++k)
                r[k] += b[k];
            return r;
        }

        // N = 2(z - z1) Nh + kappa A g W,  D = 2(z - z1) Dh + kappa g W,  W = Dh - A* Nh
        std::pair<QPoly, QPoly> q_lift(double omega1, const QMatrix &A, const QMatrix &G, const QPoly &Nh,
                                       const QPoly &Dh, double max_cond)
        {
            qcomplex z1 = q_phasor(omega1);
            qcomplex k0 = kappa0(z1);
            QMatrix g = gamma_inverse(G);

            QPoly W = poly_sub(Dh, poly_left_mul(A.adjoint(), Nh));
            if (std::isfinite(max_cond))
            {
                double c = condition_number(detail::to_double(q_eval(W, z1)));
                if (!(c <= max_cond))
                    throw Error(ErrorCode::degenerate_construction,
                                "group-delay constraint is vacuous at this recursion level", c);
            }
            QPoly T = poly_left_mul(g, W);
            QPoly kT = poly_mul_linear(T, k0, k0);
            QPoly N = poly_add(poly_mul_linear(Nh, qcomplex(-2) * z1, qcomplex(2)), poly_left_mul(A, kT));
            QPoly D = poly_add(poly_mul_linear(Dh, qcomplex(-2) * z1, qcomplex(2)), kT);
            return {std::move(N), std::move(D)};
        }

        // Degree-1 solution: half the lift of the constant identity
        std::pair<QPoly, QPoly> q_base(double omega1, const QMatrix &A, const QMatrix &G, double max_cond)
        {
            const Eigen::Index m = A.rows();
            QPoly I{q_eye(m)};
            auto [N, D] = q_lift(omega1, A, G, I, I, max_cond);
            for (auto &C : N)
                C *= qcomplex(0.5);
            for (auto &C : D)
                C *= qcomplex(0.5);
            return {std::move(N), std::move(D)};
        }

        MatrixPolynomial to_polynomial(const QPoly &P)
        {
            std::vector<LMatrix> c;
            c.reserve(P.size());
            for (const auto &C : P)
                c.push_back(detail::to_long(C));
            return MatrixPolynomial(std::move(c));
        }

        QPoly to_qpoly(const MatrixPolynomial &P)
        {
            QPoly r;
            r.reserve(P.coeffs().size());
            for (const auto &C : P.coeffs())
                r.push_back(to_quad(C));
            return r;
        }

        std::vector<QPoint> quad_points(const ValidatedDataSet &ds)
        {
            std::vector<QPoint> pts;
            pts.reserve((size_t)ds.size());
            for (const auto &p : ds.points())
            {
                if (!p.gamma)
                    throw Error(ErrorCode::missing_gamma, "every point needs a gamma");
                pts.push_back({p.omega, to_quad(p.lift.basis()), to_quad(*p.gamma)});
            }
            return pts;
        }

        AllPassFilter q_design(const ValidatedDataSet &ds, double max_cond)
        {
            std::vector<QPoint> pts;
            for (const auto &q : quad_points(ds))
                pts.push_back(q_canonical(q, max_cond));

            std::vector<QPoint> firsts;
            while (pts.size() > 1)
            {
                firsts.push_back(pts.front());
                auto red = q_reduce(pts);
                pts.clear();
                for (const auto &q : red)
                    pts.push_back(q_canonical(q, max_cond));
            }
            firsts.push_back(pts.front());

            const Eigen::Index m = ds.dim();
            auto A_of = [m](const QPoint &p) { return QMatrix(p.B.bottomRows(m)); };

            auto [N, D] = q_base(firsts.back().omega, A_of(firsts.back()), firsts.back().G, max_cond);
            for (size_t k = firsts.size() - 1; k-- > 0;)
            {
                auto lifted = q_lift(firsts[k].omega, A_of(firsts[k]), firsts[k].G, N, D, max_cond);
                N = std::move(lifted.first);
                D = std::move(lifted.second);
            }

            qreal s = 0;
            for (const auto &C : D)
                s = std::max(s, q_norm(C));
            if (s > 0)
            {
                qcomplex inv = qcomplex(1) / qcomplex(s);
                for (auto &C : N)
                    C *= inv;
                for (auto &C : D)
                    C *= inv;
            }

            AllPassFilter f;
            f.N = to_polynomial(N);
            f.D = to_polynomial(D);
            f.interp_omegas = ds.omegas();
            return f;
        }

        QMatrix checked_unitary(const CMatrix &A, int m)
        {
            if (A.rows() != m || A.cols() != m)
                throw Error(ErrorCode::dimension_mismatch, "response has wrong dimension");
            double d = unitarity_defect(A);
            if (!(d <= 1e-8))
                throw Error(ErrorCode::non_unitary, "response is not unitary");
            return q_polar_unitary(to_quad(A));
        }

        QMatrix checked_gamma(const CMatrix &G, int m)
        {
            if (G.rows() != m || G.cols() != m)
                throw Error(ErrorCode::dimension_mismatch, "gamma has wrong dimension");
            return q_hermitize(to_quad(G));
        }
    }

    ReductionOperator::ReductionOperator(double omega1, const CMatrix &A1, const CMatrix &Gamma1)
    {
        const Eigen::Index m = A1.rows();
        check_not_pi(omega1);
        QMatrix A = checked_unitary(A1, (int)m);
        QMatrix g = gamma_inverse(checked_gamma(Gamma1, (int)m));
        QMatrix B1 = canonical_basis(A);
        QMatrix E = B1 * g * apply_j(B1).adjoint();
        qcomplex z1 = q_phasor(omega1);
        qcomplex k0 = kappa0(z1);
        QMatrix I2 = q_eye(2 * m);
        H_[0] = detail::to_double(I2 * (qcomplex(-2) * z1) - E * k0);
        H_[1] = detail::to_double(I2 * qcomplex(2) - E * k0);
    }

    AllPassFilter base_filter(double omega1, const CMatrix &A1, const CMatrix &Gamma1)
    {
        check_not_pi(omega1);
        const int m = (int)A1.rows();
        auto [N, D] = q_base(omega1, checked_unitary(A1, m), checked_gamma(Gamma1, m),
                             std::numeric_limits<double>::infinity());
        AllPassFilter f;
        f.N = to_polynomial(N);
        f.D = to_polynomial(D);
        f.interp_omegas = {omega1};
        return f;
    }

    ValidatedDataSet reduce_dataset(const ValidatedDataSet &ds)
    {
        if (ds.size() < 2)
            throw Error(ErrorCode::invalid_argument, "reduction needs at least two points");
        auto red = q_reduce(quad_points(ds));
        std::vector<DataPoint> out;
        out.reserve(red.size());
        for (const auto &q : red)
        {
            DataPoint p;
            p.omega = q.omega;
            p.lift = NeutralLift::from_basis(detail::to_double(q.B), ds.tolerances());
            p.gamma = detail::to_double(q.G);
            out.push_back(std::move(p));
        }
        return ValidatedDataSet::from_points(ds.dim(), std::move(out), ds.tolerances(), false);
    }

    std::pair<MatrixPolynomial, MatrixPolynomial> lift_solution(double omega1, const CMatrix &A1, const CMatrix &Gamma1,
                                                                const MatrixPolynomial &Nhat,
                                                                const MatrixPolynomial &Dhat)
    {
        const int m = (int)A1.rows();
        if (Nhat.dim() != m || Dhat.dim() != m || Nhat.degree() != Dhat.degree())
            throw Error(ErrorCode::dimension_mismatch, "lift inputs must share dimension and degree");
        check_not_pi(omega1);
        auto [N, D] = q_lift(omega1, checked_unitary(A1, m), checked_gamma(Gamma1, m), to_qpoly(Nhat),
                             to_qpoly(Dhat), std::numeric_limits<double>::infinity());
        return {to_polynomial(N), to_polynomial(D)};
    }

    namespace
    {
        const CMatrix &nearest_to_pi(const ValidatedDataSet &ds)
        {
            int best = 0;
            for (int i = 1; i < ds.size(); ++i)
                if (angular_distance(ds[i].omega, pi) < angular_distance(ds[best].omega, pi))
                    best = i;
            return ds[best].A;
        }
    }

    AllPassFilter design_allpass(const ValidatedDataSet &ds, const DesignOptions &opts)
    {
        if (!ds.has_all_gammas())
            throw Error(ErrorCode::missing_gamma, "every point needs a gamma; run the group-delay optimizer first");
        if (opts.max_retries < 0)
            throw Error(ErrorCode::invalid_argument, "max_retries must be nonnegative");

        auto pd = is_positive_definite(build_pick(ds), opts.pd_margin);
        if (!pd.positive_definite)
            throw Error(ErrorCode::pick_not_positive_definite,
                        "Pick matrix is not positive definite (smallest eigenvalue " +
                            std::to_string(pd.min_eigenvalue) + ")",
                        pd.min_eigenvalue);

        std::mt19937_64 rng(opts.seed);
        std::uniform_real_distribution<double> phase(0.0, 2.0 * pi);
        double last_cond = 0.0;
        std::string last_msg;
        for (int attempt = 0; attempt <= opts.max_retries; ++attempt)
        {
            std::optional<CMatrix> C;
            if (attempt > 0 || opts.anchor_at_pi)
                C = CMatrix::Identity(ds.dim(), ds.dim()) * unit_phasor(attempt > 0 ? phase(rng) : pi / 2);
            if (opts.anchor_at_pi)
                C = (*C * nearest_to_pi(ds).adjoint()).eval();
            try
            {
                AllPassFilter f = q_design(C ? derotate(ds, *C) : ds, opts.degeneracy_condition);
                f.derotation = C;
                return f;
            }
            catch (const Error &e)
            {
                if (e.code() != ErrorCode::degenerate_construction &&
                    e.code() != ErrorCode::non_invertible_top_block && e.code() != ErrorCode::lost_neutrality)
                    throw;
                last_cond = e.witness();
                last_msg = e.what();
            }
        }
        throw Error(ErrorCode::degenerate_construction,
                    "construction degenerate after " + std::to_string(opts.max_retries) + " derotations: " + last_msg,
                    last_cond);
    }

    std::vector<InterpolationPoint> rotate_frequencies(const std::vector<InterpolationPoint> &points, double alpha)
    {
        auto out = points;
        for (auto &p : out)
            p.omega = wrap_angle(p.omega + alpha);
        return out;
    }

    AllPassFilter unrotate_filter(const AllPassFilter &f, double alpha)
    {
        AllPassFilter g = f;
        cldouble s = std::polar(1.0L, (long double)alpha);
        g.N = f.N.substitute_scale(s);
        g.D = f.D.substitute_scale(s);
        for (auto &w : g.interp_omegas)
            w = wrap_angle(w - alpha);
        return g;
    }

    AllPassFilter design_allpass_rotated(const std::vector<InterpolationPoint> &points, double alpha,
                                         const DesignOptions &opts, const Tolerances &tol)
    {
        auto ds = validate_dataset(rotate_frequencies(points, alpha), tol);
        return unrotate_filter(design_allpass(ds, opts), alpha);
    }
}
