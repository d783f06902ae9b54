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

#ifndef ALLPASS_CONSTRUCT_HPP
#define ALLPASS_CONSTRUCT_HPP

#include "allpass/dataset.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace allpass
{
    // Coefficients C_0..C_d in ascending powers of z, stored in long double
    class MatrixPolynomial
    {
    public:
        MatrixPolynomial() = default;
        explicit MatrixPolynomial(std::vector<LMatrix> coeffs);

        static MatrixPolynomial from_double(const std::vector<CMatrix> &coeffs);
        static MatrixPolynomial constant(const CMatrix &C);
        static MatrixPolynomial identity(int m);

        int dim() const { return coeffs_.empty() ? 0 : (int)coeffs_.front().rows(); }
        int degree() const { return (int)coeffs_.size() - 1; }
        bool empty() const { return coeffs_.empty(); }

        const std::vector<LMatrix> &coeffs() const { return coeffs_; }
        const LMatrix &operator[](int k) const { return coeffs_[(size_t)k]; }
        std::vector<CMatrix> coeffs_double() const;

        LMatrix evaluate(cldouble z) const;
        MatrixPolynomial derivative() const;

        // P(s z)
        MatrixPolynomial substitute_scale(cldouble s) const;
        MatrixPolynomial scaled(cldouble s) const;

    private:
        std::vector<LMatrix> coeffs_;
    };

    struct AllPassFilter
    {
        MatrixPolynomial N;
        MatrixPolynomial D;
        std::vector<double> interp_omegas;
        std::optional<CMatrix> derotation; // G = N D^-1 C*

        int dim() const { return D.dim(); }
        int degree() const { return std::max(N.degree(), D.degree()); }

        static AllPassFilter identity(int m);
    };

    // H(z) = H0 + H1 z = 2(z - z1)I - kappa(z) B1 Gamma1^-1 B1^* J, kappa(z) = 2 z1 (1 + z) / (1 + z1)
    class ReductionOperator
    {
    public:
        ReductionOperator(double omega1, const CMatrix &A1, const CMatrix &Gamma1);

        const std::array<CMatrix, 2> &coeffs() const { return H_; }
        CMatrix evaluate(cdouble z) const { return H_[0] + z * H_[1]; }

    private:
        std::array<CMatrix, 2> H_;
    };

    struct DesignOptions
    {
        int max_retries = 8;
        std::uint64_t seed = 0;
        double degeneracy_condition = 1e10;
        std::optional<double> pd_margin; // default: relative margin of is_positive_definite
        // Derotate by e^{j phi} A_k*, A_k the response nearest omega = pi, so that G(-1) = e^{-j phi} A_k
        bool anchor_at_pi = false;
    };

    AllPassFilter base_filter(double omega1, const CMatrix &A1, const CMatrix &Gamma1);

    ValidatedDataSet reduce_dataset(const ValidatedDataSet &ds);

    std::pair<MatrixPolynomial, MatrixPolynomial> lift_solution(double omega1, const CMatrix &A1, const CMatrix &Gamma1,
                                                                const MatrixPolynomial &Nhat,
                                                                const MatrixPolynomial &Dhat);

    AllPassFilter design_allpass(const ValidatedDataSet &ds, const DesignOptions &opts = {});

    // omega -> omega + alpha for every point
    std::vector<InterpolationPoint> rotate_frequencies(const std::vector<InterpolationPoint> &points, double alpha);

    // G(z) = Ghat(e^{j alpha} z): undoes rotate_frequencies on a filter designed for the rotated points
    AllPassFilter unrotate_filter(const AllPassFilter &f, double alpha);

    // Designs for points that may include omega = pi
    AllPassFilter design_allpass_rotated(const std::vector<InterpolationPoint> &points, double alpha,
                                         const DesignOptions &opts = {}, const Tolerances &tol = {});
}

#endif
