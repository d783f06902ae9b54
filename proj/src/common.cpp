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

#include "allpass/common.hpp"

#include <cmath>
#include <limits>

namespace allpass
{
    const char *error_name(ErrorCode code)
    {
        switch (code)
        {
        case ErrorCode::ok: return "Ok";
        case ErrorCode::invalid_argument: return "InvalidArgument";
        case ErrorCode::pick_not_positive_definite: return "PickNotPositiveDefinite";
        case ErrorCode::degenerate_construction: return "DegenerateConstruction";
        case ErrorCode::singular_leading_coefficient: return "SingularLeadingCoefficient";
        case ErrorCode::dimension_mismatch: return "DimensionMismatch";
        case ErrorCode::duplicate_frequency: return "DuplicateFrequency";
        case ErrorCode::frequency_at_pi: return "FrequencyAtPi";
        case ErrorCode::non_unitary: return "NonUnitary";
        case ErrorCode::non_hermitian_gamma: return "NonHermitianGamma";
        case ErrorCode::non_positive_gamma: return "NonPositiveGamma";
        case ErrorCode::missing_gamma: return "MissingGamma";
        case ErrorCode::non_hermitian_input: return "NonHermitianInput";
        case ErrorCode::singular_leading_block: return "SingularLeadingBlock";
        case ErrorCode::singular_gamma: return "SingularGamma";
        case ErrorCode::lost_neutrality: return "LostNeutrality";
        case ErrorCode::non_invertible_top_block: return "NonInvertibleTopBlock";
        case ErrorCode::singular_denominator: return "SingularDenominator";
        case ErrorCode::infeasible_start: return "InfeasibleStart";
        case ErrorCode::parse_error: return "ParseError";
        case ErrorCode::io_error: return "IoError";
        case ErrorCode::internal: return "Internal";
        }
        return "Unknown";
    }

    double wrap_angle(double omega)
    {
        double w = std::remainder(omega, 2.0 * pi);
        if (w <= -pi)
            w += 2.0 * pi;
        return w;
    }

    double angular_distance(double a, double b)
    {
        return std::abs(std::remainder(a - b, 2.0 * pi));
    }

    LMatrix to_long(const CMatrix &M)
    {
        LMatrix R(M.rows(), M.cols());
        for (Eigen::Index c = 0; c < M.cols(); ++c)
            for (Eigen::Index r = 0; r < M.rows(); ++r)
                R(r, c) = cldouble(M(r, c).real(), M(r, c).imag());
        return R;
    }

    CMatrix to_double(const LMatrix &M)
    {
        CMatrix R(M.rows(), M.cols());
        for (Eigen::Index c = 0; c < M.cols(); ++c)
            for (Eigen::Index r = 0; r < M.rows(); ++r)
                R(r, c) = cdouble((double)M(r, c).real(), (double)M(r, c).imag());
        return R;
    }

    double hermitian_defect(const CMatrix &M)
    {
        return (M - M.adjoint()).norm();
    }

    double unitarity_defect(const CMatrix &M)
    {
        return (M.adjoint() * M - CMatrix::Identity(M.cols(), M.cols())).norm();
    }

    double min_hermitian_eigenvalue(const CMatrix &M)
    {
        CMatrix H = 0.5 * (M + M.adjoint());
        Eigen::SelfAdjointEigenSolver<CMatrix> es(H, Eigen::EigenvaluesOnly);
        return es.eigenvalues()(0);
    }

    double condition_number(const CMatrix &M)
    {
        Eigen::JacobiSVD<CMatrix> svd(M);
        const auto &s = svd.singularValues();
        double smin = s(s.size() - 1);
        if (smin == 0.0)
            return std::numeric_limits<double>::infinity();
        return s(0) / smin;
    }
}
