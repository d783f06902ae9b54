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

#ifndef ALLPASS_COMMON_HPP
#define ALLPASS_COMMON_HPP

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace allpass
{
    using cdouble = std::complex<double>;
    using cldouble = std::complex<long double>;

    using CMatrix = Eigen::MatrixXcd;
    using CVector = Eigen::VectorXcd;
    using LMatrix = Eigen::Matrix<cldouble, Eigen::Dynamic, Eigen::Dynamic>;

    inline constexpr double pi = 3.14159265358979323846;

    // Numeric values are shared with the C API status codes
    enum class ErrorCode : int
    {
        ok = 0,
        invalid_argument = 1,
        pick_not_positive_definite = 2,
        degenerate_construction = 3,
        singular_leading_coefficient = 4,
        dimension_mismatch = 5,
        duplicate_frequency = 6,
        frequency_at_pi = 7,
        non_unitary = 8,
        non_hermitian_gamma = 9,
        non_positive_gamma = 10,
        missing_gamma = 11,
        non_hermitian_input = 12,
        singular_leading_block = 13,
        singular_gamma = 14,
        lost_neutrality = 15,
        non_invertible_top_block = 16,
        singular_denominator = 17,
        infeasible_start = 18,
        parse_error = 19,
        io_error = 20,
        internal = 21
    };

    const char *error_name(ErrorCode code);

    class Error : public std::runtime_error
    {
    public:
        Error(ErrorCode code, const std::string &message, double witness = 0.0)
            : std::runtime_error(message), code_(code), witness_(witness) {}

        ErrorCode code() const noexcept { return code_; }

        // Smallest eigenvalue for pick_not_positive_definite, condition number for degeneracy
        double witness() const noexcept { return witness_; }

    private:
        ErrorCode code_;
        double witness_;
    };

    // (-pi, pi]
    double wrap_angle(double omega);

    // Circular distance between two angles, in [0, pi]
    double angular_distance(double a, double b);

    inline cdouble unit_phasor(double omega) { return std::polar(1.0, omega); }

    LMatrix to_long(const CMatrix &M);
    CMatrix to_double(const LMatrix &M);

    double hermitian_defect(const CMatrix &M);
    double unitarity_defect(const CMatrix &M);

    // Smallest eigenvalue of the Hermitian part
    double min_hermitian_eigenvalue(const CMatrix &M);

    double condition_number(const CMatrix &M);
}

#endif
