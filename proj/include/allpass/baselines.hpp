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

#ifndef ALLPASS_BASELINES_HPP
#define ALLPASS_BASELINES_HPP

#include "allpass/common.hpp"

#include <vector>

namespace allpass
{
    struct UnitarySample
    {
        double omega = 0.0;
        CMatrix U;
    };

    struct UnitaryLog
    {
        CMatrix X; // skew-Hermitian
        bool branch_ambiguous = false;
    };

    struct GeodesicResult
    {
        CMatrix U;
        bool branch_ambiguous = false;
    };

    // Principal logarithm, eigenphases in (-pi, pi]; a phase within 1e-9 of -1 resolves to +pi and is flagged
    UnitaryLog unitary_log(const CMatrix &U);

    CMatrix skew_hermitian_exp(const CMatrix &X);

    // U_a exp(t log(U_a* U_b)), t = (omega - a.omega) / (b.omega - a.omega)
    GeodesicResult geodesic_interpolate(const UnitarySample &a, const UnitarySample &b, double omega);

    // Consecutive-pair geodesics over sorted anchors, wrapping from the last anchor to the first
    class PiecewiseGeodesic
    {
    public:
        explicit PiecewiseGeodesic(std::vector<UnitarySample> anchors);

        GeodesicResult operator()(double omega) const;
        const std::vector<UnitarySample> &anchors() const { return anchors_; }

    private:
        std::vector<UnitarySample> anchors_;
    };

    double frobenius_error(const CMatrix &U, const CMatrix &V);

    // min over diagonal unitary T of |U - V T|_F
    double flag_distance(const CMatrix &U, const CMatrix &V);
}

#endif
