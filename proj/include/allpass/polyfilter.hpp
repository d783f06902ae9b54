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

#ifndef ALLPASS_POLYFILTER_HPP
#define ALLPASS_POLYFILTER_HPP

#include "allpass/construct.hpp"

#include <vector>

namespace allpass
{
    struct GroupDelayMatrix
    {
        CMatrix F; // Hermitian part of j G* dG/domega
        double omega = 0.0;
        double skew_norm = 0.0;
    };

    // Time-indexed sequence of length-m complex vectors, stored sample-major
    class VectorSignal
    {
    public:
        VectorSignal() = default;
        VectorSignal(int m, size_t length) : m_(m), data_((size_t)m * length, cdouble(0.0)) {}

        int dim() const { return m_; }
        size_t length() const { return m_ > 0 ? data_.size() / (size_t)m_ : 0; }

        cdouble &at(size_t t, int i) { return data_[t * (size_t)m_ + (size_t)i]; }
        cdouble at(size_t t, int i) const { return data_[t * (size_t)m_ + (size_t)i]; }

        CVector sample(size_t t) const;
        void set_sample(size_t t, const CVector &v);

        double energy() const;

    private:
        int m_ = 0;
        std::vector<cdouble> data_;
    };

    CMatrix eval_poly(const MatrixPolynomial &P, cdouble z);

    LMatrix eval_filter_long(const AllPassFilter &f, double omega);
    CMatrix eval_filter(const AllPassFilter &f, double omega);

    GroupDelayMatrix group_delay(const AllPassFilter &f, double omega);

    // Allocation-free evaluation of a prebuilt filter; one instance per thread
    class FilterEvaluator
    {
    public:
        explicit FilterEvaluator(const AllPassFilter &f);
        int dim() const { return m_; }
        // G(e^{j omega}); the reference stays valid until the next call
        const CMatrix &operator()(double omega);

    private:
        int m_ = 0;
        int dn_ = 0;
        int dd_ = 0;
        std::vector<cldouble> n_, d_; // coefficient k at offset k m^2, row-major
        std::vector<cldouble> cstar_;  // empty without derotation
        std::vector<cldouble> a_, b_;
        CMatrix out_;
    };

    // omega_k = -pi + 2 pi (k + 1) / n, k = 0..n-1
    std::vector<double> uniform_circle_grid(int n);

    double unitarity_deviation(const AllPassFilter &f, int grid_size);

    // Largest root modulus of det D(z) (block companion eigenvalues)
    double pole_radius(const AllPassFilter &f);

    struct SimulationResult
    {
        VectorSignal output;
        bool unstable = false;
        double spectral_radius = 0.0;
    };

    // Zero-state right-fraction recursion; z is the advance operator
    SimulationResult lccde_filter(const AllPassFilter &f, const VectorSignal &x);
}

#endif
