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

#ifndef ALLPASS_DATASET_HPP
#define ALLPASS_DATASET_HPP

#include "allpass/common.hpp"

#include <optional>
#include <random>
#include <vector>

namespace allpass
{
    struct Tolerances
    {
        double unitarity = 1e-8;           // Frobenius norm of A*A - I
        double hermitian = 1e-10;          // relative to max(1, |Gamma|_F)
        double min_separation = 1e-9;      // radians
        double pi_guard = 1e-6;            // radians
        double neutrality = 1e-8;          // |B*JB|_F relative to |B|_F^2
        double max_block_condition = 1e10; // top block of a lift
    };

    // Raw, user-facing form of one constraint
    struct InterpolationPoint
    {
        double omega = 0.0;
        CMatrix A;
        std::optional<CMatrix> gamma;
    };

    // 2m x m basis B with B*JB = 0 and invertible top block
    class NeutralLift
    {
    public:
        NeutralLift() = default;

        static NeutralLift from_basis(const CMatrix &B, const Tolerances &tol = {});

        const CMatrix &basis() const { return B_; }
        int dim() const { return (int)B_.cols(); }
        CMatrix block1() const { return B_.topRows(B_.cols()); }
        CMatrix block2() const { return B_.bottomRows(B_.cols()); }

        // B2 * B1^-1
        CMatrix ratio() const;

        // |B*JB|_F
        double neutrality_defect() const;

    private:
        explicit NeutralLift(CMatrix B) : B_(std::move(B)) {}
        CMatrix B_;
    };

    struct DataPoint
    {
        double omega = 0.0;
        NeutralLift lift;
        std::optional<CMatrix> gamma; // paired with lift.basis()
        CMatrix A;                    // ratio cache
    };

    class ValidatedDataSet
    {
    public:
        ValidatedDataSet() = default;

        // Assemble from general lifts. With require_positive_gamma == false only Hermitian
        // symmetry of the gammas is checked (used for reduced sets).
        static ValidatedDataSet from_points(int m, std::vector<DataPoint> points, const Tolerances &tol = {},
                                           bool require_positive_gamma = true);

        int dim() const { return m_; }
        int size() const { return (int)points_.size(); }
        const DataPoint &operator[](int i) const { return points_[(size_t)i]; }
        const std::vector<DataPoint> &points() const { return points_; }
        const Tolerances &tolerances() const { return tol_; }

        bool has_all_gammas() const;
        std::vector<double> omegas() const;
        std::vector<CMatrix> responses() const;

        // Gamma expressed against the canonical lift [I; A]: B1^-* Gamma B1^-1
        CMatrix canonical_gamma(int i) const;

        // Canonical raw form; validate_dataset(raw_points()) reproduces this set
        std::vector<InterpolationPoint> raw_points() const;

        // Same points with the given (canonical) gammas
        ValidatedDataSet with_gammas(const std::vector<CMatrix> &gammas) const;

    private:
        int m_ = 0;
        std::vector<DataPoint> points_;
        Tolerances tol_;
    };

    ValidatedDataSet validate_dataset(const std::vector<InterpolationPoint> &raw_points, const Tolerances &tol = {});

    NeutralLift lift_neutral(const CMatrix &A, const Tolerances &tol = {});

    // A_i -> A_i C, Gamma_i -> C* Gamma_i C (unchanged for scalar phases)
    ValidatedDataSet derotate(const ValidatedDataSet &ds, const CMatrix &C);

    // Haar-distributed unitary (QR of a complex Gaussian matrix, R's diagonal phases removed)
    CMatrix random_unitary(int m, std::mt19937_64 &rng);

    // Complex standard Gaussian matrix, E|x_ij|^2 = 1
    CMatrix random_gaussian(int rows, int cols, std::mt19937_64 &rng);
}

#endif
