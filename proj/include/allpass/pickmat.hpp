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

#ifndef ALLPASS_PICKMAT_HPP
#define ALLPASS_PICKMAT_HPP

#include "allpass/dataset.hpp"

#include <optional>

namespace allpass
{
    // diag(I_m, -I_m)
    CMatrix signature_matrix(int m);

    class PickMatrix
    {
    public:
        PickMatrix() = default;
        PickMatrix(CMatrix P, int m);

        const CMatrix &matrix() const { return P_; }
        int dim() const { return m_; }
        int blocks() const { return m_ > 0 ? (int)P_.rows() / m_ : 0; }
        CMatrix block(int i, int k) const { return P_.block(i * m_, k * m_, m_, m_); }

    private:
        CMatrix P_;
        int m_ = 0;
    };

    // B_i*JB_k / (1 - e^{j(w_i - w_k)})
    CMatrix pick_block(double omega_i, const CMatrix &B_i, double omega_k, const CMatrix &B_k);

    // Same block for canonical lifts: (I - A_i*A_k) / (1 - e^{j(w_i - w_k)})
    CMatrix pick_block_canonical(double omega_i, const CMatrix &A_i, double omega_k, const CMatrix &A_k);

    PickMatrix build_pick(const ValidatedDataSet &ds);

    struct Definiteness
    {
        bool positive_definite = false;
        double min_eigenvalue = 0.0; // of (P + P*)/2
        double margin = 0.0;
    };

    // 1e-10 * trace(P) / (nm)
    double default_pd_margin(const PickMatrix &P);

    Definiteness is_positive_definite(const PickMatrix &P, std::optional<double> margin = std::nullopt);

    // P22 - P21 Gamma1^-1 P12
    PickMatrix schur_reduce(const PickMatrix &P);
}

#endif
