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

#ifndef ALLPASS_GDOPT_HPP
#define ALLPASS_GDOPT_HPP

#include "allpass/common.hpp"

#include <optional>
#include <vector>

namespace allpass
{
    struct BarrierConfig
    {
        std::optional<double> mu_init; // default trace(P_init) / (nm)
        double mu_decay = 0.2;
        double mu_final = 1e-4;
        double pd_margin = 1e-6;
        double newton_tol = 1e-9;
        int max_newton = 200; // per centering step
        int max_outer = 100;

        void validate() const;
    };

    struct GammaAssignment
    {
        std::vector<CMatrix> gammas;
        double achieved_trace = 0.0;
        double pd_witness = 0.0; // smallest eigenvalue of the Pick matrix
        bool converged = false;
        int newton_steps = 0;
        int outer_steps = 0;
        double final_mu = 0.0;
        std::vector<double> trace_history; // after each centering
    };

    // trace(P) - mu log det(P - margin I) over the Hermitian diagonal blocks of P
    class BarrierProblem
    {
    public:
        BarrierProblem(const std::vector<double> &omegas, const std::vector<CMatrix> &As, double margin);

        int dim() const { return m_; }
        int size() const { return n_; }
        double margin() const { return margin_; }
        const CMatrix &off_diagonal() const { return P0_; }

        CMatrix assemble(const std::vector<CMatrix> &gammas) const;

        // +inf outside the domain
        double objective(const std::vector<CMatrix> &gammas, double mu) const;

        // I - mu [(P - margin I)^-1]_ii; directional derivative is Re tr(G_i dGamma_i)
        std::vector<CMatrix> gradient(const std::vector<CMatrix> &gammas, double mu) const;

        // Solves sum_k mu X_ik D_k X_ki = -G_i; returns D and the squared Newton decrement
        std::vector<CMatrix> newton_direction(const std::vector<CMatrix> &gammas, double mu,
                                              double &decrement_sq) const;

    private:
        int m_ = 0;
        int n_ = 0;
        double margin_ = 0.0;
        CMatrix P0_;
    };

    // (sum_k |P_ik|_2 + margin + 1) I
    std::vector<CMatrix> feasible_initialization(const std::vector<double> &omegas, const std::vector<CMatrix> &As,
                                                 double margin);

    GammaAssignment optimize_group_delays(const std::vector<double> &omegas, const std::vector<CMatrix> &As,
                                          const BarrierConfig &cfg = {});
}

#endif
