// SPDX-License-Identifier: Apache-2.0
//
// massloc: position and orientation error bounds for massive antenna arrays
// Copyright (C) 2026 massloc contributors
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

#ifndef MASSLOC_FIM_HPP
#define MASSLOC_FIM_HPP

#include "massloc/geometry.hpp"
#include "massloc/waveforms.hpp"
#include "massloc/weighting.hpp"

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace massloc
{
    constexpr double kBoltzmann = 1.380649e-23; // [J/K]
    constexpr double kNoiseTemperature = 290.0; // [K]

    struct NoiseModel
    {
        double n0 = 1.0;                 // Single-sided PSD [W/Hz]
        double energy_per_antenna = 1.0; // E [J]
        double nu = 1.0;                 // E / N_0
        double a1 = 1.0;                 // Line-of-sight amplitude
        double snr1 = 1.0;               // a_1^2 nu
        double snr_total = 1.0;          // N_tx SNR_1
    };

    // Free-space field gain c / (4 pi fc d)
    double friis_amplitude(double fc, double distance);

    // N_0 = k T_0 10^(NF/10), E = E_tot / N_tx
    NoiseModel make_noise_model(double total_energy, size_t n_tx, double a1, double noise_figure_db);

    // Sets SNR_1 directly; N_0 = 1
    NoiseModel noise_from_snr1(double snr1, size_t n_tx, double a1);

    struct FimOptions
    {
        bool orientation_aware = false; // Tx orientation known: q = [x, y, z]
        bool sync = false;              // Estimate the synchronization error as a nuisance
    };

    // Ordering of psi = [q, a_1, (alpha_l^Re, alpha_l^Im) for l = 2..L, epsilon^s]
    struct ParameterLayout
    {
        size_t n_q = 5;
        size_t n_mpc = 0;
        bool sync = false;

        size_t a1() const { return n_q; }
        size_t alpha_re(size_t l) const { return n_q + 1 + 2 * (l - 1); } // l = 1..n_mpc
        size_t alpha_im(size_t l) const { return alpha_re(l) + 1; }
        size_t eps() const { return n_q + 1 + 2 * n_mpc; }
        size_t size() const { return n_q + 1 + 2 * n_mpc + (sync ? 1 : 0); }
        std::vector<std::string> labels() const;

        static ParameterLayout make(const Scenario &s, const FimOptions &o);
    };

    struct FimBlocks
    {
        ParameterLayout layout;
        Eigen::MatrixXd full; // Symmetric
        Eigen::MatrixXd A;    // q x q
        Eigen::MatrixXd C;    // q x nuisance
        Eigen::MatrixXd D;    // nuisance x nuisance
        std::vector<std::string> labels;
        Eigen::VectorXd q_scale; // Information each q entry would carry without cancellation across antennas

        void split(); // Refreshes A, C, D from full
    };

    struct CrbResult
    {
        Eigen::MatrixXd crb_q;
        double peb = 0.0; // [m]
        double oeb = 0.0; // [deg], NaN when orientation-aware
        bool identifiable = false;
        double condition_number = 0.0;
    };

    enum class KernelKind
    {
        chi,   // (f + fc)^order
        r,     // 1
        r_ddot // f^2
    };

    // Quadrature of w_i(f) w_j^*(f) k(f) exp(-j 2 pi f dtau) P_i(f) P_j^*(f)
    cd kernel_integral(const SpectrumSet &set, const EffectiveWeights &w, size_t i, size_t j, double dtau, KernelKind kind,
                       int order = 0);

    // Data FIM: 2 / N_0 sum_m integral Re{dx^H dx}, expectation over zero-mean scattered gains taken analytically
    FimBlocks fim_data(const Scenario &s, const SpectrumSet &spectra, const WeightingScheme &scheme, const NoiseModel &noise,
                       const FimOptions &options);

    // Prior diagonal: 1 / sigma_l^2 on each alpha entry, 1 / sigma_eps^2 on epsilon^s
    Eigen::VectorXd fim_prior(const ParameterLayout &layout, const std::vector<double> &variances, double sigma_eps);

    // Data plus prior, with variances and sigma_eps taken from the scenario
    FimBlocks bayesian_fim(const Scenario &s, const SpectrumSet &spectra, const WeightingScheme &scheme,
                           const NoiseModel &noise, const FimOptions &options);

    // A - C D^+ C^T
    Eigen::MatrixXd efim_multipath(const FimBlocks &blocks);

    CrbResult crb_from_fim(const FimBlocks &blocks, double max_condition = 1e12);
}

#endif
