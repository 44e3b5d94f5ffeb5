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

#ifndef MASSLOC_SIGNAL_HPP
#define MASSLOC_SIGNAL_HPP

#include "massloc/geometry.hpp"
#include "massloc/waveforms.hpp"
#include "massloc/weighting.hpp"

#include <array>
#include <complex>
#include <vector>

namespace massloc
{
    // exp(j (phase0 + k * step)) for k = 0..n-1, re-anchored periodically to bound the recurrence drift
    void phase_ramp(double phase0, double step, size_t n, cd *out);

    // Noise-free received signal of one scenario, sampled on the grid of a spectrum set.
    // Path l at Rx element m is gain_l * u_lm(f), with
    //   u_1m(f) = exp(-j 2 pi (f + fc) (tau_1 - tau_m^r(theta_1))) T_1(f) S(f)
    //   u_lm(f) = exp(-j 2 pi f tau_l) exp(j 2 pi (f + fc) tau_m^r(theta_l^r)) T_l(f) S(f), l > 1
    // where T_l is the Tx beam toward theta_l^t and S the synchronization phase
    struct SignalModel
    {
        const SpectrumSet *spectra = nullptr;
        double fc = 0.0;
        size_t n_tx = 0;
        size_t n_rx = 0;
        std::vector<double> tau;                 // tau_l [s]
        std::vector<std::vector<double>> rx_delay; // [l][m] tau_m^r(theta_l^r) [s]
        std::vector<cd> gain;                    // a_1, then alpha_l
        std::vector<std::vector<cd>> beam;       // [l][k] T_l(f_k) S(f_k)
        bool has_derivatives = false;
        LosGeometry los;                         // Valid when has_derivatives
        std::array<std::vector<cd>, 5> los_beam_derivative; // [a][k] sum_i (d tau_i^t / d q_a) term_i S
        std::vector<double> los_beam_abs;                    // [k] sum_i |term_i|, cancellation reference
        std::array<std::vector<double>, 5> los_beam_derivative_abs; // [a][k] sum_i |d tau_i^t / d q_a| |term_i|

        size_t n_freq() const { return spectra->grid.size(); }
        size_t n_paths() const { return tau.size(); }
    };

    // energy: per-antenna energy scaling of the beams (E, or E / N_0 for information computations)
    SignalModel build_signal_model(const Scenario &s, const SpectrumSet &spectra, const WeightingScheme &scheme,
                                   double energy, bool with_derivatives);

    // u_lm over the grid; out has n_freq entries
    void path_template(const SignalModel &model, size_t l, size_t m, cd *out);

    // exp(-j 2 pi (f + fc) (tau_1 - tau_m^r(theta_1))) over the grid
    void los_rx_phase(const SignalModel &model, size_t m, cd *out);

    // sum_l gain_l u_lm
    void received_signal(const SignalModel &model, size_t m, cd *out);
}

#endif
