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

#ifndef MASSLOC_WAVEFORMS_HPP
#define MASSLOC_WAVEFORMS_HPP

#include <complex>
#include <vector>

namespace massloc
{
    using cd = std::complex<double>;

    // Uniform baseband grid over [-W/2, W/2] with trapezoidal weights
    struct FrequencyGrid
    {
        double f_min = 0.0;           // [Hz]
        double f_max = 0.0;           // [Hz]
        std::vector<double> freqs;    // [Hz]
        std::vector<double> weights;  // [Hz], sums to W

        size_t size() const { return freqs.size(); }
        double bandwidth() const { return f_max - f_min; }
        double step() const { return freqs.size() > 1 ? (f_max - f_min) / double(freqs.size() - 1) : 0.0; }

        static FrequencyGrid uniform(double bandwidth, size_t n_points = 1024);
    };

    // How MIMO waveforms share the band
    enum class MimoLayout
    {
        interleaved, // Each waveform owns a symmetric comb of grid points
        contiguous   // Each waveform owns one block of W / N_tx
    };

    struct SpectrumSet
    {
        FrequencyGrid grid;
        std::vector<std::vector<cd>> spectra;   // P_i(f) per Tx antenna, unit energy [Hz^-1/2]
        std::vector<std::vector<size_t>> support; // Grid indices where P_i is non-zero
        double carrier = 0.0;                   // f_c [Hz]
        double energy_per_antenna = 0.0;        // E [J]
        double total_energy = 0.0;              // E_tot [J]
        bool orthogonal = false;                // Disjoint supports

        size_t n_tx() const { return spectra.size(); }
    };

    // Root-raised-cosine amplitude spectrum occupying the full grid band, unit energy
    std::vector<cd> rrc_spectrum(const FrequencyGrid &grid, double rolloff);

    // Quadrature of a spectrum: integral of |P|^2
    double spectral_energy(const std::vector<cd> &spectrum, const FrequencyGrid &grid);

    // First moment: integral of f |P|^2 [Hz]
    double mean_frequency(const std::vector<cd> &spectrum, const FrequencyGrid &grid);

    // beta = (integral of f^2 |P|^2)^(1/2) [Hz]
    double effective_bandwidth(const std::vector<cd> &spectrum, const FrequencyGrid &grid);

    // Same unit-energy pulse on every antenna (timed, phased, random weighting)
    SpectrumSet shared_waveform_set(const FrequencyGrid &grid, double rolloff, size_t n_tx, double carrier, double total_energy);

    // Orthogonal set by disjoint frequency supports; throws if a waveform gets fewer than 16 grid points
    SpectrumSet mimo_waveform_set(const FrequencyGrid &grid, double rolloff, size_t n_tx, double carrier, double total_energy,
                                  MimoLayout layout = MimoLayout::interleaved);

    // Mean over waveforms of beta_i^2 [Hz^2]
    double mean_squared_bandwidth(const SpectrumSet &set);
}

#endif
