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

#ifndef MASSLOC_MONTECARLO_HPP
#define MASSLOC_MONTECARLO_HPP

#include "massloc/fim.hpp"
#include "massloc/geometry.hpp"
#include "massloc/rng.hpp"
#include "massloc/waveforms.hpp"
#include "massloc/weighting.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace massloc
{
    struct ExperimentConfig
    {
        double fc = 60e9;          // [Hz]
        double bandwidth = 1e9;    // [Hz]
        double rolloff = 0.6;
        size_t n_freq = 1024;      // Grid points; MIMO sets use at least 16 per waveform
        MimoLayout mimo_layout = MimoLayout::interleaved;

        double tx_power = 10e-3;        // P_t [W]
        double pulse_duration = 1.6e-9; // T_p [s], enters only through E_tot = P_t T_p
        double noise_figure_db = 4.0;
        double snr1 = 0.0; // Overrides the link budget when positive

        Vec3 tx_position = Vec3(0.0, 5.0, 0.0); // [m], Rx centroid at the origin
        Orientation tx_orientation;
        Orientation rx_orientation;      // Used when random_rx_orientation is false
        bool random_rx_orientation = true;
        double d_ant = 0.0;              // [m], 0 selects lambda_L / 2
        std::optional<Angles> steering;  // Default: toward the Rx

        size_t n_paths = 1;           // L; 0 draws a Poisson count up to the horizon
        double arrival_rate = 4e9;    // [1/s]
        double horizon = 5e-9;        // [s]
        double pdp_decay = 5e-9;      // Gamma [s]

        bool sync = false;
        double sigma_eps = 1e-9; // [s]
        bool quantization = false;
        bool orientation_aware = false;

        size_t n_cycles = 500;
        uint64_t master_seed = 1;
        unsigned threads = 1;

        double d_ant_resolved() const; // lambda_L / 2 with lambda_L = c / (fc - W/2) when d_ant is 0
    };

    // Sub-streams of one cycle; fixed so that every configuration sees the same draws
    enum class Stream : uint64_t
    {
        orientation = 1,
        errors = 2,
        sync = 3,
        multipath = 4
    };

    // LOS first; scattered paths with exponential inter-arrivals, uniform angles and sigma_l^2 = a1^2 exp(-dtau / Gamma).
    // fixed_count > 0 keeps the first fixed_count - 1 arrivals regardless of the horizon.
    std::vector<MultipathComponent> sample_multipath(Rng &rng, double rate, double horizon, double pdp_decay, double a1,
                                                     size_t fixed_count = 0);

    struct CycleResult
    {
        double peb = 0.0;
        double oeb = 0.0;
        bool identifiable = false;
        bool rejected = false; // Singular line-of-sight parametrization
        uint64_t seed = 0;
    };

    struct CellResult
    {
        double peb = 0.0;        // Mean over identifiable cycles [m]
        double peb_stderr = 0.0;
        double oeb = 0.0;        // [deg], NaN when orientation-aware
        double oeb_stderr = 0.0;
        size_t n_identifiable = 0;
        size_t n_unidentifiable = 0;
        size_t n_rejected = 0;
        std::vector<CycleResult> cycles;
    };

    struct AllCyclesUnidentifiable : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    // Runs `task(k)` for k in [0, n) on `threads` workers; every result is keyed by k
    void parallel_for(size_t n, unsigned threads, const std::function<void(size_t)> &task);

    // Waveforms of a cell
    SpectrumSet make_spectra(const ExperimentConfig &cfg, size_t n_tx, SchemeKind kind);

    // Scenario of one cycle (Rx orientation, multipath) and the matching weighting scheme
    struct CycleSetup
    {
        Scenario scenario;
        WeightingScheme scheme;
    };

    CycleSetup make_cycle(const ExperimentConfig &cfg, size_t n_tx, size_t n_rx, SchemeKind kind, uint64_t cycle);

    NoiseModel make_cell_noise(const ExperimentConfig &cfg, size_t n_tx);

    // Throws AllCyclesUnidentifiable when no cycle yields an identifiable FIM
    CellResult run_cell(const ExperimentConfig &cfg, size_t n_tx, size_t n_rx, SchemeKind kind);

    struct PlaneGrid
    {
        double x_min = -5.0, x_max = 5.0; // [m]
        double y_min = 0.5, y_max = 10.0; // [m]
        double step = 0.5;                // [m]
    };

    struct GridPointResult
    {
        double x = 0.0, y = 0.0;
        bool near_field = false; // Rejected: distance below 50 array diameters
        bool identifiable = false;
        double peb = 0.0, peb_stderr = 0.0;
        double oeb = 0.0;
    };

    // Tx positions (x, y, 0); phased arrays are steered broadside
    std::vector<GridPointResult> run_grid(const ExperimentConfig &cfg, const PlaneGrid &grid, size_t n_tx, size_t n_rx,
                                          SchemeKind kind);
}

#endif
