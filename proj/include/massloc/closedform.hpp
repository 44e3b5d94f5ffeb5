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

#ifndef MASSLOC_CLOSEDFORM_HPP
#define MASSLOC_CLOSEDFORM_HPP

#include <Eigen/Dense>
#include <vector>

namespace massloc
{
    // Free-space planar configuration: both arrays in the XZ plane, orientations (0, 0), Tx at (0, y, 0)
    struct PlanarConfig
    {
        size_t n_tx = 1;
        size_t n_rx = 1;
        double d_ant = 0.0;  // [m]
        double y = 0.0;      // [m]
        double snr1 = 1.0;
        double beta = 0.0;   // Effective bandwidth of the shared pulse [Hz]
        double beta_i = 0.0; // Effective bandwidth of one MIMO waveform [Hz]
        double fc = 0.0;     // [Hz]

        double area_rx() const { return d_ant * d_ant * double(n_rx); }
        double S() const { return area_rx() / (y * y); }
    };

    // c^2 / (8 pi^2 SNR_t (bandwidth^2 + fc^2)), SNR_t = N_tx SNR_1
    double crb0(const PlanarConfig &cfg, double bandwidth);

    // Signed grid indices (m_x, m_z) of a planar square array, in element order
    std::vector<std::pair<double, double>> planar_indices(size_t n);

    // sum over (m, i, j) of grad tau_im1 grad tau_jm1^T, j = i only for MIMO; 3 x 3 when orientation_aware
    Eigen::MatrixXd g_matrix(const PlanarConfig &cfg, bool mimo, bool orientation_aware);

    struct ClosedFormCrb
    {
        Eigen::MatrixXd crb;            // Infinite diagonal entries mark unidentifiable parameters
        std::vector<bool> identifiable; // Per parameter
    };

    // Orientation-unaware: 5 x 5 with the (x, phi) and (z, theta) couplings; aware: 3 x 3 diagonal
    ClosedFormCrb crb_mimo_planar(const PlanarConfig &cfg, bool orientation_aware);

    // Orientation-aware 3 x 3 diagonal, CRB_0 built on beta
    ClosedFormCrb crb_timed_planar(const PlanarConfig &cfg);
}

#endif
