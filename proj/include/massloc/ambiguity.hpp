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

#ifndef MASSLOC_AMBIGUITY_HPP
#define MASSLOC_AMBIGUITY_HPP

#include "massloc/geometry.hpp"
#include "massloc/waveforms.hpp"
#include "massloc/weighting.hpp"

#include <complex>
#include <limits>
#include <vector>

namespace massloc
{
    // Noise-free templates of the true position, reused across test points. Templates use unit line-of-sight
    // amplitude and unit per-antenna energy; scattered gains are taken from the scenario.
    class AmbiguityEvaluator
    {
    public:
        AmbiguityEvaluator(const Scenario &s, const WeightingScheme &scheme, const SpectrumSet &spectra);

        // |1/(N_tx N_rx) sum_m integral x_m^H(p_true) x_m(p_test) df|^2
        double operator()(const Vec3 &p_test) const;

        double peak() const { return (*this)(scenario_.tx.centroid); }

    private:
        Scenario scenario_;
        WeightingScheme scheme_;
        const SpectrumSet &spectra_;
        std::vector<std::vector<cd>> reference_; // [m][k] w_k x_m(f_k, p_true)
    };

    double af_value(const Scenario &s, const WeightingScheme &scheme, const SpectrumSet &spectra, const Vec3 &p_true,
                    const Vec3 &p_test);

    // Cube of side 2 * half_extent centred on `center`
    struct GridSpec
    {
        Vec3 center = Vec3::Zero();
        double half_extent = 4.0; // [m]
        double spacing = 0.2;     // [m]

        size_t points_per_axis() const;
    };

    struct AfSurface
    {
        static constexpr size_t npos = std::numeric_limits<size_t>::max();

        std::vector<Vec3> grid_points; // x-major, then y, then z
        std::vector<double> values;
        Vec3 true_position = Vec3::Zero();
        size_t n_axis = 0;
        size_t main_peak_index = npos;
        size_t best_sidelobe_index = npos; // npos when the main lobe covers the whole grid
        std::vector<bool> main_lobe;
    };

    // Throws std::invalid_argument when the true position lies outside the grid cube
    AfSurface scan(const Scenario &s, const WeightingScheme &scheme, const SpectrumSet &spectra, const GridSpec &grid,
                   unsigned threads = 1);

    // P_A = erfc(gamma / sqrt(4 sigma^2)) / 2
    double ambiguity_probability(double gap_linear, double sigma);

    // sigma_thr = (gamma / 2) / erfc^-1(2 P_A); target_p in (0, 1/2)
    double noise_threshold(double gap_linear, double target_p);

    struct AmbiguityReport
    {
        double gap_linear = 0.0; // 1 - sidelobe / peak
        double gap_db = 0.0;     // 10 log10(gap_linear)
        double sigma_thr = 0.0;
        double p_ambiguity = 0.0; // At sigma
        double target_p = 0.0;
    };

    AmbiguityReport report(const AfSurface &surface, double target_p, double sigma);

    double db_to_linear(double db);
    double linear_to_db(double lin);
}

#endif
