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

#include "massloc/waveforms.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace massloc
{
    namespace
    {
        constexpr double kPiW = 3.14159265358979323846;

        void normalize(std::vector<cd> &p, const FrequencyGrid &grid)
        {
            const double e = spectral_energy(p, grid);
            if (!(e > 0.0))
                throw std::invalid_argument("waveform has zero energy on the grid");
            const double s = 1.0 / std::sqrt(e);
            for (auto &v : p)
                v *= s;
        }

        std::vector<size_t> nonzero(const std::vector<cd> &p)
        {
            std::vector<size_t> idx;
            for (size_t k = 0; k < p.size(); ++k)
                if (p[k] != cd(0.0))
                    idx.push_back(k);
            return idx;
        }
    }

    FrequencyGrid FrequencyGrid::uniform(double bandwidth, size_t n_points)
    {
        if (!(bandwidth > 0.0))
            throw std::invalid_argument("frequency grid: bandwidth must be positive");
        if (n_points < 64)
            throw std::invalid_argument("frequency grid: at least 64 points required");

        FrequencyGrid g;
        g.f_min = -0.5 * bandwidth;
        g.f_max = 0.5 * bandwidth;
        g.freqs.resize(n_points);
        g.weights.assign(n_points, bandwidth / double(n_points - 1));
        g.weights.front() *= 0.5;
        g.weights.back() *= 0.5;

        // Symmetric construction so that f_k = -f_{n-1-k} exactly
        const double df = bandwidth / double(n_points - 1);
        for (size_t k = 0; k < n_points; ++k)
        {
            const double mirrored = double(n_points - 1) - double(k);
            g.freqs[k] = 0.5 * (double(k) - mirrored) * df;
        }
        return g;
    }

    std::vector<cd> rrc_spectrum(const FrequencyGrid &grid, double rolloff)
    {
        if (!(rolloff >= 0.0 && rolloff <= 1.0))
            throw std::invalid_argument("rrc_spectrum: roll-off must be in [0, 1]");

        // Symbol rate chosen so that the occupied band (1 + rolloff) R equals W
        const double rate = grid.bandwidth() / (1.0 + rolloff);
        const double f1 = 0.5 * (1.0 - rolloff) * rate;
        const double f2 = 0.5 * (1.0 + rolloff) * rate;

        std::vector<cd> p(grid.size());
        for (size_t k = 0; k < grid.size(); ++k)
        {
            const double af = std::abs(grid.freqs[k]);
            double v = 0.0;
            if (af <= f1)
                v = 1.0;
            else if (af < f2)
                v = std::sqrt(0.5 * (1.0 + std::cos(kPiW / (rolloff * rate) * (af - f1))));
            p[k] = v;
        }
        normalize(p, grid);
        return p;
    }

    double spectral_energy(const std::vector<cd> &spectrum, const FrequencyGrid &grid)
    {
        double e = 0.0;
        for (size_t k = 0; k < grid.size(); ++k)
            e += grid.weights[k] * std::norm(spectrum[k]);
        return e;
    }

    double mean_frequency(const std::vector<cd> &spectrum, const FrequencyGrid &grid)
    {
        double m = 0.0;
        for (size_t k = 0; k < grid.size(); ++k)
            m += grid.weights[k] * grid.freqs[k] * std::norm(spectrum[k]);
        return m;
    }

    double effective_bandwidth(const std::vector<cd> &spectrum, const FrequencyGrid &grid)
    {
        double b2 = 0.0;
        for (size_t k = 0; k < grid.size(); ++k)
            b2 += grid.weights[k] * grid.freqs[k] * grid.freqs[k] * std::norm(spectrum[k]);
        return std::sqrt(b2);
    }

    SpectrumSet shared_waveform_set(const FrequencyGrid &grid, double rolloff, size_t n_tx, double carrier, double total_energy)
    {
        if (n_tx == 0)
            throw std::invalid_argument("waveform set: n_tx must be positive");
        SpectrumSet s;
        s.grid = grid;
        const auto p = rrc_spectrum(grid, rolloff);
        s.spectra.assign(n_tx, p);
        s.support.assign(n_tx, nonzero(p));
        s.carrier = carrier;
        s.total_energy = total_energy;
        s.energy_per_antenna = total_energy / double(n_tx);
        s.orthogonal = (n_tx == 1);
        return s;
    }

    SpectrumSet mimo_waveform_set(const FrequencyGrid &grid, double rolloff, size_t n_tx, double carrier, double total_energy,
                                  MimoLayout layout)
    {
        if (n_tx == 0)
            throw std::invalid_argument("waveform set: n_tx must be positive");
        const size_t n = grid.size();
        const auto base = rrc_spectrum(grid, rolloff);

        // Only grid points inside the pulse band are dealt; the band edges carry no energy
        std::vector<size_t> active;
        for (size_t k = 0; k < n; ++k)
            if (base[k] != cd(0.0))
                active.push_back(k);
        const size_t na = active.size();
        if (na / n_tx < 16)
            throw std::invalid_argument("mimo_waveform_set: " + std::to_string(n_tx) + " waveforms need at least " +
                                        std::to_string(16 * n_tx) + " in-band grid points, got " + std::to_string(na));

        std::vector<size_t> owner(n, 0);
        if (layout == MimoLayout::interleaved)
        {
            // Active points j and na-1-j form a pair; pairs are dealt round-robin, the centre point (odd na) goes to waveform 0
            for (size_t j = 0; j < na; ++j)
                owner[active[j]] = std::min(j, na - 1 - j) % n_tx;
        }
        else
        {
            for (size_t j = 0; j < na; ++j)
                owner[active[j]] = std::min(j * n_tx / na, n_tx - 1);
        }

        SpectrumSet s;
        s.grid = grid;
        s.carrier = carrier;
        s.total_energy = total_energy;
        s.energy_per_antenna = total_energy / double(n_tx);
        s.orthogonal = true;
        s.spectra.assign(n_tx, std::vector<cd>(n, cd(0.0)));
        for (size_t k = 0; k < n; ++k)
            s.spectra[owner[k]][k] = base[k];
        for (auto &p : s.spectra)
        {
            normalize(p, grid);
            s.support.push_back(nonzero(p));
            if (s.support.back().size() < 16)
                throw std::invalid_argument("mimo_waveform_set: waveform with fewer than 16 non-zero grid points");
        }
        return s;
    }

    double mean_squared_bandwidth(const SpectrumSet &set)
    {
        double acc = 0.0;
        for (const auto &p : set.spectra)
        {
            const double b = effective_bandwidth(p, set.grid);
            acc += b * b;
        }
        return acc / double(set.spectra.size());
    }
}
