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

#include "catch_amalgamated.hpp"

#include "massloc/waveforms.hpp"

#include <cmath>
#include <numbers>
#include <set>

using namespace massloc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("grid weights integrate constants exactly", "[waveforms]")
{
    const FrequencyGrid g = FrequencyGrid::uniform(1e9, 257);
    double sum = 0.0;
    for (double w : g.weights)
        sum += w;
    CHECK_THAT(sum, WithinRel(1e9, 1e-14));
    CHECK_THAT(g.freqs.front(), WithinRel(-0.5e9, 1e-15));
    CHECK_THAT(g.freqs.back(), WithinRel(0.5e9, 1e-15));
    for (size_t k = 0; k < g.size(); ++k)
        CHECK(g.freqs[k] == -g.freqs[g.size() - 1 - k]);
}

TEST_CASE("flat spectrum has beta = W / sqrt(12)", "[waveforms]")
{
    // Rolloff 0 on a grid of width W gives a rectangle of width W / (1 + 0) = W
    const double W = 1e9;
    const FrequencyGrid g = FrequencyGrid::uniform(W, 4097);
    const auto p = rrc_spectrum(g, 0.0);
    CHECK_THAT(spectral_energy(p, g), WithinRel(1.0, 1e-12));
    CHECK_THAT(mean_frequency(p, g), WithinAbs(0.0, 1e-3));
    CHECK_THAT(effective_bandwidth(p, g), WithinRel(W / std::sqrt(12.0), 1e-6));
}

TEST_CASE("raised-cosine bandwidth matches an independent closed form", "[waveforms]")
{
    // |P|^2 of an RRC is the raised cosine; its second moment for symbol rate R and rolloff b is
    // R^2 (1/12 + b^2 (1/4 - 2/pi^2)) after normalization to unit energy.
    const double W = 1e9;
    const double b = 0.6;
    const double R = W / (1.0 + b);
    const FrequencyGrid g = FrequencyGrid::uniform(W, 8193);
    const auto p = rrc_spectrum(g, b);
    const double expected = R * std::sqrt(1.0 / 12.0 + b * b * (0.25 - 2.0 / (std::numbers::pi * std::numbers::pi)));
    CHECK_THAT(spectral_energy(p, g), WithinRel(1.0, 1e-9));
    CHECK_THAT(effective_bandwidth(p, g), WithinRel(expected, 1e-5));
}

TEST_CASE("MIMO waveforms are orthogonal with unit energy and zero mean frequency", "[waveforms]")
{
    const FrequencyGrid g = FrequencyGrid::uniform(1e9, 1024);
    for (auto layout : {MimoLayout::interleaved, MimoLayout::contiguous})
    {
        const SpectrumSet s = mimo_waveform_set(g, 0.6, 16, 60e9, 16.0, layout);
        CHECK(s.orthogonal);
        CHECK(s.n_tx() == 16);
        CHECK_THAT(s.energy_per_antenna, WithinRel(1.0, 1e-15));
        std::set<size_t> used;
        for (size_t i = 0; i < s.n_tx(); ++i)
        {
            CHECK_THAT(spectral_energy(s.spectra[i], g), WithinRel(1.0, 1e-12));
            for (size_t k : s.support[i])
                CHECK(used.insert(k).second);
            for (size_t j = 0; j < i; ++j)
            {
                cd ip = 0.0;
                for (size_t k = 0; k < g.size(); ++k)
                    ip += g.weights[k] * s.spectra[i][k] * std::conj(s.spectra[j][k]);
                CHECK(std::abs(ip) == 0.0);
            }
            if (layout == MimoLayout::interleaved)
                CHECK_THAT(mean_frequency(s.spectra[i], g), WithinAbs(0.0, 1e-3));
        }
    }
}

TEST_CASE("MIMO set needs at least 16 in-band points per waveform", "[waveforms]")
{
    // 258 points leave 256 inside the band
    const FrequencyGrid g = FrequencyGrid::uniform(1e9, 258);
    CHECK_NOTHROW(mimo_waveform_set(g, 0.6, 16, 60e9, 1.0));
    CHECK_THROWS(mimo_waveform_set(g, 0.6, 25, 60e9, 1.0));
}

TEST_CASE("shared set divides the total energy", "[waveforms]")
{
    const FrequencyGrid g = FrequencyGrid::uniform(1e9, 512);
    const SpectrumSet s = shared_waveform_set(g, 0.6, 25, 60e9, 5.0);
    CHECK_FALSE(s.orthogonal);
    CHECK_THAT(s.energy_per_antenna, WithinRel(0.2, 1e-15));
    CHECK_THAT(mean_squared_bandwidth(s), WithinRel(std::pow(effective_bandwidth(s.spectra[0], g), 2), 1e-12));
}
