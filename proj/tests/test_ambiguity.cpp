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

#include "massloc/ambiguity.hpp"
#include "massloc/montecarlo.hpp"

#include <cmath>

using namespace massloc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    struct Rows
    {
        double gap_db, sigma_thr_mv;
    };
    // Tabulated gaps and thresholds at P_A = 1e-2
    const Rows kTable[] = {{-36.9, 0.062}, {-32.1, 0.187}, {-29.9, 0.313},
                           {-33.5, 0.136}, {-28.7, 0.406}, {-26.5, 0.677}};

    ExperimentConfig af_config()
    {
        ExperimentConfig c;
        c.n_freq = 256;
        c.random_rx_orientation = false;
        return c;
    }
}

TEST_CASE("decibel conversions are power ratios", "[ambiguity]")
{
    CHECK_THAT(db_to_linear(-30.0), WithinRel(1e-3, 1e-14));
    CHECK_THAT(linear_to_db(db_to_linear(-36.9)), WithinAbs(-36.9, 1e-12));
}

TEST_CASE("tabulated thresholds follow from the tabulated gaps", "[ambiguity]")
{
    for (const auto &r : kTable)
        CHECK_THAT(noise_threshold(db_to_linear(r.gap_db), 1e-2) * 1e3, WithinRel(r.sigma_thr_mv, 0.02));
}

TEST_CASE("threshold and ambiguity probability are inverse", "[ambiguity]")
{
    for (double gap : {1e-4, 3e-3, 0.2})
        for (double p : {1e-6, 1e-2, 0.3})
            CHECK_THAT(ambiguity_probability(gap, noise_threshold(gap, p)), WithinRel(p, 1e-10));
    CHECK_THAT(ambiguity_probability(db_to_linear(-36.9), 0.062e-3), WithinRel(1e-2, 0.05));
    CHECK_THROWS(noise_threshold(0.1, 0.6));
}

TEST_CASE("MIMO ambiguity function peaks at one and is bounded by the peak", "[ambiguity]")
{
    const ExperimentConfig cfg = af_config();
    const SpectrumSet sp = make_spectra(cfg, 4, SchemeKind::mimo);
    const CycleSetup c = make_cycle(cfg, 4, 4, SchemeKind::mimo, 0);
    const AmbiguityEvaluator af(c.scenario, c.scheme, sp);
    CHECK_THAT(af.peak(), WithinRel(1.0, 1e-12));
    Rng rng(9);
    for (int k = 0; k < 50; ++k)
    {
        const Vec3 p = cfg.tx_position + Vec3(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
        const double v = af(p);
        CHECK(v >= 0.0);
        CHECK(v <= af.peak() * (1.0 + 1e-12));
    }
    CHECK_THAT(af_value(c.scenario, c.scheme, sp, cfg.tx_position, cfg.tx_position + Vec3(0.3, 0.1, 0.0)),
               WithinRel(af(cfg.tx_position + Vec3(0.3, 0.1, 0.0)), 1e-12));
}

TEST_CASE("grid scan locates the main lobe and the best sidelobe outside it", "[ambiguity]")
{
    const ExperimentConfig cfg = af_config();
    const SpectrumSet sp = make_spectra(cfg, 4, SchemeKind::mimo);
    const CycleSetup c = make_cycle(cfg, 4, 4, SchemeKind::mimo, 0);
    GridSpec g;
    g.center = cfg.tx_position;
    g.half_extent = 0.6;
    g.spacing = 0.2;
    REQUIRE(g.points_per_axis() == 7);
    const AfSurface s = scan(c.scenario, c.scheme, sp, g);
    REQUIRE(s.values.size() == 343);
    CHECK((s.grid_points[s.main_peak_index] - cfg.tx_position).norm() < 1e-12);
    CHECK(s.main_lobe[s.main_peak_index]);
    for (size_t k = 0; k < s.values.size(); ++k)
        CHECK(s.values[k] <= s.values[s.main_peak_index]);
    REQUIRE(s.best_sidelobe_index != AfSurface::npos);
    CHECK_FALSE(s.main_lobe[s.best_sidelobe_index]);
    for (size_t k = 0; k < s.values.size(); ++k)
        if (!s.main_lobe[k])
            CHECK(s.values[k] <= s.values[s.best_sidelobe_index]);

    const AmbiguityReport r = report(s, 1e-2, 0.022e-3);
    const double side = s.values[s.best_sidelobe_index] / s.values[s.main_peak_index];
    CHECK_THAT(r.gap_linear, WithinRel(1.0 - side, 1e-12));
    CHECK_THAT(r.gap_db, WithinRel(10.0 * std::log10(1.0 - side), 1e-12));
    CHECK_THAT(r.sigma_thr, WithinRel(noise_threshold(r.gap_linear, 1e-2), 1e-12));

    g.center = cfg.tx_position + Vec3(1.0, 0.0, 0.0);
    CHECK_THROWS_AS(scan(c.scenario, c.scheme, sp, g), std::invalid_argument);
}

TEST_CASE("grid scan is independent of the thread count", "[ambiguity]")
{
    const ExperimentConfig cfg = af_config();
    const SpectrumSet sp = make_spectra(cfg, 4, SchemeKind::phased);
    const CycleSetup c = make_cycle(cfg, 4, 4, SchemeKind::phased, 0);
    GridSpec g;
    g.center = cfg.tx_position;
    g.half_extent = 0.4;
    const AfSurface a = scan(c.scenario, c.scheme, sp, g, 1);
    const AfSurface b = scan(c.scenario, c.scheme, sp, g, 4);
    CHECK(a.values == b.values);
    CHECK(a.best_sidelobe_index == b.best_sidelobe_index);
}
