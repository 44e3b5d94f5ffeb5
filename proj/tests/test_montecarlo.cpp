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

#include "massloc/montecarlo.hpp"

#include <atomic>
#include <cmath>

using namespace massloc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("stream seeds differ across cycles and streams", "[montecarlo]")
{
    CHECK(stream_seed(1, 0, 1) != stream_seed(1, 0, 2));
    CHECK(stream_seed(1, 0, 1) != stream_seed(1, 1, 1));
    CHECK(stream_seed(1, 0, 1) != stream_seed(2, 0, 1));
    CHECK(stream_seed(5, 7, 3) == stream_seed(5, 7, 3));
}

TEST_CASE("random draws have the expected moments", "[montecarlo]")
{
    Rng rng(42);
    const int n = 200000;
    double su = 0.0, sn = 0.0, sn2 = 0.0, se = 0.0;
    for (int k = 0; k < n; ++k)
    {
        const double u = rng.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        su += u;
        const double z = rng.normal();
        sn += z;
        sn2 += z * z;
        se += rng.exponential(4.0);
    }
    CHECK_THAT(su / n, WithinAbs(0.5, 0.005));
    CHECK_THAT(sn / n, WithinAbs(0.0, 0.01));
    CHECK_THAT(sn2 / n, WithinAbs(1.0, 0.01));
    CHECK_THAT(se / n, WithinRel(0.25, 0.01));
}

TEST_CASE("Poisson arrivals average rate times horizon", "[montecarlo]")
{
    const double a1 = 1e-3;
    double sum = 0.0;
    const int n = 2000;
    for (int k = 0; k < n; ++k)
    {
        Rng rng(stream_seed(3, uint64_t(k), uint64_t(Stream::multipath)));
        const auto p = sample_multipath(rng, 4e9, 5e-9, 5e-9, a1);
        REQUIRE(p[0].amplitude == a1);
        for (size_t l = 1; l < p.size(); ++l)
        {
            CHECK(p[l].delay_bias <= 5e-9);
            CHECK(p[l].delay_bias > p[l - 1].delay_bias);
            CHECK_THAT(p[l].variance, WithinRel(a1 * a1 * std::exp(-p[l].delay_bias / 5e-9), 1e-14));
        }
        sum += double(p.size() - 1);
    }
    CHECK_THAT(sum / n, WithinRel(20.0, 0.03));
}

TEST_CASE("fixed path count ignores the horizon", "[montecarlo]")
{
    Rng rng(8);
    CHECK(sample_multipath(rng, 4e9, 1e-12, 5e-9, 1.0, 5).size() == 5);
}

TEST_CASE("parallel_for visits every index once", "[montecarlo]")
{
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), 8, [&](size_t k) { hits[k]++; });
    for (auto &h : hits)
        CHECK(h.load() == 1);
    CHECK_THROWS(parallel_for(10, 4, [](size_t k) {
        if (k == 7)
            throw std::runtime_error("boom");
    }));
}

TEST_CASE("MIMO grid holds at least 16 points per waveform", "[montecarlo]")
{
    ExperimentConfig cfg;
    cfg.n_freq = 256;
    CHECK(make_spectra(cfg, 100, SchemeKind::mimo).grid.size() == 1602);
    CHECK(make_spectra(cfg, 4, SchemeKind::mimo).grid.size() == 256);
    CHECK(make_spectra(cfg, 100, SchemeKind::timed).grid.size() == 256);
}

TEST_CASE("cells are deterministic across thread counts", "[montecarlo]")
{
    ExperimentConfig cfg;
    cfg.n_freq = 128;
    cfg.n_cycles = 12;
    cfg.n_paths = 3;
    cfg.quantization = true;
    cfg.sync = true;
    cfg.orientation_aware = true;
    for (auto kind : {SchemeKind::mimo, SchemeKind::phased})
    {
        cfg.threads = 1;
        const CellResult a = run_cell(cfg, 4, 9, kind);
        cfg.threads = 5;
        const CellResult b = run_cell(cfg, 4, 9, kind);
        REQUIRE(a.cycles.size() == 12);
        for (size_t k = 0; k < 12; ++k)
        {
            CHECK(a.cycles[k].seed == b.cycles[k].seed);
            CHECK(a.cycles[k].peb == b.cycles[k].peb);
        }
        CHECK(a.peb == b.peb);
        CHECK(a.n_identifiable + a.n_unidentifiable + a.n_rejected == 12);
        CHECK(std::isfinite(a.peb));
        CHECK(a.peb_stderr >= 0.0);
    }
}

TEST_CASE("receiver orientations follow the orientation stream", "[montecarlo]")
{
    ExperimentConfig cfg;
    const auto a = make_cycle(cfg, 4, 4, SchemeKind::mimo, 3);
    const auto b = make_cycle(cfg, 4, 4, SchemeKind::mimo, 4);
    CHECK(a.scenario.rx.orientation.theta != b.scenario.rx.orientation.theta);
    CHECK(a.scenario.rx.orientation.theta >= 0.0);
    CHECK(a.scenario.rx.orientation.theta < kPi);
    cfg.random_rx_orientation = false;
    cfg.rx_orientation = {0.2, 0.3};
    CHECK(make_cycle(cfg, 4, 4, SchemeKind::mimo, 3).scenario.rx.orientation.phi == 0.3);
}

TEST_CASE("an unidentifiable cell throws", "[montecarlo]")
{
    ExperimentConfig cfg;
    cfg.n_freq = 128;
    cfg.n_cycles = 3;
    cfg.random_rx_orientation = false;
    CHECK_THROWS_AS(run_cell(cfg, 9, 9, SchemeKind::timed), AllCyclesUnidentifiable);
}

TEST_CASE("grid rejects near-field points", "[montecarlo]")
{
    ExperimentConfig cfg;
    cfg.n_freq = 128;
    cfg.n_cycles = 2;
    PlaneGrid g{-0.5, 0.5, 0.5, 1.0, 0.5};
    cfg.d_ant = 0.01; // Diameter of a 4 x 4 array: 4.2 cm, far field beyond 2.1 m
    const auto r = run_grid(cfg, g, 16, 16, SchemeKind::mimo);
    REQUIRE(r.size() == 6);
    for (const auto &p : r)
    {
        CHECK(p.near_field);
        CHECK(std::isnan(p.peb));
    }
    g = PlaneGrid{3.0, 3.0, 3.0, 3.0, 1.0};
    const auto far = run_grid(cfg, g, 16, 16, SchemeKind::mimo);
    REQUIRE(far.size() == 1);
    CHECK_FALSE(far[0].near_field);
    CHECK(far[0].identifiable);
    CHECK(far[0].peb > 0.0);
}
