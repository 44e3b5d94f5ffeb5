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

#include "massloc/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace massloc
{
    double ExperimentConfig::d_ant_resolved() const
    {
        if (d_ant > 0.0)
            return d_ant;
        return 0.5 * kSpeedOfLight / (fc - 0.5 * bandwidth);
    }

    std::vector<MultipathComponent> sample_multipath(Rng &rng, double rate, double horizon, double pdp_decay, double a1,
                                                     size_t fixed_count)
    {
        std::vector<MultipathComponent> paths(1);
        paths[0].amplitude = a1;
        if (!(rate > 0.0))
            return paths;

        double t = 0.0;
        while (true)
        {
            t += rng.exponential(rate);
            if (fixed_count > 0 ? paths.size() >= fixed_count : t > horizon)
                break;
            MultipathComponent c;
            c.delay_bias = t;
            c.tx_angles = {rng.uniform(0.0, kPi), rng.uniform(0.0, 2.0 * kPi)};
            c.rx_angles = {rng.uniform(0.0, kPi), rng.uniform(0.0, 2.0 * kPi)};
            c.variance = a1 * a1 * std::exp(-t / pdp_decay);
            const double s = std::sqrt(0.5 * c.variance);
            c.gain_re = s * rng.normal();
            c.gain_im = s * rng.normal();
            paths.push_back(c);
        }
        return paths;
    }

    void parallel_for(size_t n, unsigned threads, const std::function<void(size_t)> &task)
    {
        const unsigned nt = std::max(1u, std::min<unsigned>(threads, unsigned(std::max<size_t>(n, 1))));
        if (nt == 1)
        {
            for (size_t k = 0; k < n; ++k)
                task(k);
            return;
        }
        std::atomic<size_t> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        auto worker = [&] {
            while (true)
            {
                const size_t k = next.fetch_add(1);
                if (k >= n)
                    return;
                try
                {
                    task(k);
                }
                catch (...)
                {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nt; ++t)
            pool.emplace_back(worker);
        for (auto &th : pool)
            th.join();
        if (error)
            std::rethrow_exception(error);
    }

    SpectrumSet make_spectra(const ExperimentConfig &cfg, size_t n_tx, SchemeKind kind)
    {
        const double e_tot = cfg.tx_power * cfg.pulse_duration;
        if (kind == SchemeKind::mimo)
        {
            // Two extra points for the zero-valued band edges
            size_t n = std::max(cfg.n_freq, 16 * n_tx + 2);
            n += n % 2;
            return mimo_waveform_set(FrequencyGrid::uniform(cfg.bandwidth, n), cfg.rolloff, n_tx, cfg.fc, e_tot,
                                     cfg.mimo_layout);
        }
        return shared_waveform_set(FrequencyGrid::uniform(cfg.bandwidth, cfg.n_freq), cfg.rolloff, n_tx, cfg.fc, e_tot);
    }

    NoiseModel make_cell_noise(const ExperimentConfig &cfg, size_t n_tx)
    {
        const double a1 = friis_amplitude(cfg.fc, cfg.tx_position.norm());
        if (cfg.snr1 > 0.0)
            return noise_from_snr1(cfg.snr1, n_tx, a1);
        return make_noise_model(cfg.tx_power * cfg.pulse_duration, n_tx, a1, cfg.noise_figure_db);
    }

    CycleSetup make_cycle(const ExperimentConfig &cfg, size_t n_tx, size_t n_rx, SchemeKind kind, uint64_t cycle)
    {
        const double d_ant = cfg.d_ant_resolved();
        const double a1 = friis_amplitude(cfg.fc, cfg.tx_position.norm());

        Rng r_orient(stream_seed(cfg.master_seed, cycle, uint64_t(Stream::orientation)));
        Rng r_err(stream_seed(cfg.master_seed, cycle, uint64_t(Stream::errors)));
        Rng r_sync(stream_seed(cfg.master_seed, cycle, uint64_t(Stream::sync)));
        Rng r_mp(stream_seed(cfg.master_seed, cycle, uint64_t(Stream::multipath)));

        Orientation rx_o = cfg.rx_orientation;
        if (cfg.random_rx_orientation)
        {
            rx_o.theta = r_orient.uniform(0.0, kPi);
            rx_o.phi = r_orient.uniform(0.0, 2.0 * kPi);
        }

        CycleSetup c;
        Scenario &s = c.scenario;
        s.tx = ArrayGeometry::planar_square(n_tx, d_ant, cfg.tx_position, cfg.tx_orientation);
        s.rx = ArrayGeometry::planar_square(n_rx, d_ant, Vec3::Zero(), rx_o);
        if (cfg.n_paths == 1)
        {
            s.paths.resize(1);
            s.paths[0].amplitude = a1;
        }
        else
        {
            s.paths = sample_multipath(r_mp, cfg.arrival_rate, cfg.horizon, cfg.pdp_decay, a1, cfg.n_paths);
        }
        s.sync_error_std = cfg.sync ? cfg.sigma_eps : 0.0;
        s.steering = cfg.steering ? *cfg.steering : los_angles(s);

        const auto errors = sample_errors(r_err, n_tx, ErrorConfig{cfg.quantization, d_ant});
        const double eps = cfg.sync ? cfg.sigma_eps * r_sync.normal() : 0.0;
        c.scheme = make_scheme(kind, s.steering, errors, cfg.quantization, eps);
        return c;
    }

    CellResult run_cell(const ExperimentConfig &cfg, size_t n_tx, size_t n_rx, SchemeKind kind)
    {
        if (cfg.n_cycles == 0)
            throw std::invalid_argument("run_cell: n_cycles must be at least 1");
        const SpectrumSet spectra = make_spectra(cfg, n_tx, kind);
        const NoiseModel noise = make_cell_noise(cfg, n_tx);
        const FimOptions opts{cfg.orientation_aware, cfg.sync};

        CellResult res;
        res.cycles.resize(cfg.n_cycles);
        parallel_for(cfg.n_cycles, cfg.threads, [&](size_t k) {
            CycleResult &cr = res.cycles[k];
            cr.seed = stream_seed(cfg.master_seed, k);
            const CycleSetup c = make_cycle(cfg, n_tx, n_rx, kind, k);
            try
            {
                const CrbResult crb = crb_from_fim(bayesian_fim(c.scenario, spectra, c.scheme, noise, opts));
                cr.identifiable = crb.identifiable;
                cr.peb = crb.peb;
                cr.oeb = crb.oeb;
            }
            catch (const GeometryError &)
            {
                cr.rejected = true;
            }
        });

        // Fixed-order reduction
        double sp = 0.0, sp2 = 0.0, so = 0.0, so2 = 0.0;
        for (const auto &cr : res.cycles)
        {
            if (cr.rejected)
            {
                ++res.n_rejected;
                continue;
            }
            if (!cr.identifiable)
            {
                ++res.n_unidentifiable;
                continue;
            }
            ++res.n_identifiable;
            sp += cr.peb;
            sp2 += cr.peb * cr.peb;
            so += cr.oeb;
            so2 += cr.oeb * cr.oeb;
        }
        if (res.n_identifiable == 0)
            throw AllCyclesUnidentifiable("run_cell: no cycle yields an identifiable FIM");

        const double n = double(res.n_identifiable);
        auto stderr_of = [n](double s, double s2) {
            if (n < 2.0)
                return 0.0;
            const double var = std::max(0.0, (s2 - s * s / n) / (n - 1.0));
            return std::sqrt(var / n);
        };
        res.peb = sp / n;
        res.peb_stderr = stderr_of(sp, sp2);
        if (cfg.orientation_aware)
        {
            res.oeb = res.oeb_stderr = std::numeric_limits<double>::quiet_NaN();
        }
        else
        {
            res.oeb = so / n;
            res.oeb_stderr = stderr_of(so, so2);
        }
        return res;
    }

    std::vector<GridPointResult> run_grid(const ExperimentConfig &cfg, const PlaneGrid &grid, size_t n_tx, size_t n_rx,
                                          SchemeKind kind)
    {
        if (!(grid.step > 0.0))
            throw std::invalid_argument("run_grid: step must be positive");
        const size_t nx = size_t(std::llround((grid.x_max - grid.x_min) / grid.step)) + 1;
        const size_t ny = size_t(std::llround((grid.y_max - grid.y_min) / grid.step)) + 1;
        const double d_ant = cfg.d_ant_resolved();
        const double diameter = std::max(ArrayGeometry::planar_square(n_tx, d_ant).diameter(),
                                         ArrayGeometry::planar_square(n_rx, d_ant).diameter());

        std::vector<GridPointResult> out;
        for (size_t ix = 0; ix < nx; ++ix)
        {
            for (size_t iy = 0; iy < ny; ++iy)
            {
                GridPointResult g;
                g.x = grid.x_min + double(ix) * grid.step;
                g.y = grid.y_min + double(iy) * grid.step;
                const double d = std::hypot(g.x, g.y);
                g.near_field = d < 50.0 * diameter;
                g.peb = g.peb_stderr = g.oeb = std::numeric_limits<double>::quiet_NaN();
                if (!g.near_field)
                {
                    ExperimentConfig c = cfg;
                    c.tx_position = Vec3(g.x, g.y, 0.0);
                    if (kind == SchemeKind::phased && !cfg.steering)
                        c.steering = Angles{0.5 * kPi, 0.5 * kPi};
                    try
                    {
                        const CellResult r = run_cell(c, n_tx, n_rx, kind);
                        g.identifiable = true;
                        g.peb = r.peb;
                        g.peb_stderr = r.peb_stderr;
                        g.oeb = r.oeb;
                    }
                    catch (const AllCyclesUnidentifiable &)
                    {
                        g.identifiable = false;
                    }
                }
                out.push_back(g);
            }
        }
        return out;
    }
}
