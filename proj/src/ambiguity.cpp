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

#include "massloc/ambiguity.hpp"

#include "massloc/signal.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <deque>
#include <stdexcept>
#include <thread>

namespace massloc
{
    namespace
    {
        Scenario unit_gain(const Scenario &s)
        {
            Scenario u = s;
            u.paths.at(0).amplitude = 1.0;
            return u;
        }
    }

    AmbiguityEvaluator::AmbiguityEvaluator(const Scenario &s, const WeightingScheme &scheme, const SpectrumSet &spectra)
        : scenario_(unit_gain(s)), scheme_(scheme), spectra_(spectra)
    {
        const SignalModel model = build_signal_model(scenario_, spectra_, scheme_, 1.0, false);
        const size_t n = spectra_.grid.size();
        reference_.assign(model.n_rx, std::vector<cd>(n));
        for (size_t m = 0; m < model.n_rx; ++m)
        {
            received_signal(model, m, reference_[m].data());
            for (size_t k = 0; k < n; ++k)
                reference_[m][k] = std::conj(reference_[m][k]) * spectra_.grid.weights[k];
        }
    }

    double AmbiguityEvaluator::operator()(const Vec3 &p_test) const
    {
        Scenario t = scenario_;
        t.tx.centroid = p_test;
        const SignalModel model = build_signal_model(t, spectra_, scheme_, 1.0, false);
        const size_t n = spectra_.grid.size();
        std::vector<cd> x(n);
        cd acc = 0.0;
        for (size_t m = 0; m < model.n_rx; ++m)
        {
            received_signal(model, m, x.data());
            const auto &r = reference_[m];
            for (size_t k = 0; k < n; ++k)
                acc += r[k] * x[k];
        }
        acc /= double(model.n_tx * model.n_rx);
        return std::norm(acc);
    }

    double af_value(const Scenario &s, const WeightingScheme &scheme, const SpectrumSet &spectra, const Vec3 &p_true,
                    const Vec3 &p_test)
    {
        Scenario t = s;
        t.tx.centroid = p_true;
        return AmbiguityEvaluator(t, scheme, spectra)(p_test);
    }

    size_t GridSpec::points_per_axis() const
    {
        if (!(spacing > 0.0) || !(half_extent >= 0.0))
            throw std::invalid_argument("AF grid: spacing must be positive and extent non-negative");
        return 2 * size_t(std::llround(half_extent / spacing)) + 1;
    }

    AfSurface scan(const Scenario &s, const WeightingScheme &scheme, const SpectrumSet &spectra, const GridSpec &grid,
                   unsigned threads)
    {
        const size_t na = grid.points_per_axis();
        const double half = 0.5 * double(na - 1) * grid.spacing;
        const Vec3 lo = grid.center - Vec3::Constant(half);
        const Vec3 p_true = s.tx.centroid;
        for (int d = 0; d < 3; ++d)
            if (p_true[d] < lo[d] - 1e-9 || p_true[d] > lo[d] + 2.0 * half + 1e-9)
                throw std::invalid_argument("AF grid does not contain the true position");

        AfSurface surf;
        surf.true_position = p_true;
        surf.n_axis = na;
        const size_t total = na * na * na;
        surf.grid_points.reserve(total);
        for (size_t ix = 0; ix < na; ++ix)
            for (size_t iy = 0; iy < na; ++iy)
                for (size_t iz = 0; iz < na; ++iz)
                    surf.grid_points.push_back(lo + grid.spacing * Vec3(double(ix), double(iy), double(iz)));
        surf.values.assign(total, 0.0);

        const AmbiguityEvaluator af(s, scheme, spectra);
        const unsigned nt = std::max(1u, threads);
        auto work = [&](unsigned t) {
            for (size_t k = t; k < total; k += nt)
                surf.values[k] = af(surf.grid_points[k]);
        };
        std::vector<std::thread> pool;
        for (unsigned t = 1; t < nt; ++t)
            pool.emplace_back(work, t);
        work(0);
        for (auto &th : pool)
            th.join();

        // Peak: highest value, lowest index on ties
        size_t peak = 0;
        for (size_t k = 1; k < total; ++k)
            if (surf.values[k] > surf.values[peak])
                peak = k;
        surf.main_peak_index = peak;

        // Main lobe: 6-connected region above half the peak
        const double thr = 0.5 * surf.values[peak];
        surf.main_lobe.assign(total, false);
        std::deque<size_t> queue{peak};
        surf.main_lobe[peak] = true;
        const auto index = [na](size_t ix, size_t iy, size_t iz) { return (ix * na + iy) * na + iz; };
        while (!queue.empty())
        {
            const size_t k = queue.front();
            queue.pop_front();
            const size_t ix = k / (na * na), iy = (k / na) % na, iz = k % na;
            const long c[3] = {long(ix), long(iy), long(iz)};
            for (int d = 0; d < 3; ++d)
                for (long step : {-1L, 1L})
                {
                    long n[3] = {c[0], c[1], c[2]};
                    n[d] += step;
                    if (n[d] < 0 || n[d] >= long(na))
                        continue;
                    const size_t q = index(size_t(n[0]), size_t(n[1]), size_t(n[2]));
                    if (!surf.main_lobe[q] && surf.values[q] >= thr)
                    {
                        surf.main_lobe[q] = true;
                        queue.push_back(q);
                    }
                }
        }

        for (size_t k = 0; k < total; ++k)
            if (!surf.main_lobe[k] &&
                (surf.best_sidelobe_index == AfSurface::npos || surf.values[k] > surf.values[surf.best_sidelobe_index]))
                surf.best_sidelobe_index = k;
        return surf;
    }

    double ambiguity_probability(double gap_linear, double sigma)
    {
        if (!(gap_linear >= 0.0) || !(sigma >= 0.0))
            throw std::invalid_argument("ambiguity_probability: gap and sigma must be non-negative");
        if (sigma == 0.0)
            return gap_linear > 0.0 ? 0.0 : 0.5;
        return 0.5 * std::erfc(gap_linear / std::sqrt(4.0 * sigma * sigma));
    }

    double noise_threshold(double gap_linear, double target_p)
    {
        if (!(target_p > 0.0 && target_p < 0.5))
            throw std::invalid_argument("noise_threshold: target probability must be in (0, 1/2)");
        if (!(gap_linear > 0.0))
            throw std::invalid_argument("noise_threshold: gap must be positive");
        return 0.5 * gap_linear / boost::math::erfc_inv(2.0 * target_p);
    }

    AmbiguityReport report(const AfSurface &surface, double target_p, double sigma)
    {
        AmbiguityReport r;
        r.target_p = target_p;
        const double peak = surface.values.at(surface.main_peak_index);
        const double side =
            surface.best_sidelobe_index == AfSurface::npos ? 0.0 : surface.values.at(surface.best_sidelobe_index);
        r.gap_linear = 1.0 - side / peak;
        r.gap_db = linear_to_db(r.gap_linear);
        r.sigma_thr = r.gap_linear > 0.0 ? noise_threshold(r.gap_linear, target_p) : 0.0;
        r.p_ambiguity = ambiguity_probability(r.gap_linear, sigma);
        return r;
    }

    double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
}
