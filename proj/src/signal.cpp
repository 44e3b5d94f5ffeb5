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

#include "massloc/signal.hpp"

#include <cmath>
#include <stdexcept>

namespace massloc
{
    void phase_ramp(double phase0, double step, size_t n, cd *out)
    {
        constexpr size_t kAnchor = 64;
        const cd rot = std::polar(1.0, step);
        for (size_t k0 = 0; k0 < n; k0 += kAnchor)
        {
            cd z = std::polar(1.0, phase0 + double(k0) * step);
            const size_t k1 = std::min(n, k0 + kAnchor);
            for (size_t k = k0; k < k1; ++k)
            {
                out[k] = z;
                z *= rot;
            }
        }
    }

    namespace
    {
        // Accumulates sum_i coeff_i term_i(f) into out, term_i = exp(-j 2 pi (f + fc) tau_i^t) w_i(f) sqrt(E) P_i(f)
        struct BeamBuilder
        {
            const SpectrumSet &set;
            const EffectiveWeights &w;
            double fc;
            double amp;
            std::vector<cd> ramp;

            BeamBuilder(const SpectrumSet &s, const EffectiveWeights &weights, double carrier, double energy)
                : set(s), w(weights), fc(carrier), amp(std::sqrt(energy)), ramp(s.grid.size())
            {
            }

            // Writes term_i to ramp (full grid) or evaluates on the support only
            void term(size_t i, double tau_t)
            {
                const auto &g = set.grid;
                const size_t n = g.size();
                const auto &sup = set.support[i];
                const double phase0 = -2.0 * kPi * fc * tau_t + w.phase[i];
                const double rate = 2.0 * kPi * (w.delay[i] - tau_t);
                if (sup.size() == n)
                {
                    phase_ramp(phase0 + rate * g.f_min, rate * g.step(), n, ramp.data());
                    for (size_t k = 0; k < n; ++k)
                        ramp[k] *= amp * set.spectra[i][k];
                }
                else
                {
                    for (size_t k : sup)
                        ramp[k] = std::polar(amp, phase0 + rate * g.freqs[k]) * set.spectra[i][k];
                }
            }

            void accumulate_abs(size_t i, double coeff, std::vector<double> &out) const
            {
                if (set.support[i].size() == out.size())
                {
                    for (size_t k = 0; k < out.size(); ++k)
                        out[k] += coeff * std::abs(ramp[k]);
                }
                else
                {
                    for (size_t k : set.support[i])
                        out[k] += coeff * std::abs(ramp[k]);
                }
            }

            void accumulate(size_t i, double coeff, std::vector<cd> &out) const
            {
                if (set.support[i].size() == out.size())
                {
                    for (size_t k = 0; k < out.size(); ++k)
                        out[k] += coeff * ramp[k];
                }
                else
                {
                    for (size_t k : set.support[i])
                        out[k] += coeff * ramp[k];
                }
            }
        };
    }

    SignalModel build_signal_model(const Scenario &s, const SpectrumSet &spectra, const WeightingScheme &scheme,
                                   double energy, bool with_derivatives)
    {
        if (spectra.n_tx() != s.tx.size())
            throw std::invalid_argument("signal model: spectrum count differs from N_tx");
        if (s.paths.empty())
            throw std::invalid_argument("signal model: empty path list");

        SignalModel model;
        model.spectra = &spectra;
        model.fc = spectra.carrier;
        model.n_tx = s.tx.size();
        model.n_rx = s.rx.size();
        const size_t n = spectra.grid.size();
        const size_t n_paths = s.paths.size();

        const auto tx_off = rotated_offsets(s.tx);
        const auto rx_off = rotated_offsets(s.rx);
        const Angles los = los_angles(s);
        const double tau1 = los_delay(s);
        const auto w = effective_weights(scheme, s.tx, model.fc);

        model.tau.resize(n_paths);
        model.rx_delay.assign(n_paths, std::vector<double>(model.n_rx));
        model.gain.resize(n_paths);
        model.beam.assign(n_paths, std::vector<cd>(n, cd(0.0)));

        std::vector<cd> sync(n);
        phase_ramp(-2.0 * kPi * (spectra.grid.f_min + model.fc) * scheme.sync_error,
                   -2.0 * kPi * spectra.grid.step() * scheme.sync_error, n, sync.data());

        if (with_derivatives)
        {
            model.los = los_geometry(s);
            model.has_derivatives = true;
            for (auto &d : model.los_beam_derivative)
                d.assign(n, cd(0.0));
            for (auto &d : model.los_beam_derivative_abs)
                d.assign(n, 0.0);
            model.los_beam_abs.assign(n, 0.0);
        }

        BeamBuilder builder(spectra, w, model.fc, energy);
        for (size_t l = 0; l < n_paths; ++l)
        {
            const auto &p = s.paths[l];
            const Angles at = l == 0 ? los : p.tx_angles;
            const Angles ar = l == 0 ? los : p.rx_angles;
            model.tau[l] = tau1 + p.delay_bias;
            model.gain[l] = l == 0 ? cd(p.amplitude) : cd(p.gain_re, p.gain_im);
            for (size_t m = 0; m < model.n_rx; ++m)
                model.rx_delay[l][m] = inter_antenna_delay(rx_off[m], ar);

            for (size_t i = 0; i < model.n_tx; ++i)
            {
                builder.term(i, inter_antenna_delay(tx_off[i], at));
                builder.accumulate(i, 1.0, model.beam[l]);
                if (l == 0 && with_derivatives)
                {
                    builder.accumulate_abs(i, 1.0, model.los_beam_abs);
                    for (size_t a = 0; a < 5; ++a)
                    {
                        const double g = model.los.tx_gradient[i][a];
                        if (g != 0.0)
                        {
                            builder.accumulate(i, g, model.los_beam_derivative[a]);
                            builder.accumulate_abs(i, std::abs(g), model.los_beam_derivative_abs[a]);
                        }
                    }
                }
            }
            for (size_t k = 0; k < n; ++k)
                model.beam[l][k] *= sync[k];
        }
        if (with_derivatives)
            for (auto &d : model.los_beam_derivative)
                for (size_t k = 0; k < n; ++k)
                    d[k] *= sync[k];
        return model;
    }

    void los_rx_phase(const SignalModel &model, size_t m, cd *out)
    {
        const auto &g = model.spectra->grid;
        const double dt = model.tau[0] - model.rx_delay[0][m];
        phase_ramp(-2.0 * kPi * (g.f_min + model.fc) * dt, -2.0 * kPi * g.step() * dt, g.size(), out);
    }

    void path_template(const SignalModel &model, size_t l, size_t m, cd *out)
    {
        const auto &g = model.spectra->grid;
        const size_t n = g.size();
        if (l == 0)
        {
            los_rx_phase(model, m, out);
        }
        else
        {
            const double tr = model.rx_delay[l][m];
            const double tl = model.tau[l];
            phase_ramp(2.0 * kPi * (g.f_min * (tr - tl) + model.fc * tr), 2.0 * kPi * g.step() * (tr - tl), n, out);
        }
        const auto &b = model.beam[l];
        for (size_t k = 0; k < n; ++k)
            out[k] *= b[k];
    }

    void received_signal(const SignalModel &model, size_t m, cd *out)
    {
        const size_t n = model.n_freq();
        std::vector<cd> u(n);
        for (size_t k = 0; k < n; ++k)
            out[k] = 0.0;
        for (size_t l = 0; l < model.n_paths(); ++l)
        {
            path_template(model, l, m, u.data());
            for (size_t k = 0; k < n; ++k)
                out[k] += model.gain[l] * u[k];
        }
    }
}
