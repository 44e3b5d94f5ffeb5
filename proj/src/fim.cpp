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

#include "massloc/fim.hpp"

#include "massloc/linalg.hpp"
#include "massloc/signal.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace massloc
{
    namespace
    {
        // A q entry whose information is this small relative to its cancellation-free reference is numerically zero
        constexpr double kCancellationFloor = 1e-20;
    }

    double friis_amplitude(double fc, double distance)
    {
        return kSpeedOfLight / (4.0 * kPi * fc * distance);
    }

    NoiseModel make_noise_model(double total_energy, size_t n_tx, double a1, double noise_figure_db)
    {
        if (!(total_energy > 0.0) || n_tx == 0 || !(a1 > 0.0))
            throw std::invalid_argument("noise model: energy, N_tx and a_1 must be positive");
        NoiseModel nm;
        nm.n0 = kBoltzmann * kNoiseTemperature * std::pow(10.0, noise_figure_db / 10.0);
        nm.energy_per_antenna = total_energy / double(n_tx);
        nm.nu = nm.energy_per_antenna / nm.n0;
        nm.a1 = a1;
        nm.snr1 = a1 * a1 * nm.nu;
        nm.snr_total = double(n_tx) * nm.snr1;
        return nm;
    }

    NoiseModel noise_from_snr1(double snr1, size_t n_tx, double a1)
    {
        if (!(snr1 > 0.0) || n_tx == 0 || !(a1 > 0.0))
            throw std::invalid_argument("noise model: SNR_1, N_tx and a_1 must be positive");
        NoiseModel nm;
        nm.n0 = 1.0;
        nm.nu = snr1 / (a1 * a1);
        nm.energy_per_antenna = nm.nu;
        nm.a1 = a1;
        nm.snr1 = snr1;
        nm.snr_total = double(n_tx) * snr1;
        return nm;
    }

    std::vector<std::string> ParameterLayout::labels() const
    {
        std::vector<std::string> out = {"x", "y", "z", "theta_t", "phi_t"};
        out.resize(n_q);
        out.push_back("a1");
        for (size_t l = 1; l <= n_mpc; ++l)
        {
            out.push_back("alpha" + std::to_string(l + 1) + "_re");
            out.push_back("alpha" + std::to_string(l + 1) + "_im");
        }
        if (sync)
            out.push_back("eps");
        return out;
    }

    ParameterLayout ParameterLayout::make(const Scenario &s, const FimOptions &o)
    {
        ParameterLayout p;
        p.n_q = o.orientation_aware ? 3 : 5;
        p.n_mpc = s.paths.empty() ? 0 : s.paths.size() - 1;
        p.sync = o.sync;
        return p;
    }

    void FimBlocks::split()
    {
        const Eigen::Index nq = Eigen::Index(layout.n_q);
        const Eigen::Index nn = full.rows() - nq;
        A = full.topLeftCorner(nq, nq);
        C = full.topRightCorner(nq, nn);
        D = full.bottomRightCorner(nn, nn);
    }

    cd kernel_integral(const SpectrumSet &set, const EffectiveWeights &w, size_t i, size_t j, double dtau, KernelKind kind,
                       int order)
    {
        const auto &g = set.grid;
        cd acc = 0.0;
        for (size_t k = 0; k < g.size(); ++k)
        {
            const double f = g.freqs[k];
            double kern = 1.0;
            if (kind == KernelKind::chi)
                kern = std::pow(f + set.carrier, order);
            else if (kind == KernelKind::r_ddot)
                kern = f * f;
            const cd b = w.at(i, f) * std::conj(w.at(j, f));
            acc += g.weights[k] * kern * b * std::polar(1.0, -2.0 * kPi * f * dtau) * set.spectra[i][k] *
                   std::conj(set.spectra[j][k]);
        }
        return acc;
    }

    FimBlocks fim_data(const Scenario &s, const SpectrumSet &spectra, const WeightingScheme &scheme, const NoiseModel &noise,
                       const FimOptions &options)
    {
        // Amplitudes are expressed in units of sqrt(N_0): beams carry sqrt(nu) instead of sqrt(E)
        const SignalModel model = build_signal_model(s, spectra, scheme, noise.nu, true);
        const ParameterLayout layout = ParameterLayout::make(s, options);

        const auto &g = spectra.grid;
        const size_t n = g.size();
        const size_t np = layout.size();
        const size_t nq = layout.n_q;
        const double a1 = model.gain[0].real();
        const cd j1(0.0, 1.0);

        std::vector<double> sw(n);
        std::vector<cd> kf(n);   // -j 2 pi (f + fc)
        std::vector<double> f2(n); // (2 pi f)^2 w
        for (size_t k = 0; k < n; ++k)
        {
            sw[k] = std::sqrt(g.weights[k]);
            kf[k] = -j1 * 2.0 * kPi * (g.freqs[k] + model.fc);
            f2[k] = std::pow(2.0 * kPi * g.freqs[k], 2) * g.weights[k];
        }

        Eigen::MatrixXcd B(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(np));
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(Eigen::Index(np), Eigen::Index(np));
        Eigen::VectorXd scale = Eigen::VectorXd::Zero(Eigen::Index(nq));
        std::vector<cd> ph(n), u(n);
        double eps_mpc = 0.0;

        const auto &beam0 = model.beam[0];
        for (size_t m = 0; m < model.n_rx; ++m)
        {
            B.setZero();
            los_rx_phase(model, m, ph.data());
            for (size_t a = 0; a < nq; ++a)
            {
                const double coef = model.los.common_gradient[a] - model.los.rx_gradient[m][a];
                const auto &db = model.los_beam_derivative[a];
                const auto &dba = model.los_beam_derivative_abs[a];
                double ref = 0.0;
                for (size_t k = 0; k < n; ++k)
                {
                    B(Eigen::Index(k), Eigen::Index(a)) = sw[k] * a1 * kf[k] * ph[k] * (coef * beam0[k] + db[k]);
                    const double r = sw[k] * a1 * std::abs(kf[k]) * (std::abs(coef) * model.los_beam_abs[k] + dba[k]);
                    ref += r * r;
                }
                scale[Eigen::Index(a)] += 2.0 * ref;
            }
            for (size_t k = 0; k < n; ++k)
                B(Eigen::Index(k), Eigen::Index(layout.a1())) = sw[k] * ph[k] * beam0[k];
            for (size_t l = 1; l < model.n_paths(); ++l)
            {
                path_template(model, l, m, u.data());
                double e = 0.0;
                for (size_t k = 0; k < n; ++k)
                {
                    B(Eigen::Index(k), Eigen::Index(layout.alpha_re(l))) = sw[k] * u[k];
                    B(Eigen::Index(k), Eigen::Index(layout.alpha_im(l))) = j1 * sw[k] * u[k];
                    e += f2[k] * std::norm(u[k]);
                }
                eps_mpc += s.paths[l].variance * e;
            }
            if (layout.sync)
                for (size_t k = 0; k < n; ++k)
                    B(Eigen::Index(k), Eigen::Index(layout.eps())) = sw[k] * a1 * kf[k] * ph[k] * beam0[k];

            J.noalias() += (B.adjoint() * B).real();
        }
        J *= 2.0;
        if (layout.sync)
            J(Eigen::Index(layout.eps()), Eigen::Index(layout.eps())) += 2.0 * eps_mpc;

        FimBlocks fb;
        fb.layout = layout;
        fb.full = symmetrize(J);
        fb.labels = layout.labels();
        fb.q_scale = scale;
        fb.split();
        return fb;
    }

    Eigen::VectorXd fim_prior(const ParameterLayout &layout, const std::vector<double> &variances, double sigma_eps)
    {
        if (variances.size() != layout.n_mpc)
            throw std::invalid_argument("fim_prior: one variance per scattered path required");
        Eigen::VectorXd d = Eigen::VectorXd::Zero(Eigen::Index(layout.size()));
        for (size_t l = 1; l <= layout.n_mpc; ++l)
        {
            const double v = variances[l - 1];
            if (!(v > 0.0))
                throw std::invalid_argument("fim_prior: path variance must be positive");
            d[Eigen::Index(layout.alpha_re(l))] = 1.0 / v;
            d[Eigen::Index(layout.alpha_im(l))] = 1.0 / v;
        }
        if (layout.sync)
        {
            if (!(sigma_eps > 0.0))
                throw std::invalid_argument("fim_prior: sigma_eps must be positive when sync is estimated");
            d[Eigen::Index(layout.eps())] = 1.0 / (sigma_eps * sigma_eps);
        }
        return d;
    }

    FimBlocks bayesian_fim(const Scenario &s, const SpectrumSet &spectra, const WeightingScheme &scheme,
                           const NoiseModel &noise, const FimOptions &options)
    {
        FimBlocks fb = fim_data(s, spectra, scheme, noise, options);
        std::vector<double> variances;
        for (size_t l = 1; l < s.paths.size(); ++l)
            variances.push_back(s.paths[l].variance);
        fb.full.diagonal() += fim_prior(fb.layout, variances, s.sync_error_std);
        fb.split();
        return fb;
    }

    Eigen::MatrixXd efim_multipath(const FimBlocks &blocks)
    {
        if (blocks.D.rows() == 0)
            return blocks.A;
        // Nuisance entries differ by many orders of magnitude (a_1 versus epsilon), so the cutoff of the
        // pseudo-inverse is applied to the equilibrated block
        const Eigen::Index n = blocks.D.rows();
        Eigen::VectorXd sc(n);
        for (Eigen::Index k = 0; k < n; ++k)
            sc[k] = blocks.D(k, k) > 0.0 ? 1.0 / std::sqrt(blocks.D(k, k)) : 1.0;
        const Eigen::MatrixXd d_pinv = sc.asDiagonal() * symmetric_pinv(sc.asDiagonal() * blocks.D * sc.asDiagonal()) *
                                       sc.asDiagonal();
        return symmetrize(blocks.A - blocks.C * d_pinv * blocks.C.transpose());
    }

    CrbResult crb_from_fim(const FimBlocks &blocks, double max_condition)
    {
        CrbResult r;
        const Eigen::MatrixXd efim = efim_multipath(blocks);
        const Eigen::Index nq = efim.rows();
        r.peb = std::numeric_limits<double>::quiet_NaN();
        r.oeb = std::numeric_limits<double>::quiet_NaN();

        bool zero_entry = false;
        for (Eigen::Index a = 0; a < nq; ++a)
        {
            const double ref = blocks.q_scale.size() == nq ? blocks.q_scale[a] : 0.0;
            if (!(efim(a, a) > kCancellationFloor * ref))
                zero_entry = true;
        }
        r.condition_number = zero_entry ? std::numeric_limits<double>::infinity() : equilibrated_condition(efim);
        r.identifiable = r.condition_number <= max_condition;
        if (!r.identifiable)
            return r;

        Eigen::VectorXd sc(nq);
        for (Eigen::Index a = 0; a < nq; ++a)
            sc[a] = 1.0 / std::sqrt(efim(a, a));
        const Eigen::MatrixXd e = sc.asDiagonal() * efim * sc.asDiagonal();
        r.crb_q = symmetrize(sc.asDiagonal() * e.ldlt().solve(Eigen::MatrixXd::Identity(nq, nq)) * sc.asDiagonal());
        r.peb = std::sqrt(r.crb_q.topLeftCorner(3, 3).trace());
        if (nq == 5)
            r.oeb = std::sqrt(r.crb_q(3, 3) + r.crb_q(4, 4)) * 180.0 / kPi;
        return r;
    }
}
