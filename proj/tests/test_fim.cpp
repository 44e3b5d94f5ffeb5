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

#include "massloc/fim.hpp"
#include "massloc/linalg.hpp"
#include "massloc/montecarlo.hpp"

#include <cmath>

using namespace massloc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    ExperimentConfig small_config()
    {
        ExperimentConfig c;
        c.n_freq = 256;
        c.tx_position = Vec3(1.0, 4.0, 0.5);
        c.tx_orientation = {0.3, 0.5};
        c.random_rx_orientation = false;
        c.rx_orientation = {0.8, 1.7};
        c.n_cycles = 1;
        return c;
    }

    // J_qq reassembled from spectral kernels:
    // 2 nu a1^2 (2 pi)^2 sum_m sum_ij dtau_im dtau_jm^T Re{exp(-j 2 pi fc D) K_ij(D)}, D = tau_im - tau_jm
    Eigen::MatrixXd kernel_jqq(const Scenario &s, const SpectrumSet &sp, const WeightingScheme &scheme, double nu,
                               size_t nq)
    {
        const auto w = effective_weights(scheme, s.tx, sp.carrier);
        const double a1 = s.paths[0].amplitude;
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(Eigen::Index(nq), Eigen::Index(nq));
        for (size_t m = 0; m < s.rx.size(); ++m)
            for (size_t i = 0; i < s.tx.size(); ++i)
                for (size_t j = 0; j < s.tx.size(); ++j)
                {
                    const double dt = path_delay(s, i, m, 0) - path_delay(s, j, m, 0);
                    const cd k = kernel_integral(sp, w, i, j, dt, KernelKind::chi, 2);
                    const double re = (std::polar(1.0, -2.0 * kPi * sp.carrier * dt) * k).real();
                    const Vec5 gi = delay_gradients(s, i, m);
                    const Vec5 gj = delay_gradients(s, j, m);
                    J += re * gi.head(Eigen::Index(nq)) * gj.head(Eigen::Index(nq)).transpose();
                }
        return 2.0 * nu * a1 * a1 * 4.0 * kPi * kPi * J;
    }

    double max_rel(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b)
    {
        double r = 0.0;
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            for (Eigen::Index j = 0; j < a.cols(); ++j)
                r = std::max(r, std::abs(a(i, j) - b(i, j)) / std::sqrt(std::abs(b(i, i) * b(j, j))));
        return r;
    }
}

TEST_CASE("link budget noise model", "[fim]")
{
    const double a1 = friis_amplitude(60e9, 5.0);
    CHECK_THAT(a1, WithinRel(kSpeedOfLight / (4.0 * kPi * 60e9 * 5.0), 1e-15));
    const NoiseModel nm = make_noise_model(16e-12, 16, a1, 4.0);
    CHECK_THAT(nm.n0, WithinRel(1.380649e-23 * 290.0 * std::pow(10.0, 0.4), 1e-14));
    CHECK_THAT(nm.energy_per_antenna, WithinRel(1e-12, 1e-14));
    CHECK_THAT(nm.snr1, WithinRel(a1 * a1 * 1e-12 / nm.n0, 1e-14));
    CHECK_THAT(nm.snr_total, WithinRel(16.0 * nm.snr1, 1e-14));
    const NoiseModel ns = noise_from_snr1(3.0, 4, a1);
    CHECK_THAT(ns.nu * a1 * a1, WithinRel(3.0, 1e-14));
}

TEST_CASE("parameter layout orders q, a1, scattered gains, sync", "[fim]")
{
    ParameterLayout p{5, 2, true};
    CHECK(p.size() == 11);
    CHECK(p.a1() == 5);
    CHECK(p.alpha_re(1) == 6);
    CHECK(p.alpha_im(2) == 9);
    CHECK(p.eps() == 10);
    const auto labels = p.labels();
    CHECK(labels.front() == "x");
    CHECK(labels[6] == "alpha2_re");
    CHECK(labels.back() == "eps");
}

TEST_CASE("position/orientation block equals the kernel reassembly", "[fim]")
{
    for (auto kind : {SchemeKind::mimo, SchemeKind::timed, SchemeKind::phased, SchemeKind::random})
    {
        ExperimentConfig cfg = small_config();
        cfg.quantization = true;
        const SpectrumSet sp = make_spectra(cfg, 4, kind);
        const CycleSetup c = make_cycle(cfg, 4, 4, kind, 0);
        const NoiseModel nm = make_cell_noise(cfg, 4);
        const FimBlocks fb = fim_data(c.scenario, sp, c.scheme, nm, {false, false});
        const Eigen::MatrixXd ref = kernel_jqq(c.scenario, sp, c.scheme, nm.nu, 5);
        INFO(to_string(kind));
        CHECK(max_rel(fb.A, ref) < 1e-9);
    }
}

TEST_CASE("amplitude information equals the received beam energy", "[fim]")
{
    const ExperimentConfig cfg = small_config();
    const SpectrumSet sp = make_spectra(cfg, 4, SchemeKind::timed);
    const CycleSetup c = make_cycle(cfg, 4, 9, SchemeKind::timed, 0);
    const NoiseModel nm = make_cell_noise(cfg, 4);
    const FimBlocks fb = fim_data(c.scenario, sp, c.scheme, nm, {false, false});
    const auto w = effective_weights(c.scheme, c.scenario.tx, sp.carrier);
    double e = 0.0;
    for (size_t m = 0; m < 9; ++m)
        for (size_t k = 0; k < sp.grid.size(); ++k)
        {
            cd x = 0.0;
            for (size_t i = 0; i < 4; ++i)
                x += w.at(i, sp.grid.freqs[k]) * sp.spectra[i][k] *
                     std::polar(1.0, -2.0 * kPi * (sp.grid.freqs[k] + sp.carrier) * path_delay(c.scenario, i, m, 0));
            e += sp.grid.weights[k] * std::norm(x);
        }
    const Eigen::Index a = Eigen::Index(fb.layout.a1());
    CHECK_THAT(fb.full(a, a), WithinRel(2.0 * nm.nu * e, 1e-10));
}

TEST_CASE("Bayesian FIM adds the prior diagonal", "[fim]")
{
    ExperimentConfig cfg = small_config();
    cfg.n_paths = 3;
    cfg.sync = true;
    const SpectrumSet sp = make_spectra(cfg, 4, SchemeKind::mimo);
    const CycleSetup c = make_cycle(cfg, 4, 4, SchemeKind::mimo, 0);
    const NoiseModel nm = make_cell_noise(cfg, 4);
    const FimBlocks data = fim_data(c.scenario, sp, c.scheme, nm, {false, true});
    const FimBlocks bay = bayesian_fim(c.scenario, sp, c.scheme, nm, {false, true});
    REQUIRE(bay.layout.size() == 5 + 1 + 4 + 1);
    const Eigen::MatrixXd diff = bay.full - data.full;
    for (Eigen::Index i = 0; i < diff.rows(); ++i)
        for (Eigen::Index j = 0; j < diff.cols(); ++j)
            if (i != j)
                CHECK(diff(i, j) == 0.0);
    const auto &p = c.scenario.paths;
    CHECK_THAT(diff(6, 6), WithinRel(1.0 / p[1].variance, 1e-9));
    CHECK_THAT(diff(9, 9), WithinRel(1.0 / p[2].variance, 1e-9));
    CHECK_THAT(diff(10, 10), WithinRel(1.0 / (cfg.sigma_eps * cfg.sigma_eps), 1e-9));
    CHECK((bay.full - bay.full.transpose()).norm() == 0.0);
}

TEST_CASE("CRB equals the q block of the inverse full FIM", "[fim]")
{
    ExperimentConfig cfg = small_config();
    cfg.n_paths = 3;
    cfg.sync = true;
    const SpectrumSet sp = make_spectra(cfg, 4, SchemeKind::mimo);
    const CycleSetup c = make_cycle(cfg, 4, 9, SchemeKind::mimo, 0);
    const NoiseModel nm = make_cell_noise(cfg, 4);
    const FimBlocks fb = bayesian_fim(c.scenario, sp, c.scheme, nm, {false, true});
    const CrbResult r = crb_from_fim(fb);
    REQUIRE(r.identifiable);
    // Equilibrate before the dense inverse so that entries of very different scale are well conditioned
    const Eigen::VectorXd s = fb.full.diagonal().cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd inv = s.asDiagonal() * (s.asDiagonal() * fb.full * s.asDiagonal()).inverse() * s.asDiagonal();
    CHECK(max_rel(r.crb_q, inv.topLeftCorner(5, 5)) < 1e-7);
    CHECK_THAT(r.peb, WithinRel(std::sqrt(inv.topLeftCorner(3, 3).trace()), 1e-7));
    CHECK_THAT(r.oeb, WithinRel(std::sqrt(inv(3, 3) + inv(4, 4)) * 180.0 / kPi, 1e-7));
}

TEST_CASE("scattered paths never add position information", "[fim]")
{
    ExperimentConfig cfg = small_config();
    cfg.n_paths = 4;
    const SpectrumSet sp = make_spectra(cfg, 4, SchemeKind::timed);
    const CycleSetup c = make_cycle(cfg, 4, 9, SchemeKind::timed, 0);
    const NoiseModel nm = make_cell_noise(cfg, 4);
    const FimBlocks fb = bayesian_fim(c.scenario, sp, c.scheme, nm, {true, false});
    const Eigen::MatrixXd efim = efim_multipath(fb);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fb.A - efim);
    CHECK(es.eigenvalues().minCoeff() >= -1e-9 * es.eigenvalues().cwiseAbs().maxCoeff());
}

TEST_CASE("broadside beamforming without orientation knowledge is unidentifiable", "[fim]")
{
    ExperimentConfig cfg;
    cfg.n_freq = 256;
    cfg.random_rx_orientation = false;
    for (auto kind : {SchemeKind::timed, SchemeKind::phased})
    {
        const SpectrumSet sp = make_spectra(cfg, 9, kind);
        const CycleSetup c = make_cycle(cfg, 9, 9, kind, 0);
        const NoiseModel nm = make_cell_noise(cfg, 9);
        INFO(to_string(kind));
        CHECK_FALSE(crb_from_fim(bayesian_fim(c.scenario, sp, c.scheme, nm, {false, false})).identifiable);
        CHECK(crb_from_fim(bayesian_fim(c.scenario, sp, c.scheme, nm, {true, false})).identifiable);
    }
    const SpectrumSet sp = make_spectra(cfg, 9, SchemeKind::mimo);
    const CycleSetup c = make_cycle(cfg, 9, 9, SchemeKind::mimo, 0);
    CHECK(crb_from_fim(bayesian_fim(c.scenario, sp, c.scheme, make_cell_noise(cfg, 9), {false, false})).identifiable);
}

TEST_CASE("pseudo-inverse and equilibrated condition number", "[fim]")
{
    Eigen::MatrixXd m(3, 3);
    m << 4, 1, 0, 1, 3, 0, 0, 0, 0;
    const Eigen::MatrixXd p = symmetric_pinv(m);
    CHECK((m * p * m - m).norm() < 1e-12);
    CHECK(std::isinf(equilibrated_condition(m)));
    Eigen::MatrixXd d = Eigen::Vector3d(1e10, 1.0, 1e-10).asDiagonal();
    CHECK_THAT(equilibrated_condition(d), WithinRel(1.0, 1e-12));
}
