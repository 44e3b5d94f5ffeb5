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

#include "massloc/closedform.hpp"

#include "massloc/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace massloc
{
    namespace
    {
        constexpr double kInf = std::numeric_limits<double>::infinity();

        size_t side_of(size_t n)
        {
            const auto s = size_t(std::llround(std::sqrt(double(n))));
            if (s * s != n || n == 0)
                throw std::invalid_argument("planar array: element count must be a non-zero perfect square");
            return s;
        }

        void check(const PlanarConfig &cfg)
        {
            side_of(cfg.n_tx);
            side_of(cfg.n_rx);
            if (!(cfg.d_ant > 0.0) || !(cfg.y > 0.0) || !(cfg.snr1 > 0.0) || !(cfg.fc > 0.0))
                throw std::invalid_argument("planar config: d_ant, y, SNR_1 and fc must be positive");
        }
    }

    double crb0(const PlanarConfig &cfg, double bandwidth)
    {
        const double snr_t = double(cfg.n_tx) * cfg.snr1;
        return kSpeedOfLight * kSpeedOfLight / (8.0 * kPi * kPi * snr_t * (bandwidth * bandwidth + cfg.fc * cfg.fc));
    }

    std::vector<std::pair<double, double>> planar_indices(size_t n)
    {
        const size_t s = side_of(n);
        const double half = 0.5 * double(s - 1);
        std::vector<std::pair<double, double>> idx;
        idx.reserve(n);
        for (size_t ix = 0; ix < s; ++ix)
            for (size_t iz = 0; iz < s; ++iz)
                idx.emplace_back(double(ix) - half, double(iz) - half);
        return idx;
    }

    Eigen::MatrixXd g_matrix(const PlanarConfig &cfg, bool mimo, bool orientation_aware)
    {
        check(cfg);
        const auto ti = planar_indices(cfg.n_tx);
        const auto ri = planar_indices(cfg.n_rx);
        const double c = kSpeedOfLight;
        const double k = cfg.d_ant / (c * cfg.y);
        const int nq = orientation_aware ? 3 : 5;

        auto grad = [&](size_t i, size_t m) {
            Eigen::VectorXd g(nq);
            g[0] = k * (ti[i].first - ri[m].first);
            g[1] = 1.0 / c;
            g[2] = k * (ti[i].second - ri[m].second);
            if (!orientation_aware)
            {
                g[3] = cfg.d_ant / c * ti[i].second;
                g[4] = cfg.d_ant / c * ti[i].first;
            }
            return g;
        };

        Eigen::MatrixXd G = Eigen::MatrixXd::Zero(nq, nq);
        for (size_t m = 0; m < ri.size(); ++m)
        {
            if (mimo)
            {
                for (size_t i = 0; i < ti.size(); ++i)
                {
                    const Eigen::VectorXd g = grad(i, m);
                    G += g * g.transpose();
                }
            }
            else
            {
                Eigen::VectorXd s = Eigen::VectorXd::Zero(nq);
                for (size_t i = 0; i < ti.size(); ++i)
                    s += grad(i, m);
                G += s * s.transpose();
            }
        }
        return G;
    }

    ClosedFormCrb crb_mimo_planar(const PlanarConfig &cfg, bool orientation_aware)
    {
        check(cfg);
        const double c0 = crb0(cfg, cfg.beta_i);
        const double nt = double(cfg.n_tx), nr = double(cfg.n_rx);
        const double S = cfg.S(), y = cfg.y;

        ClosedFormCrb r;
        if (orientation_aware)
        {
            r.crb = Eigen::MatrixXd::Zero(3, 3);
            const bool xz = cfg.n_tx + cfg.n_rx > 2;
            r.crb(0, 0) = r.crb(2, 2) = xz ? c0 * 12.0 / (S * (nt + nr - 2.0)) : kInf;
            r.crb(1, 1) = c0 / nr;
            r.identifiable = {xz, true, xz};
            return r;
        }

        r.crb = Eigen::MatrixXd::Zero(5, 5);
        const bool xz = cfg.n_rx > 1;
        const bool ori = cfg.n_rx > 1 && cfg.n_tx > 1;
        r.crb(0, 0) = r.crb(2, 2) = xz ? c0 * 12.0 / (S * (nr - 1.0)) : kInf;
        r.crb(1, 1) = c0 / nr;
        r.crb(3, 3) = r.crb(4, 4) = ori ? c0 * 12.0 * (nt + nr - 2.0) / (cfg.area_rx() * (nt - 1.0) * (nr - 1.0)) : kInf;
        if (ori)
        {
            const double cross = c0 * 12.0 / (S * y * (1.0 - nr));
            r.crb(0, 4) = r.crb(4, 0) = cross;
            r.crb(2, 3) = r.crb(3, 2) = cross;
        }
        r.identifiable = {xz && ori, true, xz && ori, ori, ori};
        return r;
    }

    ClosedFormCrb crb_timed_planar(const PlanarConfig &cfg)
    {
        check(cfg);
        const double c0 = crb0(cfg, cfg.beta);
        const double nt = double(cfg.n_tx), nr = double(cfg.n_rx);
        ClosedFormCrb r;
        r.crb = Eigen::MatrixXd::Zero(3, 3);
        const bool xz = cfg.n_rx > 1;
        r.crb(0, 0) = r.crb(2, 2) = xz ? c0 * 12.0 / cfg.S() / (nt * (nr - 1.0)) : kInf;
        r.crb(1, 1) = c0 / (nt * nr);
        r.identifiable = {xz, true, xz};
        return r;
    }
}
