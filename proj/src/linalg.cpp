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

#include "massloc/linalg.hpp"

#include <cmath>
#include <limits>

namespace massloc
{
    Eigen::MatrixXd symmetric_pinv(const Eigen::MatrixXd &m, double rel_cutoff)
    {
        if (m.size() == 0)
            return m;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(m));
        const Eigen::VectorXd &ev = es.eigenvalues();
        const double cut = rel_cutoff * ev.cwiseAbs().maxCoeff();
        Eigen::VectorXd inv(ev.size());
        for (Eigen::Index k = 0; k < ev.size(); ++k)
            inv[k] = std::abs(ev[k]) > cut ? 1.0 / ev[k] : 0.0;
        return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
    }

    double equilibrated_condition(const Eigen::MatrixXd &m)
    {
        const Eigen::Index n = m.rows();
        if (n == 0)
            return 1.0;
        Eigen::VectorXd s(n);
        for (Eigen::Index k = 0; k < n; ++k)
        {
            if (!(m(k, k) > 0.0))
                return std::numeric_limits<double>::infinity();
            s[k] = 1.0 / std::sqrt(m(k, k));
        }
        const Eigen::MatrixXd e = s.asDiagonal() * symmetrize(m) * s.asDiagonal();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(e, Eigen::EigenvaluesOnly);
        const double lo = es.eigenvalues().minCoeff();
        const double hi = es.eigenvalues().maxCoeff();
        if (!(lo > 0.0))
            return std::numeric_limits<double>::infinity();
        return hi / lo;
    }

    Eigen::MatrixXd symmetrize(const Eigen::MatrixXd &m)
    {
        return 0.5 * (m + m.transpose());
    }
}
