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

#ifndef MASSLOC_LINALG_HPP
#define MASSLOC_LINALG_HPP

#include <Eigen/Dense>

namespace massloc
{
    // Pseudo-inverse of a real symmetric matrix; eigenvalues below rel_cutoff * max|lambda| are dropped
    Eigen::MatrixXd symmetric_pinv(const Eigen::MatrixXd &m, double rel_cutoff = 1e-12);

    // Condition number of D^-1/2 M D^-1/2 with D = diag(M); infinite when a diagonal entry is not positive
    double equilibrated_condition(const Eigen::MatrixXd &m);

    // Symmetric part (M + M^T) / 2
    Eigen::MatrixXd symmetrize(const Eigen::MatrixXd &m);
}

#endif
