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

#ifndef MASSLOC_WEIGHTING_HPP
#define MASSLOC_WEIGHTING_HPP

#include "massloc/geometry.hpp"
#include "massloc/rng.hpp"

#include <complex>
#include <string>
#include <vector>

namespace massloc
{
    using cd = std::complex<double>;

    enum class SchemeKind
    {
        timed,
        phased,
        mimo,
        random
    };

    std::string to_string(SchemeKind k);
    SchemeKind scheme_from_string(const std::string &name); // Throws std::invalid_argument

    struct WeightingScheme
    {
        SchemeKind kind = SchemeKind::mimo;
        Angles steering;                   // theta_0
        std::vector<double> phase_errors;  // delta_i [rad], empty means none
        std::vector<double> tdl_errors;    // Delta tau_i [s], timed only, empty means none
        std::vector<double> random_phases; // upsilon_i [rad], random only
        double sync_error = 0.0;           // epsilon^s [s]
    };

    // Every weight, ideal or erroneous, has the form exp(j (2 pi f delay_i + phase_i)) at baseband frequency f
    struct EffectiveWeights
    {
        std::vector<double> delay; // [s]
        std::vector<double> phase; // [rad]

        size_t size() const { return delay.size(); }
        cd at(size_t i, double f) const;
    };

    // tau_i^t(theta_0) of every Tx element
    std::vector<double> steering_delays(const WeightingScheme &scheme, const ArrayGeometry &tx);

    // Ideal weights at baseband frequency f
    std::vector<cd> ideal_weights(const WeightingScheme &scheme, const ArrayGeometry &tx, double f, double fc);

    // Diagonal non-idealities times the global synchronization phase
    struct ErrorMatrix
    {
        cd global = 1.0;
        std::vector<cd> diagonal;
    };

    ErrorMatrix error_matrix(const WeightingScheme &scheme, size_t n_tx, double f, double fc);

    // Product of ideal weights and error diagonal, without the synchronization phase
    EffectiveWeights effective_weights(const WeightingScheme &scheme, const ArrayGeometry &tx, double fc);

    struct ErrorConfig
    {
        bool quantization = false; // Phase errors delta_i ~ U(-pi/4, pi/4) and TDL errors ~ U(0, d_ant / c)
        double d_ant = 0.0;        // [m]
    };

    struct SampledErrors
    {
        std::vector<double> phase_errors;
        std::vector<double> tdl_errors;
        std::vector<double> random_phases;
    };

    // Draws all three vectors unconditionally so that the stream position does not depend on the flags
    SampledErrors sample_errors(Rng &rng, size_t n_tx, const ErrorConfig &config);

    // Builds the scheme for one realization
    WeightingScheme make_scheme(SchemeKind kind, const Angles &steering, const SampledErrors &errors, bool quantization,
                                double sync_error);
}

#endif
