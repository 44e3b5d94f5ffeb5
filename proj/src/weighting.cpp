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

#include "massloc/weighting.hpp"

#include <cmath>
#include <stdexcept>

namespace massloc
{
    std::string to_string(SchemeKind k)
    {
        switch (k)
        {
        case SchemeKind::timed:
            return "timed";
        case SchemeKind::phased:
            return "phased";
        case SchemeKind::mimo:
            return "mimo";
        case SchemeKind::random:
            return "random";
        }
        return "unknown";
    }

    SchemeKind scheme_from_string(const std::string &name)
    {
        if (name == "timed")
            return SchemeKind::timed;
        if (name == "phased")
            return SchemeKind::phased;
        if (name == "mimo")
            return SchemeKind::mimo;
        if (name == "random")
            return SchemeKind::random;
        throw std::invalid_argument("unknown scheme '" + name + "'");
    }

    cd EffectiveWeights::at(size_t i, double f) const
    {
        return std::polar(1.0, 2.0 * kPi * f * delay[i] + phase[i]);
    }

    std::vector<double> steering_delays(const WeightingScheme &scheme, const ArrayGeometry &tx)
    {
        const auto offsets = rotated_offsets(tx);
        std::vector<double> tau(offsets.size());
        for (size_t i = 0; i < offsets.size(); ++i)
            tau[i] = inter_antenna_delay(offsets[i], scheme.steering);
        return tau;
    }

    EffectiveWeights effective_weights(const WeightingScheme &scheme, const ArrayGeometry &tx, double fc)
    {
        const size_t n = tx.size();
        EffectiveWeights w;
        w.delay.assign(n, 0.0);
        w.phase.assign(n, 0.0);

        if (scheme.kind == SchemeKind::timed || scheme.kind == SchemeKind::phased)
        {
            const auto tau = steering_delays(scheme, tx);
            for (size_t i = 0; i < n; ++i)
            {
                w.phase[i] = 2.0 * kPi * fc * tau[i];
                if (scheme.kind == SchemeKind::timed)
                    w.delay[i] = tau[i];
            }
        }
        else if (scheme.kind == SchemeKind::random)
        {
            if (scheme.random_phases.size() != n)
                throw std::invalid_argument("random weighting: one phase per antenna required");
            for (size_t i = 0; i < n; ++i)
                w.phase[i] = scheme.random_phases[i];
        }

        if (!scheme.phase_errors.empty())
        {
            if (scheme.phase_errors.size() != n)
                throw std::invalid_argument("weighting: phase error count differs from N_tx");
            for (size_t i = 0; i < n; ++i)
                w.phase[i] += scheme.phase_errors[i];
        }
        if (!scheme.tdl_errors.empty())
        {
            if (scheme.tdl_errors.size() != n)
                throw std::invalid_argument("weighting: TDL error count differs from N_tx");
            for (size_t i = 0; i < n; ++i)
                w.delay[i] += scheme.tdl_errors[i];
        }
        return w;
    }

    std::vector<cd> ideal_weights(const WeightingScheme &scheme, const ArrayGeometry &tx, double f, double fc)
    {
        WeightingScheme ideal = scheme;
        ideal.phase_errors.clear();
        ideal.tdl_errors.clear();
        const auto w = effective_weights(ideal, tx, fc);
        std::vector<cd> out(w.size());
        for (size_t i = 0; i < w.size(); ++i)
            out[i] = w.at(i, f);
        return out;
    }

    ErrorMatrix error_matrix(const WeightingScheme &scheme, size_t n_tx, double f, double fc)
    {
        ErrorMatrix q;
        q.global = std::polar(1.0, -2.0 * kPi * (f + fc) * scheme.sync_error);
        q.diagonal.assign(n_tx, cd(1.0));
        if (scheme.kind == SchemeKind::mimo)
            return q;
        for (size_t i = 0; i < n_tx; ++i)
        {
            const double dtau = scheme.tdl_errors.empty() ? 0.0 : scheme.tdl_errors.at(i);
            const double delta = scheme.phase_errors.empty() ? 0.0 : scheme.phase_errors.at(i);
            q.diagonal[i] = std::polar(1.0, 2.0 * kPi * f * dtau + delta);
        }
        return q;
    }

    SampledErrors sample_errors(Rng &rng, size_t n_tx, const ErrorConfig &config)
    {
        SampledErrors e;
        e.phase_errors.resize(n_tx);
        e.tdl_errors.resize(n_tx);
        e.random_phases.resize(n_tx);
        const double tdl_max = config.d_ant / kSpeedOfLight;
        for (size_t i = 0; i < n_tx; ++i)
        {
            e.phase_errors[i] = rng.uniform(-0.25 * kPi, 0.25 * kPi);
            e.tdl_errors[i] = rng.uniform(0.0, tdl_max);
            e.random_phases[i] = rng.uniform(0.0, 2.0 * kPi);
        }
        return e;
    }

    WeightingScheme make_scheme(SchemeKind kind, const Angles &steering, const SampledErrors &errors, bool quantization,
                                double sync_error)
    {
        WeightingScheme s;
        s.kind = kind;
        s.steering = steering;
        s.sync_error = sync_error;
        if (kind == SchemeKind::random)
            s.random_phases = errors.random_phases;
        if (quantization && kind != SchemeKind::mimo)
        {
            s.phase_errors = errors.phase_errors;
            if (kind == SchemeKind::timed)
                s.tdl_errors = errors.tdl_errors;
        }
        return s;
    }
}
