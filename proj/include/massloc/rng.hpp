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

#ifndef MASSLOC_RNG_HPP
#define MASSLOC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace massloc
{
    // SplitMix64 finalizer, used to derive independent stream seeds
    constexpr uint64_t mix64(uint64_t x)
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    // Seed of stream `stream` in cycle `cycle` under `master`
    constexpr uint64_t stream_seed(uint64_t master, uint64_t cycle, uint64_t stream = 0)
    {
        return mix64(mix64(mix64(master) ^ cycle) ^ (stream * 0x632be59bd9b4e019ULL));
    }

    // Portable random source: the engine output is mapped to doubles without std distributions,
    // whose algorithms are implementation-defined
    class Rng
    {
    public:
        explicit Rng(uint64_t seed) : engine_(seed) {}

        uint64_t next() { return engine_(); }

        // [0, 1)
        double uniform01() { return double(engine_() >> 11) * 0x1.0p-53; }

        // (0, 1]
        double uniform01_open() { return 1.0 - uniform01(); }

        double uniform(double a, double b) { return a + (b - a) * uniform01(); }

        double normal()
        {
            if (has_spare_)
            {
                has_spare_ = false;
                return spare_;
            }
            const double u1 = uniform01_open();
            const double u2 = uniform01();
            const double r = std::sqrt(-2.0 * std::log(u1));
            const double t = 6.283185307179586 * u2;
            spare_ = r * std::sin(t);
            has_spare_ = true;
            return r * std::cos(t);
        }

        double exponential(double rate) { return -std::log(uniform01_open()) / rate; }

    private:
        std::mt19937_64 engine_;
        double spare_ = 0.0;
        bool has_spare_ = false;
    };
}

#endif
