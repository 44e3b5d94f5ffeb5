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

#include "massloc/geometry.hpp"

#include <cmath>

using namespace massloc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    Scenario two_arrays(const Vec3 &p, const Orientation &tx_o, const Orientation &rx_o, size_t n_tx = 4, size_t n_rx = 9)
    {
        Scenario s;
        s.tx = ArrayGeometry::planar_square(n_tx, 2.5e-3, p, tx_o);
        s.rx = ArrayGeometry::planar_square(n_rx, 2.5e-3, Vec3::Zero(), rx_o);
        s.paths.resize(1);
        s.paths[0].amplitude = 1.0;
        s.steering = los_angles(s);
        return s;
    }

    // Far-field delay computed directly from element positions: projection of the element offsets on the LOS
    double far_field_delay(const Scenario &s, size_t i, size_t m)
    {
        const Vec3 pt = antenna_positions(s.tx)[i];
        const Vec3 pr = antenna_positions(s.rx)[m];
        const Vec3 u = (s.tx.centroid - s.rx.centroid).normalized();
        return ((s.tx.centroid - s.rx.centroid).norm() + u.dot(pt - s.tx.centroid) - u.dot(pr - s.rx.centroid)) /
               kSpeedOfLight;
    }
}

TEST_CASE("rotation matrices are orthonormal with unit determinant", "[geometry]")
{
    for (double t : {0.0, 0.3, 1.2, 2.9})
        for (double p : {0.0, 0.7, 3.5, 6.0})
        {
            const Mat3 r = rotation_matrix({t, p});
            CHECK((r.transpose() * r - Mat3::Identity()).norm() < 1e-14);
            CHECK_THAT(r.determinant(), WithinAbs(1.0, 1e-14));
        }
}

TEST_CASE("rotation derivatives match finite differences", "[geometry]")
{
    const Orientation o{0.4, 1.1};
    const double h = 1e-6;
    const Mat3 dt = (rotation_matrix({o.theta + h, o.phi}) - rotation_matrix({o.theta - h, o.phi})) / (2 * h);
    const Mat3 dp = (rotation_matrix({o.theta, o.phi + h}) - rotation_matrix({o.theta, o.phi - h})) / (2 * h);
    CHECK((dt - rotation_matrix_dtheta(o)).norm() < 1e-9);
    CHECK((dp - rotation_matrix_dphi(o)).norm() < 1e-9);
}

TEST_CASE("direction cosines and angles round-trip", "[geometry]")
{
    const Angles a{1.0, 4.0};
    const Vec3 d = direction_cosine(a);
    CHECK_THAT(d.norm(), WithinAbs(1.0, 1e-15));
    const Angles b = angles_of(3.0 * d);
    CHECK_THAT(b.elevation, WithinAbs(a.elevation, 1e-13));
    CHECK_THAT(b.azimuth, WithinAbs(a.azimuth, 1e-13));
}

TEST_CASE("planar arrays at zero orientation reduce every delay to the centroid delay", "[geometry]")
{
    const Scenario s = two_arrays(Vec3(0.0, 5.0, 0.0), {}, {}, 16, 25);
    const double tau1 = los_delay(s);
    CHECK_THAT(tau1, WithinRel(5.0 / kSpeedOfLight, 1e-15));
    for (size_t i = 0; i < s.tx.size(); ++i)
        for (size_t m = 0; m < s.rx.size(); ++m)
            CHECK(std::abs(path_delay(s, i, m, 0) - tau1) <= 1e-15 * tau1);
}

TEST_CASE("line-of-sight delays match the projected element geometry", "[geometry]")
{
    const Scenario s = two_arrays(Vec3(1.3, 4.1, -0.7), {0.3, 0.5}, {1.0, 2.0});
    for (size_t i = 0; i < s.tx.size(); ++i)
        for (size_t m = 0; m < s.rx.size(); ++m)
            CHECK_THAT(path_delay(s, i, m, 0), WithinRel(far_field_delay(s, i, m), 1e-12));
}

TEST_CASE("far-field delay is close to the exact Euclidean element distance", "[geometry]")
{
    const Scenario s = two_arrays(Vec3(1.3, 4.1, -0.7), {0.3, 0.5}, {1.0, 2.0});
    const auto pt = antenna_positions(s.tx);
    const auto pr = antenna_positions(s.rx);
    const double aperture = std::max(s.tx.diameter(), s.rx.diameter());
    const double d = s.tx.centroid.norm();
    for (size_t i = 0; i < s.tx.size(); ++i)
        for (size_t m = 0; m < s.rx.size(); ++m)
        {
            const double exact = (pt[i] - pr[m]).norm() / kSpeedOfLight;
            CHECK(std::abs(path_delay(s, i, m, 0) - exact) < aperture * aperture / d / kSpeedOfLight);
        }
}

TEST_CASE("delay gradients match central finite differences", "[geometry]")
{
    const Vec3 p(1.3, 4.1, -0.7);
    const Orientation o{0.3, 0.5};
    const Orientation rx_o{1.0, 2.0};
    const Scenario s = two_arrays(p, o, rx_o);
    const double h = 1e-6;
    for (size_t i = 0; i < s.tx.size(); ++i)
        for (size_t m = 0; m < s.rx.size(); ++m)
        {
            const Vec5 g = delay_gradients(s, i, m);
            Vec5 fd;
            for (int a = 0; a < 3; ++a)
            {
                Vec3 dp = Vec3::Zero();
                dp[a] = h;
                fd[a] = (far_field_delay(two_arrays(p + dp, o, rx_o), i, m) -
                         far_field_delay(two_arrays(p - dp, o, rx_o), i, m)) /
                        (2 * h);
            }
            fd[3] = (far_field_delay(two_arrays(p, {o.theta + h, o.phi}, rx_o), i, m) -
                     far_field_delay(two_arrays(p, {o.theta - h, o.phi}, rx_o), i, m)) /
                    (2 * h);
            fd[4] = (far_field_delay(two_arrays(p, {o.theta, o.phi + h}, rx_o), i, m) -
                     far_field_delay(two_arrays(p, {o.theta, o.phi - h}, rx_o), i, m)) /
                    (2 * h);
            CHECK((g - fd).norm() <= 1e-6 * fd.norm());
        }
}

TEST_CASE("planar orientation gradients equal (d/c) times the element indices", "[geometry]")
{
    const double d_ant = 2.5e-3;
    const ArrayGeometry tx = ArrayGeometry::planar_square(9, d_ant);
    const Angles a{0.5 * kPi, -0.5 * kPi};
    for (const Vec3 &off : tx.element_offsets)
    {
        const Eigen::Vector2d g = orientation_gradient(off, {}, a);
        CHECK_THAT(g[0], WithinAbs(-off.z() / kSpeedOfLight, 1e-20));
        CHECK_THAT(g[1], WithinAbs(-off.x() / kSpeedOfLight, 1e-20));
    }
}

TEST_CASE("line of sight along z is rejected", "[geometry]")
{
    const Scenario s = two_arrays(Vec3(0.0, 0.0, 5.0), {}, {});
    CHECK_THROWS_AS(los_geometry(s), GeometryError);
}

TEST_CASE("planar_square rejects non-square sizes", "[geometry]")
{
    CHECK_THROWS(ArrayGeometry::planar_square(10, 1e-3));
    CHECK(ArrayGeometry::planar_square(16, 1e-3).size() == 16);
    CHECK_THAT(ArrayGeometry::planar_square(16, 1e-3).diameter(), WithinRel(3e-3 * std::sqrt(2.0), 1e-12));
}
