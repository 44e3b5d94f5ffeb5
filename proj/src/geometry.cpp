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

#include "massloc/geometry.hpp"

#include <cmath>
#include <string>

namespace massloc
{
    ArrayGeometry ArrayGeometry::planar_square(size_t n, double d_ant, const Vec3 &centroid, const Orientation &orientation)
    {
        const size_t side = (size_t)std::llround(std::sqrt((double)n));
        if (n == 0 || side * side != n)
            throw std::invalid_argument("planar_square: element count " + std::to_string(n) + " is not a perfect square");
        if (!(d_ant > 0.0))
            throw std::invalid_argument("planar_square: element spacing must be positive");

        ArrayGeometry g;
        g.kind = ArrayKind::planar_square;
        g.d_ant = d_ant;
        g.centroid = centroid;
        g.orientation = orientation;
        g.element_offsets.reserve(n);
        const double half = 0.5 * double(side - 1);
        for (size_t ix = 0; ix < side; ++ix)
            for (size_t iz = 0; iz < side; ++iz)
                g.element_offsets.emplace_back((double(ix) - half) * d_ant, 0.0, (double(iz) - half) * d_ant);
        return g;
    }

    ArrayGeometry ArrayGeometry::from_offsets(std::vector<Vec3> offsets, const Vec3 &centroid, const Orientation &orientation)
    {
        if (offsets.empty())
            throw std::invalid_argument("from_offsets: empty element list");
        Vec3 mean = Vec3::Zero();
        for (const auto &o : offsets)
            mean += o;
        mean /= double(offsets.size());
        for (auto &o : offsets)
            o -= mean;

        ArrayGeometry g;
        g.kind = ArrayKind::explicit_offsets;
        g.element_offsets = std::move(offsets);
        g.centroid = centroid;
        g.orientation = orientation;
        return g;
    }

    double ArrayGeometry::diameter() const
    {
        double d = 0.0;
        for (size_t a = 0; a < element_offsets.size(); ++a)
            for (size_t b = a + 1; b < element_offsets.size(); ++b)
                d = std::max(d, (element_offsets[a] - element_offsets[b]).norm());
        return d;
    }

    void Scenario::validate(double far_field_factor) const
    {
        if (tx.size() == 0 || rx.size() == 0)
            throw std::invalid_argument("scenario: empty array");
        if (paths.empty())
            throw std::invalid_argument("scenario: path list must start with the line of sight");
        if (paths[0].delay_bias != 0.0)
            throw std::invalid_argument("scenario: line of sight must have zero delay bias");
        for (size_t l = 1; l < paths.size(); ++l)
        {
            if (paths[l].delay_bias < 0.0)
                throw std::invalid_argument("scenario: negative delay bias");
            if (!(paths[l].variance > 0.0))
                throw std::invalid_argument("scenario: scattered path variance must be positive");
        }
        const double d = (tx.centroid - rx.centroid).norm();
        const double D = std::max(tx.diameter(), rx.diameter());
        if (!(d > far_field_factor * D))
            throw std::invalid_argument("scenario: Tx-Rx distance does not exceed the array diameter");
    }

    Mat3 rotation_matrix(const Orientation &o)
    {
        const double ct = std::cos(o.theta), st = std::sin(o.theta);
        const double cp = std::cos(o.phi), sp = std::sin(o.phi);
        Mat3 rz, rx;
        rz << cp, -sp, 0.0, sp, cp, 0.0, 0.0, 0.0, 1.0;
        rx << 1.0, 0.0, 0.0, 0.0, ct, st, 0.0, -st, ct; // Clockwise about x
        return rz * rx;
    }

    Mat3 rotation_matrix_dtheta(const Orientation &o)
    {
        const double ct = std::cos(o.theta), st = std::sin(o.theta);
        const double cp = std::cos(o.phi), sp = std::sin(o.phi);
        Mat3 rz, drx;
        rz << cp, -sp, 0.0, sp, cp, 0.0, 0.0, 0.0, 1.0;
        drx << 0.0, 0.0, 0.0, 0.0, -st, ct, 0.0, -ct, -st;
        return rz * drx;
    }

    Mat3 rotation_matrix_dphi(const Orientation &o)
    {
        const double ct = std::cos(o.theta), st = std::sin(o.theta);
        const double cp = std::cos(o.phi), sp = std::sin(o.phi);
        Mat3 drz, rx;
        drz << -sp, -cp, 0.0, cp, -sp, 0.0, 0.0, 0.0, 0.0;
        rx << 1.0, 0.0, 0.0, 0.0, ct, st, 0.0, -st, ct;
        return drz * rx;
    }

    Vec3 direction_cosine(const Angles &a)
    {
        const double se = std::sin(a.elevation);
        return {se * std::cos(a.azimuth), se * std::sin(a.azimuth), std::cos(a.elevation)};
    }

    Vec3 direction_cosine_delevation(const Angles &a)
    {
        const double ce = std::cos(a.elevation);
        return {ce * std::cos(a.azimuth), ce * std::sin(a.azimuth), -std::sin(a.elevation)};
    }

    Vec3 direction_cosine_dazimuth(const Angles &a)
    {
        const double se = std::sin(a.elevation);
        return {-se * std::sin(a.azimuth), se * std::cos(a.azimuth), 0.0};
    }

    Angles angles_of(const Vec3 &v)
    {
        const double rho = std::hypot(v.x(), v.y());
        double az = std::atan2(v.y(), v.x());
        if (az < 0.0)
            az += 2.0 * kPi;
        return {std::atan2(rho, v.z()), az};
    }

    std::vector<Vec3> rotated_offsets(const ArrayGeometry &g)
    {
        const Mat3 R = rotation_matrix(g.orientation);
        std::vector<Vec3> out;
        out.reserve(g.size());
        for (const auto &o : g.element_offsets)
            out.push_back(R * o);
        return out;
    }

    std::vector<Vec3> antenna_positions(const ArrayGeometry &g)
    {
        auto out = rotated_offsets(g);
        for (auto &p : out)
            p += g.centroid;
        return out;
    }

    double inter_antenna_delay(const Vec3 &offset_world, const Angles &a)
    {
        return direction_cosine(a).dot(offset_world) / kSpeedOfLight;
    }

    Angles los_angles(const Scenario &s)
    {
        return angles_of(s.tx.centroid - s.rx.centroid);
    }

    double los_delay(const Scenario &s)
    {
        return (s.tx.centroid - s.rx.centroid).norm() / kSpeedOfLight;
    }

    double path_delay(const Scenario &s, size_t i, size_t m, size_t l)
    {
        if (i >= s.tx.size() || m >= s.rx.size() || l >= s.paths.size())
            throw std::out_of_range("path_delay: index out of range");

        const Vec3 pt = rotation_matrix(s.tx.orientation) * s.tx.element_offsets[i];
        const Vec3 pr = rotation_matrix(s.rx.orientation) * s.rx.element_offsets[m];
        const double tau_l = los_delay(s) + s.paths[l].delay_bias;
        Angles at = s.paths[l].tx_angles, ar = s.paths[l].rx_angles;
        if (l == 0)
            at = ar = los_angles(s);
        return tau_l + inter_antenna_delay(pt, at) - inter_antenna_delay(pr, ar);
    }

    LosGeometry los_geometry(const Scenario &s)
    {
        LosGeometry g;
        const Vec3 v = s.tx.centroid - s.rx.centroid;
        const double r = v.norm();
        const double rho = std::hypot(v.x(), v.y());
        if (!(r > 0.0))
            throw GeometryError("line of sight: coincident centroids");
        if (rho <= 1e-12 * r)
            throw GeometryError("line of sight: elevation is 0 or pi, spherical gradient undefined");

        g.tau1 = r / kSpeedOfLight;
        g.angles = angles_of(v);
        g.direction = direction_cosine(g.angles);
        g.grad_tau1 = v / (r * kSpeedOfLight);

        // grad_p theta_1 and grad_p phi_1
        const Vec3 grad_el(v.x() * v.z() / (r * r * rho), v.y() * v.z() / (r * r * rho), -rho / (r * r));
        const Vec3 grad_az(-v.y() / (rho * rho), v.x() / (rho * rho), 0.0);
        g.direction_jacobian = direction_cosine_delevation(g.angles) * grad_el.transpose() +
                               direction_cosine_dazimuth(g.angles) * grad_az.transpose();

        const Mat3 Rt = rotation_matrix(s.tx.orientation);
        const Mat3 dRt_dtheta = rotation_matrix_dtheta(s.tx.orientation);
        const Mat3 dRt_dphi = rotation_matrix_dphi(s.tx.orientation);
        const Mat3 Rr = rotation_matrix(s.rx.orientation);

        g.common_gradient.setZero();
        g.common_gradient.head<3>() = g.grad_tau1;

        const Mat3 JT = g.direction_jacobian.transpose() / kSpeedOfLight;
        g.tx_offsets.reserve(s.tx.size());
        g.tx_gradient.reserve(s.tx.size());
        for (const auto &o : s.tx.element_offsets)
        {
            const Vec3 p = Rt * o;
            Vec5 gi;
            gi.head<3>() = JT * p;
            gi(3) = g.direction.dot(dRt_dtheta * o) / kSpeedOfLight;
            gi(4) = g.direction.dot(dRt_dphi * o) / kSpeedOfLight;
            g.tx_offsets.push_back(p);
            g.tx_gradient.push_back(gi);
        }
        g.rx_offsets.reserve(s.rx.size());
        g.rx_gradient.reserve(s.rx.size());
        for (const auto &o : s.rx.element_offsets)
        {
            const Vec3 p = Rr * o;
            Vec5 gm = Vec5::Zero();
            gm.head<3>() = JT * p;
            g.rx_offsets.push_back(p);
            g.rx_gradient.push_back(gm);
        }
        return g;
    }

    Vec5 delay_gradients(const Scenario &s, size_t i, size_t m)
    {
        if (i >= s.tx.size() || m >= s.rx.size())
            throw std::out_of_range("delay_gradients: index out of range");
        return los_geometry(s).gradient(i, m);
    }

    Eigen::Vector2d orientation_gradient(const Vec3 &offset_local, const Orientation &o, const Angles &a)
    {
        const Vec3 d = direction_cosine(a);
        return {d.dot(rotation_matrix_dtheta(o) * offset_local) / kSpeedOfLight,
                d.dot(rotation_matrix_dphi(o) * offset_local) / kSpeedOfLight};
    }
}
