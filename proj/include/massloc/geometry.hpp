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

#ifndef MASSLOC_GEOMETRY_HPP
#define MASSLOC_GEOMETRY_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace massloc
{
    constexpr double kSpeedOfLight = 299792458.0; // [m/s], exact
    constexpr double kPi = 3.14159265358979323846;

    using Vec3 = Eigen::Vector3d;
    using Mat3 = Eigen::Matrix3d;
    using Vec5 = Eigen::Matrix<double, 5, 1>;

    // Thrown when the spherical parametrization of the line of sight is singular (elevation 0 or pi)
    struct GeometryError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    // Array orientation: theta rotates about x (clockwise), phi rotates about z (counter-clockwise)
    struct Orientation
    {
        double theta = 0.0; // [rad], in [0, pi)
        double phi = 0.0;   // [rad], in [0, 2 pi)
    };

    // Spherical direction, elevation measured from +z
    struct Angles
    {
        double elevation = 0.0; // [rad], in [0, pi)
        double azimuth = 0.0;   // [rad], in [0, 2 pi)
    };

    enum class ArrayKind
    {
        planar_square,
        explicit_offsets
    };

    struct ArrayGeometry
    {
        std::vector<Vec3> element_offsets; // Positions relative to the centroid before rotation [m]
        Vec3 centroid = Vec3::Zero();      // [m]
        Orientation orientation;
        ArrayKind kind = ArrayKind::explicit_offsets;
        double d_ant = 0.0; // Element spacing for planar_square [m]

        size_t size() const { return element_offsets.size(); }

        // Square grid in the local XZ plane, row-major over (m_x, m_z); throws if n is not a perfect square
        static ArrayGeometry planar_square(size_t n, double d_ant, const Vec3 &centroid = Vec3::Zero(),
                                           const Orientation &orientation = {});

        // Arbitrary element layout; offsets are re-centred so that their mean is zero
        static ArrayGeometry from_offsets(std::vector<Vec3> offsets, const Vec3 &centroid = Vec3::Zero(),
                                          const Orientation &orientation = {});

        double diameter() const; // Largest distance between two elements [m]
    };

    // One propagation path; the first entry of a path list is the line of sight
    struct MultipathComponent
    {
        double delay_bias = 0.0; // Excess delay over the direct path [s]
        Angles tx_angles;        // Tx-side direction (ignored for the line of sight)
        Angles rx_angles;        // Rx-side direction (ignored for the line of sight)
        double variance = 0.0;   // Prior variance of the complex gain, paths after the first
        double amplitude = 0.0;  // Real amplitude a_1 of the line of sight
        double gain_re = 0.0;    // Realized complex gain of a scattered path
        double gain_im = 0.0;
    };

    struct Scenario
    {
        ArrayGeometry tx;
        ArrayGeometry rx;
        std::vector<MultipathComponent> paths; // Non-empty, line of sight first
        Angles steering;                       // Beam pointing direction theta_0
        double sync_error_std = 0.0;           // [s]

        // Validates path list and far-field margin; throws std::invalid_argument
        void validate(double far_field_factor = 1.0) const;
    };

    // R_z(phi) * R_x(theta)
    Mat3 rotation_matrix(const Orientation &o);
    Mat3 rotation_matrix_dtheta(const Orientation &o);
    Mat3 rotation_matrix_dphi(const Orientation &o);

    // d(theta, phi) = [sin(el) cos(az), sin(el) sin(az), cos(el)]
    Vec3 direction_cosine(const Angles &a);
    Vec3 direction_cosine_delevation(const Angles &a);
    Vec3 direction_cosine_dazimuth(const Angles &a);

    // Angles of a non-zero vector, azimuth wrapped to [0, 2 pi)
    Angles angles_of(const Vec3 &v);

    // Element offsets after rotation (world frame, relative to the centroid)
    std::vector<Vec3> rotated_offsets(const ArrayGeometry &g);

    // Centroid plus rotated offsets
    std::vector<Vec3> antenna_positions(const ArrayGeometry &g);

    // (1/c) d(a) . offset
    double inter_antenna_delay(const Vec3 &offset_world, const Angles &a);

    // Direction of the line of sight: unit vector from the Rx centroid to the Tx centroid
    Angles los_angles(const Scenario &s);

    // Centroid-to-centroid delay tau_1 = d / c
    double los_delay(const Scenario &s);

    // tau_iml = tau_l + tau_i^t(theta_l^t) - tau_m^r(theta_l^r), path index l is zero-based
    double path_delay(const Scenario &s, size_t i, size_t m, size_t l);

    // Per-scenario line-of-sight derivative data; the gradient of tau_im1 w.r.t. [x, y, z, theta^t, phi^t]
    // splits into a common part, a Tx-element part and an Rx-element part
    struct LosGeometry
    {
        double tau1 = 0.0;
        Angles angles;
        Vec3 direction;                // d(theta_1)
        Vec3 grad_tau1;                // grad_p tau_1 [s/m]
        Mat3 direction_jacobian;       // d d(theta_1) / d p, assembled from grad_p theta_1 and grad_p phi_1
        std::vector<Vec3> tx_offsets;  // Rotated Tx offsets
        std::vector<Vec3> rx_offsets;  // Rotated Rx offsets
        std::vector<Vec5> tx_gradient; // Tx-element part per element
        std::vector<Vec5> rx_gradient; // Rx-element part per element (subtracted)
        Vec5 common_gradient;

        Vec5 gradient(size_t i, size_t m) const { return common_gradient + tx_gradient[i] - rx_gradient[m]; }
    };

    // Throws GeometryError when the elevation of the line of sight is 0 or pi
    LosGeometry los_geometry(const Scenario &s);

    // Gradient of tau_im1 with respect to [x, y, z, theta^t, phi^t]
    Vec5 delay_gradients(const Scenario &s, size_t i, size_t m);

    // Orientation part of the gradient for a given incidence direction: (1/c) d(a) . d p_i / d[theta, phi]
    Eigen::Vector2d orientation_gradient(const Vec3 &offset_local, const Orientation &o, const Angles &a);
}

#endif
