// Copyright Contributors to the splatbench Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "splatbench/types.hpp"

#include <string>
#include <vector>

namespace splat {

// Pinhole camera. R, t map world points into the camera frame (p_cam = R p + t),
// camera looks down +z, pixel (u, v) = (fx x/z + cx, fy y/z + cy).
struct Camera {
    std::string id; // stable identifier, unique within a scene
    int width = 0;
    int height = 0;
    Scalar fx = 0, fy = 0, cx = 0, cy = 0;
    Mat3 R = Mat3::Identity();
    Vec3 t = Vec3::Zero();

    Vec3 center() const { return -R.transpose() * t; }
    Vec3 world_to_camera(const Vec3& p) const { return R * p + t; }

    // Projects a world point; z is the camera-space depth (may be <= 0).
    Vec3 project(const Vec3& p) const {
        Vec3 q = world_to_camera(p);
        return Vec3(fx * q.x() / q.z() + cx, fy * q.y() / q.z() + cy, q.z());
    }

    Scalar tan_half_fov_x() const { return Scalar(width) / (2 * fx); }
    Scalar tan_half_fov_y() const { return Scalar(height) / (2 * fy); }

    Mat4 world_to_camera_matrix() const {
        Mat4 m = Mat4::Identity();
        m.template block<3, 3>(0, 0) = R;
        m.template block<3, 1>(0, 3) = t;
        return m;
    }
};

// Largest camera-center distance from the mean of all centers. Defines the
// scene scale used for learning rates, noise, and size thresholds. Zero for a
// single camera; empty input is invalid.
Scalar scene_extent(const std::vector<Camera>& cameras);

} // namespace splat
