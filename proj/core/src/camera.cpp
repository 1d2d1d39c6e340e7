// Copyright Contributors to the splatbench Project
// SPDX-License-Identifier: Apache-2.0
#include "splatbench/camera.hpp"

#include <stdexcept>

namespace splat {

Scalar scene_extent(const std::vector<Camera>& cameras) {
    if (cameras.empty())
        throw std::invalid_argument("scene_extent: no cameras");
    Vec3 mean = Vec3::Zero();
    for (const Camera& c : cameras)
        mean += c.center();
    mean /= Scalar(cameras.size());
    Scalar extent = 0;
    for (const Camera& c : cameras)
        extent = std::max(extent, (c.center() - mean).norm());
    return extent;
}

} // namespace splat
