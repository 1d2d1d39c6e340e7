// Copyright Contributors to the splatbench Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "splatbench/types.hpp"

#include <vector>

namespace splat {

// Colored point set. Colors are RGB in [0, 1].
struct PointCloud {
    std::vector<Vec3> positions;
    std::vector<Vec3> colors;

    std::size_t size() const { return positions.size(); }

    void push_back(const Vec3& p, const Vec3& c) {
        positions.push_back(p);
        colors.push_back(c);
    }
};

} // namespace splat
