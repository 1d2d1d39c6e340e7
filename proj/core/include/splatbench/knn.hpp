// Copyright Contributors to the splatbench Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "splatbench/types.hpp"

#include <vector>

namespace splat {

// Static 3D kd-tree over a point set. Indices refer to the input vector.
class KdTree {
public:
    explicit KdTree(const std::vector<Vec3>& points);

    // Indices of the k nearest points to `query`, nearest first. `skip` is
    // excluded (pass the query's own index for self-exclusion, size_t(-1) for none).
    std::vector<std::size_t> nearest(const Vec3& query, std::size_t k,
                                     std::size_t skip = std::size_t(-1)) const;

private:
    struct Node {
        std::size_t point = 0;
        int axis = 0;
        int left = -1;
        int right = -1;
    };
    int build(std::vector<std::size_t>& idx, std::size_t lo, std::size_t hi, int depth);
    const std::vector<Vec3>& pts_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

// Per-point mean Euclidean distance to the k nearest other points, floored at
// `floor`. Points with fewer than k neighbors average over what exists; an
// isolated point (n == 1) gets the floor.
std::vector<Scalar> knn_mean_distance(const std::vector<Vec3>& points, int k = 4,
                                      Scalar floor = Scalar(1e-7));

} // namespace splat
