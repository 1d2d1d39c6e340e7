// Copyright Contributors to the splatbench Project
// SPDX-License-Identifier: Apache-2.0
#include "splatbench/knn.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace splat {

KdTree::KdTree(const std::vector<Vec3>& points) : pts_(points) {
    std::vector<std::size_t> idx(points.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    nodes_.reserve(points.size());
    if (!points.empty())
        root_ = build(idx, 0, points.size(), 0);
}

int KdTree::build(std::vector<std::size_t>& idx, std::size_t lo, std::size_t hi, int depth) {
    if (lo >= hi)
        return -1;
    int axis = depth % 3;
    std::size_t mid = (lo + hi) / 2;
    std::nth_element(idx.begin() + lo, idx.begin() + mid, idx.begin() + hi,
                     [&](std::size_t a, std::size_t b) { return pts_[a][axis] < pts_[b][axis]; });
    int node_id = int(nodes_.size());
    nodes_.push_back(Node{idx[mid], axis, -1, -1});
    int left = build(idx, lo, mid, depth + 1);
    int right = build(idx, mid + 1, hi, depth + 1);
    nodes_[node_id].left = left;
    nodes_[node_id].right = right;
    return node_id;
}

std::vector<std::size_t> KdTree::nearest(const Vec3& query, std::size_t k, std::size_t skip) const {
    // Max-heap of (distance^2, index) keeping the k best so far.
    using Entry = std::pair<Scalar, std::size_t>;
    std::priority_queue<Entry> heap;

    // Iterative DFS with pruning on the splitting-plane distance.
    std::vector<int> stack;
    if (root_ >= 0)
        stack.push_back(root_);
    while (!stack.empty()) {
        int ni = stack.back();
        stack.pop_back();
        const Node& node = nodes_[ni];
        const Vec3& p = pts_[node.point];
        if (node.point != skip) {
            Scalar d2 = (p - query).squaredNorm();
            if (heap.size() < k) {
                heap.emplace(d2, node.point);
            } else if (d2 < heap.top().first) {
                heap.pop();
                heap.emplace(d2, node.point);
            }
        }
        Scalar diff = query[node.axis] - p[node.axis];
        int near = diff <= 0 ? node.left : node.right;
        int far = diff <= 0 ? node.right : node.left;
        if (far >= 0 && (heap.size() < k || diff * diff < heap.top().first))
            stack.push_back(far);
        if (near >= 0)
            stack.push_back(near);
    }

    std::vector<std::size_t> out(heap.size());
    for (std::size_t i = heap.size(); i-- > 0;) {
        out[i] = heap.top().second;
        heap.pop();
    }
    return out;
}

std::vector<Scalar> knn_mean_distance(const std::vector<Vec3>& points, int k, Scalar floor) {
    const std::size_t n = points.size();
    std::vector<Scalar> out(n, floor);
    if (n < 2)
        return out;
    KdTree tree(points);
    std::size_t want = std::min<std::size_t>(std::size_t(k), n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        auto nbrs = tree.nearest(points[i], want, i);
        Scalar sum = 0;
        for (std::size_t j : nbrs)
            sum += (points[j] - points[i]).norm();
        out[i] = std::max(floor, sum / Scalar(nbrs.size()));
    }
    return out;
}

} // namespace splat
