// Copyright Contributors to the splatbench Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "splatbench/types.hpp"

#include <cassert>
#include <vector>

namespace splat {

// Row-major interleaved RGB image, values nominally in [0, 1].
struct Image {
    int width = 0;
    int height = 0;
    std::vector<Scalar> data; // height * width * 3

    Image() = default;
    Image(int w, int h, Scalar fill = 0) : width(w), height(h), data(std::size_t(w) * h * 3, fill) {}

    Scalar& at(int y, int x, int c) { return data[(std::size_t(y) * width + x) * 3 + c]; }
    Scalar at(int y, int x, int c) const { return data[(std::size_t(y) * width + x) * 3 + c]; }

    std::size_t pixel_count() const { return std::size_t(width) * height; }
    bool same_shape(const Image& o) const { return width == o.width && height == o.height; }
};

// Single-channel row-major field (depth maps, masks, weights).
struct Plane {
    int width = 0;
    int height = 0;
    std::vector<Scalar> data;

    Plane() = default;
    Plane(int w, int h, Scalar fill = 0) : width(w), height(h), data(std::size_t(w) * h, fill) {}

    Scalar& at(int y, int x) { return data[std::size_t(y) * width + x]; }
    Scalar at(int y, int x) const { return data[std::size_t(y) * width + x]; }
};

} // namespace splat
