// Copyright Contributors to the splatbench Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "splatbench/camera.hpp"
#include "splatbench/image.hpp"

#include <vector>

namespace splat {

// A posed camera together with its ground-truth image.
struct TrainView {
    Camera cam;
    Image target;
};

} // namespace splat
