// Copyright Contributors to the splatbench Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "splatbench/image.hpp"

namespace splat::optim {

struct LossConfig {
    Scalar lambda_ssim = Scalar(0.2); // loss = (1-l)*L1 + l*(1-SSIM)
    int window = 11;
    Scalar sigma = Scalar(1.5);
    Scalar k1 = Scalar(0.01);
    Scalar k2 = Scalar(0.03); // C_i = (k_i * data_range)^2, data range 1
};

// Mean SSIM over channels and valid (unpadded) window positions. Throws if
// either image dimension is smaller than the window.
Scalar ssim(const Image& a, const Image& b, const LossConfig& cfg = {});

struct LossResult {
    Scalar value = 0;
    Scalar l1 = 0;
    Scalar ssim = 0;
    Image grad; // dL/d(render), same shape as the inputs
};

// (1 - lambda) * mean|render - target| + lambda * (1 - SSIM), with the analytic
// gradient w.r.t. the rendered image.
LossResult photometric_loss(const Image& render, const Image& target, const LossConfig& cfg = {});

} // namespace splat::optim
