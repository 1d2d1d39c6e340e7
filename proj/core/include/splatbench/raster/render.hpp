// Copyright Contributors to the splatbench Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "splatbench/camera.hpp"
#include "splatbench/gaussian_cloud.hpp"
#include "splatbench/image.hpp"

#include <cstdint>
#include <vector>

namespace splat::raster {

struct RenderConfig {
    int tile_size = 16;
    Scalar near_z = Scalar(0.01);       // cull gaussians with camera-space z <= near_z
    Scalar sigma_cutoff = Scalar(3);    // bounding radius in screen-space sigmas
    Scalar alpha_min = Scalar(1) / 255; // skip contributions below this alpha
    Scalar alpha_max = Scalar(0.99);    // per-splat alpha cap
    Scalar t_min = Scalar(1e-4);        // stop compositing when T would drop below
    Scalar dilation = Scalar(0.3);      // low-pass added to the screen covariance diagonal
    Vec3 background = Vec3::Zero();
    int threads = 1;
};

// Projection products for one gaussian in one view, reused by the backward pass.
struct ProjectedGaussian {
    bool valid = false; // in front of the near plane with a positive screen radius
    Vec2 mean2d = Vec2::Zero();
    Scalar depth = 0;
    Mat2 cov2d = Mat2::Zero(); // dilated screen covariance
    Mat2 conic = Mat2::Zero(); // its inverse
    Scalar radius = 0;         // ceil(sigma_cutoff * sqrt(lambda_max)), pixels
    Vec3 color = Vec3::Zero(); // SH-shaded RGB for this view
    bool clamped[3] = {false, false, false};
};

ProjectedGaussian project_gaussian(const GaussianCloud& cloud, std::size_t g, const Camera& cam,
                                   const RenderConfig& cfg);

// Forward result plus everything the backward pass re-walks: the depth-ordered
// per-tile splat lists and per-pixel termination state.
struct RenderOutput {
    Image image;
    Plane transmittance; // final T per pixel
    Plane weight_sum;    // sum of composited alpha*T per pixel

    int tiles_x = 0, tiles_y = 0;
    std::vector<std::vector<std::uint32_t>> tile_lists; // composite order within each tile
    std::vector<std::uint32_t> n_composited;            // per pixel, list entries consumed
    std::vector<ProjectedGaussian> proj;                // per gaussian
    std::vector<std::uint8_t> touched;                  // per gaussian: binned into >= 1 tile
};

RenderOutput render(const GaussianCloud& cloud, const Camera& cam, const RenderConfig& cfg);

// Screen-space positional gradients per gaussian for one rendered view.
// summed: plain sum of per-pixel contributions. abs: sum of componentwise
// absolute values, so abs >= |summed| holds componentwise by construction.
struct ViewspaceGrads {
    std::vector<Vec2> summed;
    std::vector<Vec2> abs;
    std::vector<std::uint8_t> visible;
};

// Analytic gradients of a scalar loss w.r.t. every cloud parameter, given the
// loss gradient w.r.t. the rendered image. `fwd` must come from render() with
// the same cloud, camera, and config.
CloudGrads render_backward(const GaussianCloud& cloud, const Camera& cam, const RenderConfig& cfg,
                           const RenderOutput& fwd, const Image& dL_dimage,
                           ViewspaceGrads* vgrads = nullptr);

// Per-gaussian sums of compositing weight (alpha * T) times a per-pixel field,
// over one view. Used for edge-aware densification scores.
std::vector<Scalar> accumulate_pixel_weights(const GaussianCloud& cloud, const Camera& cam,
                                             const RenderConfig& cfg, const Plane& field);

} // namespace splat::raster
