// Copyright Contributors to the splatbench Project
// SPDX-License-Identifier: Apache-2.0
#include "splatbench/raster/render.hpp"

#include "splatbench/covariance.hpp"
#include "splatbench/parallel.hpp"
#include "splatbench/sh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace splat::raster {

namespace {

// Camera-frame point with the reference frustum clamp applied for the EWA
// Jacobian. The clamp stabilizes J for gaussians far outside the view cone;
// the screen mean itself always uses the exact pinhole projection.
struct ClampedPoint {
    Scalar xc, yc, z;
    bool x_clamped, y_clamped;
};

ClampedPoint clamp_for_jacobian(const Vec3& p_cam, const Camera& cam) {
    const Scalar limx = Scalar(1.3) * cam.tan_half_fov_x();
    const Scalar limy = Scalar(1.3) * cam.tan_half_fov_y();
    Scalar tx = p_cam.x() / p_cam.z();
    Scalar ty = p_cam.y() / p_cam.z();
    ClampedPoint out;
    out.x_clamped = tx < -limx || tx > limx;
    out.y_clamped = ty < -limy || ty > limy;
    out.xc = std::clamp(tx, -limx, limx) * p_cam.z();
    out.yc = std::clamp(ty, -limy, limy) * p_cam.z();
    out.z = p_cam.z();
    return out;
}

Eigen::Matrix<Scalar, 2, 3> ewa_jacobian(const ClampedPoint& p, const Camera& cam) {
    const Scalar z2 = p.z * p.z;
    Eigen::Matrix<Scalar, 2, 3> J;
    J << cam.fx / p.z, 0, -cam.fx * p.xc / z2, 0, cam.fy / p.z, -cam.fy * p.yc / z2;
    return J;
}

} // namespace

ProjectedGaussian project_gaussian(const GaussianCloud& cloud, std::size_t g, const Camera& cam,
                                   const RenderConfig& cfg) {
    ProjectedGaussian out;
    const Vec3 p_cam = cam.world_to_camera(cloud.means[g]);
    if (!(p_cam.z() > cfg.near_z))
        return out;

    out.depth = p_cam.z();
    out.mean2d = Vec2(cam.fx * p_cam.x() / p_cam.z() + cam.cx,
                      cam.fy * p_cam.y() / p_cam.z() + cam.cy);

    const Mat3 cov3d = covariance_from_params(cloud.log_scales[g], cloud.rotations[g]);
    const ClampedPoint cp = clamp_for_jacobian(p_cam, cam);
    const Eigen::Matrix<Scalar, 2, 3> T = ewa_jacobian(cp, cam) * cam.R;
    Mat2 cov2d = T * cov3d * T.transpose();
    cov2d(0, 0) += cfg.dilation;
    cov2d(1, 1) += cfg.dilation;

    const Scalar det = cov2d(0, 0) * cov2d(1, 1) - cov2d(0, 1) * cov2d(1, 0);
    if (!(det > 0) || !std::isfinite(det))
        return out;
    out.cov2d = cov2d;
    out.conic << cov2d(1, 1) / det, -cov2d(0, 1) / det, -cov2d(0, 1) / det, cov2d(0, 0) / det;

    const Scalar mid = (cov2d(0, 0) + cov2d(1, 1)) / 2;
    const Scalar lambda_max = mid + std::sqrt(std::max(Scalar(0.1), mid * mid - det));
    out.radius = std::ceil(cfg.sigma_cutoff * std::sqrt(lambda_max));
    if (!(out.radius > 0))
        return out;

    const Vec3 dir = (cloud.means[g] - cam.center()).normalized();
    out.color = sh_evaluate(cloud.sh_degree, dir, cloud.sh_at(g), out.clamped);
    out.valid = true;
    return out;
}

RenderOutput render(const GaussianCloud& cloud, const Camera& cam, const RenderConfig& cfg) {
    cloud.check_consistent();
    const std::size_t n = cloud.size();
    const int W = cam.width, H = cam.height, TS = cfg.tile_size;

    RenderOutput out;
    out.image = Image(W, H);
    out.transmittance = Plane(W, H);
    out.weight_sum = Plane(W, H);
    out.tiles_x = (W + TS - 1) / TS;
    out.tiles_y = (H + TS - 1) / TS;
    out.tile_lists.assign(std::size_t(out.tiles_x) * out.tiles_y, {});
    out.n_composited.assign(std::size_t(W) * H, 0);
    out.proj.resize(n);
    out.touched.assign(n, 0);

    parallel_for(n, cfg.threads,
                 [&](std::size_t g) { out.proj[g] = project_gaussian(cloud, g, cam, cfg); });

    // Global depth order, ties broken by index, so per-tile lists come out in
    // composite order by construction.
    std::vector<std::uint32_t> order;
    order.reserve(n);
    for (std::uint32_t g = 0; g < n; ++g)
        if (out.proj[g].valid)
            order.push_back(g);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (out.proj[a].depth != out.proj[b].depth)
            return out.proj[a].depth < out.proj[b].depth;
        return a < b;
    });

    for (std::uint32_t g : order) {
        const ProjectedGaussian& p = out.proj[g];
        int tx0 = std::max(0, int(std::floor((p.mean2d.x() - p.radius) / TS)));
        int tx1 = std::min(out.tiles_x - 1, int(std::floor((p.mean2d.x() + p.radius) / TS)));
        int ty0 = std::max(0, int(std::floor((p.mean2d.y() - p.radius) / TS)));
        int ty1 = std::min(out.tiles_y - 1, int(std::floor((p.mean2d.y() + p.radius) / TS)));
        bool any = false;
        for (int ty = ty0; ty <= ty1; ++ty)
            for (int tx = tx0; tx <= tx1; ++tx) {
                out.tile_lists[std::size_t(ty) * out.tiles_x + tx].push_back(g);
                any = true;
            }
        if (any)
            out.touched[g] = 1;
    }

    parallel_for(out.tile_lists.size(), cfg.threads, [&](std::size_t tile) {
        const auto& list = out.tile_lists[tile];
        const int tx = int(tile % out.tiles_x), ty = int(tile / out.tiles_x);
        const int x0 = tx * TS, y0 = ty * TS;
        const int x1 = std::min(W, x0 + TS), y1 = std::min(H, y0 + TS);
        for (int y = y0; y < y1; ++y) {
            for (int x = x0; x < x1; ++x) {
                const Vec2 pix(Scalar(x) + Scalar(0.5), Scalar(y) + Scalar(0.5));
                Scalar T = 1;
                Scalar wsum = 0;
                Vec3 color = Vec3::Zero();
                std::uint32_t consumed = 0;
                for (std::uint32_t k = 0; k < list.size(); ++k) {
                    const ProjectedGaussian& p = out.proj[list[k]];
                    const Vec2 d = pix - p.mean2d;
                    const Scalar power = Scalar(-0.5) * d.dot(p.conic * d);
                    if (power > 0) {
                        consumed = k + 1;
                        continue;
                    }
                    Scalar alpha = sigmoid(cloud.opacity_logits[list[k]]) * std::exp(power);
                    alpha = std::min(cfg.alpha_max, alpha);
                    if (alpha < cfg.alpha_min) {
                        consumed = k + 1;
                        continue;
                    }
                    if (T * (1 - alpha) < cfg.t_min)
                        break; // would terminate the pixel; splat not composited
                    consumed = k + 1;
                    const Scalar w = alpha * T;
                    color += w * p.color;
                    wsum += w;
                    T *= (1 - alpha);
                }
                color += T * cfg.background;
                const std::size_t pi = std::size_t(y) * W + x;
                out.image.at(y, x, 0) = color[0];
                out.image.at(y, x, 1) = color[1];
                out.image.at(y, x, 2) = color[2];
                out.transmittance.data[pi] = T;
                out.weight_sum.data[pi] = wsum;
                out.n_composited[pi] = consumed;
            }
        }
    });

    return out;
}

std::vector<Scalar> accumulate_pixel_weights(const GaussianCloud& cloud, const Camera& cam,
                                             const RenderConfig& cfg, const Plane& field) {
    if (field.width != cam.width || field.height != cam.height)
        throw std::invalid_argument("accumulate_pixel_weights: field shape mismatch");
    RenderOutput fwd = render(cloud, cam, cfg);
    const int TS = cfg.tile_size, W = cam.width, H = cam.height;

    // Per-tile partial sums, reduced in tile order for thread-count-independent
    // results.
    std::vector<std::vector<Scalar>> partial(fwd.tile_lists.size());
    parallel_for(fwd.tile_lists.size(), cfg.threads, [&](std::size_t tile) {
        const auto& list = fwd.tile_lists[tile];
        if (list.empty())
            return;
        auto& local = partial[tile];
        local.assign(list.size(), 0);
        const int tx = int(tile % fwd.tiles_x), ty = int(tile / fwd.tiles_x);
        const int x0 = tx * TS, y0 = ty * TS;
        const int x1 = std::min(W, x0 + TS), y1 = std::min(H, y0 + TS);
        for (int y = y0; y < y1; ++y) {
            for (int x = x0; x < x1; ++x) {
                const Vec2 pix(Scalar(x) + Scalar(0.5), Scalar(y) + Scalar(0.5));
                const std::uint32_t consumed = fwd.n_composited[std::size_t(y) * W + x];
                Scalar T = 1;
                for (std::uint32_t k = 0; k < consumed; ++k) {
                    const ProjectedGaussian& p = fwd.proj[list[k]];
                    const Vec2 d = pix - p.mean2d;
                    const Scalar power = Scalar(-0.5) * d.dot(p.conic * d);
                    if (power > 0)
                        continue;
                    Scalar alpha = sigmoid(cloud.opacity_logits[list[k]]) * std::exp(power);
                    alpha = std::min(cfg.alpha_max, alpha);
                    if (alpha < cfg.alpha_min)
                        continue;
                    local[k] += alpha * T * field.at(y, x);
                    T *= (1 - alpha);
                }
            }
        }
    });

    std::vector<Scalar> sums(cloud.size(), 0);
    for (std::size_t tile = 0; tile < fwd.tile_lists.size(); ++tile) {
        const auto& list = fwd.tile_lists[tile];
        for (std::size_t k = 0; k < partial[tile].size(); ++k)
            sums[list[k]] += partial[tile][k];
    }
    return sums;
}

} // namespace splat::raster
