// Copyright Contributors to the splatbench Project
// SPDX-License-Identifier: Apache-2.0
#include "splatbench/raster/render.hpp"

#include "splatbench/covariance.hpp"
#include "splatbench/parallel.hpp"
#include "splatbench/sh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace splat::raster {

namespace {

// Screen-space gradient accumulators for one gaussian (or one tile-list entry).
struct ScreenGrad {
    Vec2 dmean2d = Vec2::Zero();
    Scalar dconic_a = 0, dconic_b = 0, dconic_c = 0; // packed symmetric 2x2
    Scalar dalpha_act = 0;                           // w.r.t. sigmoid(opacity_logit)
    Vec3 dcolor = Vec3::Zero();
    Vec2 abs = Vec2::Zero();

    void add(const ScreenGrad& o) {
        dmean2d += o.dmean2d;
        dconic_a += o.dconic_a;
        dconic_b += o.dconic_b;
        dconic_c += o.dconic_c;
        dalpha_act += o.dalpha_act;
        dcolor += o.dcolor;
        abs += o.abs;
    }
};

} // namespace

CloudGrads render_backward(const GaussianCloud& cloud, const Camera& cam, const RenderConfig& cfg,
                           const RenderOutput& fwd, const Image& dL_dimage,
                           ViewspaceGrads* vgrads) {
    if (dL_dimage.width != cam.width || dL_dimage.height != cam.height)
        throw std::invalid_argument("render_backward: gradient image shape mismatch");
    if (fwd.proj.size() != cloud.size())
        throw std::invalid_argument("render_backward: forward output does not match cloud");

    const std::size_t n = cloud.size();
    const int W = cam.width, H = cam.height, TS = cfg.tile_size;

    // Stage 1: per-tile entry gradients, pixels walked back-to-front per the
    // standard suffix-color recurrence.
    std::vector<std::vector<ScreenGrad>> partial(fwd.tile_lists.size());
    parallel_for(fwd.tile_lists.size(), cfg.threads, [&](std::size_t tile) {
        const auto& list = fwd.tile_lists[tile];
        if (list.empty())
            return;
        auto& local = partial[tile];
        local.assign(list.size(), ScreenGrad{});
        const int tx = int(tile % fwd.tiles_x), ty = int(tile / fwd.tiles_x);
        const int x0 = tx * TS, y0 = ty * TS;
        const int x1 = std::min(W, x0 + TS), y1 = std::min(H, y0 + TS);
        for (int y = y0; y < y1; ++y) {
            for (int x = x0; x < x1; ++x) {
                const std::size_t pi = std::size_t(y) * W + x;
                const std::uint32_t consumed = fwd.n_composited[pi];
                if (consumed == 0)
                    continue;
                const Vec3 dL_dC(dL_dimage.at(y, x, 0), dL_dimage.at(y, x, 1),
                                 dL_dimage.at(y, x, 2));
                const Scalar bg_dot = cfg.background.dot(dL_dC);
                const Scalar t_final = fwd.transmittance.data[pi];
                const Vec2 pix(Scalar(x) + Scalar(0.5), Scalar(y) + Scalar(0.5));

                Scalar T = t_final; // transmittance after splat k, rebuilt in reverse
                Vec3 accum_rec = Vec3::Zero();
                for (std::uint32_t k = consumed; k-- > 0;) {
                    const ProjectedGaussian& p = fwd.proj[list[k]];
                    const Vec2 d = pix - p.mean2d;
                    const Vec2 qd = p.conic * d;
                    const Scalar power = Scalar(-0.5) * d.dot(qd);
                    if (power > 0)
                        continue;
                    const Scalar sig = sigmoid(cloud.opacity_logits[list[k]]);
                    const Scalar alpha_raw = sig * std::exp(power);
                    const Scalar alpha = std::min(cfg.alpha_max, alpha_raw);
                    if (alpha < cfg.alpha_min)
                        continue;
                    T /= (1 - alpha); // T before this splat

                    ScreenGrad& sg = local[k];
                    Scalar dL_dalpha = 0;
                    for (int c = 0; c < 3; ++c) {
                        dL_dalpha += (p.color[c] - accum_rec[c]) * T * dL_dC[c];
                        sg.dcolor[c] += alpha * T * dL_dC[c];
                    }
                    dL_dalpha -= (t_final / (1 - alpha)) * bg_dot;

                    if (alpha_raw < cfg.alpha_max) { // cap inactive, gradient flows
                        const Scalar G = std::exp(power);
                        sg.dalpha_act += G * dL_dalpha;
                        const Scalar dL_dpower = alpha * dL_dalpha;
                        sg.dconic_a += Scalar(-0.5) * d.x() * d.x() * dL_dpower;
                        sg.dconic_b += -d.x() * d.y() * dL_dpower;
                        sg.dconic_c += Scalar(-0.5) * d.y() * d.y() * dL_dpower;
                        const Vec2 g = dL_dpower * qd; // d(power)/d(mean2d) = conic * d
                        sg.dmean2d += g;
                        sg.abs += g.cwiseAbs();
                    }

                    accum_rec = alpha * p.color + (1 - alpha) * accum_rec;
                }
            }
        }
    });

    // Stage 2: reduce tile contributions in tile order (deterministic for any
    // thread count).
    std::vector<ScreenGrad> screen(n);
    for (std::size_t tile = 0; tile < fwd.tile_lists.size(); ++tile) {
        const auto& list = fwd.tile_lists[tile];
        for (std::size_t k = 0; k < partial[tile].size(); ++k)
            screen[list[k]].add(partial[tile][k]);
    }

    if (vgrads) {
        vgrads->summed.assign(n, Vec2::Zero());
        vgrads->abs.assign(n, Vec2::Zero());
        vgrads->visible.assign(fwd.touched.begin(), fwd.touched.end());
        for (std::size_t g = 0; g < n; ++g) {
            vgrads->summed[g] = screen[g].dmean2d;
            vgrads->abs[g] = screen[g].abs;
        }
    }

    // Stage 3: screen-space gradients to parameter gradients, per gaussian.
    CloudGrads grads;
    grads.resize_zero(cloud);
    const int K = cloud.sh_coeff_count();
    parallel_for(n, cfg.threads, [&](std::size_t g) {
        const ProjectedGaussian& p = fwd.proj[g];
        if (!p.valid)
            return;
        const ScreenGrad& sg = screen[g];

        // Opacity through its sigmoid activation.
        const Scalar sig = sigmoid(cloud.opacity_logits[g]);
        grads.opacity_logits[g] = sg.dalpha_act * sig * (1 - sig);

        // Color through the SH evaluation; clamped channels pass no gradient.
        const Vec3 to_cam = cloud.means[g] - cam.center();
        const Scalar dist = to_cam.norm();
        const Vec3 dir = to_cam / dist;
        Scalar basis[16];
        Vec3 dbasis[16];
        sh_basis(cloud.sh_degree, dir, basis);
        sh_basis_grad(cloud.sh_degree, dir, dbasis);
        const Scalar* shg = cloud.sh_at(g);
        Vec3 dL_ddir = Vec3::Zero();
        for (int c = 0; c < 3; ++c) {
            if (p.clamped[c])
                continue;
            const Scalar dc = sg.dcolor[c];
            for (int k = 0; k < K; ++k) {
                grads.sh[(std::size_t(g) * K + k) * 3 + c] = basis[k] * dc;
                dL_ddir += dbasis[k] * (shg[k * 3 + c] * dc);
            }
        }
        // Through normalization of the view vector.
        Vec3 dL_dmean = (dL_ddir - dir * dir.dot(dL_ddir)) / dist;

        // Conic to dilated screen covariance: d(M^-1) chain with the packed
        // off-diagonal split across both entries.
        Mat2 g_conic;
        g_conic << sg.dconic_a, sg.dconic_b / 2, sg.dconic_b / 2, sg.dconic_c;
        const Mat2 dcov2d = -p.conic * g_conic * p.conic;

        // Recompute the projection products.
        const Vec3 p_cam = cam.world_to_camera(cloud.means[g]);
        const Scalar z = p_cam.z(), z2 = z * z, z3 = z2 * z;
        const Scalar limx = Scalar(1.3) * cam.tan_half_fov_x();
        const Scalar limy = Scalar(1.3) * cam.tan_half_fov_y();
        const Scalar txz = p_cam.x() / z, tyz = p_cam.y() / z;
        const bool x_clamped = txz < -limx || txz > limx;
        const bool y_clamped = tyz < -limy || tyz > limy;
        const Scalar xc = std::clamp(txz, -limx, limx) * z;
        const Scalar yc = std::clamp(tyz, -limy, limy) * z;
        Eigen::Matrix<Scalar, 2, 3> J;
        J << cam.fx / z, 0, -cam.fx * xc / z2, 0, cam.fy / z, -cam.fy * yc / z2;
        const Eigen::Matrix<Scalar, 2, 3> Tm = J * cam.R;
        const Mat3 cov3d = covariance_from_params(cloud.log_scales[g], cloud.rotations[g]);

        const Mat3 dSigma = Tm.transpose() * dcov2d * Tm;
        covariance_backward(cloud.log_scales[g], cloud.rotations[g], dSigma, grads.log_scales[g],
                            grads.rotations[g]);

        const Eigen::Matrix<Scalar, 2, 3> dTm = 2 * dcov2d * Tm * cov3d;
        const Eigen::Matrix<Scalar, 2, 3> dJ = dTm * cam.R.transpose();

        // J entries as functions of the (possibly clamped) camera point.
        Vec3 dL_dt_cam = Vec3::Zero();
        const Scalar dL_dxc = dJ(0, 2) * (-cam.fx / z2);
        const Scalar dL_dyc = dJ(1, 2) * (-cam.fy / z2);
        dL_dt_cam.z() += dJ(0, 0) * (-cam.fx / z2) + dJ(1, 1) * (-cam.fy / z2) +
                         dJ(0, 2) * (2 * cam.fx * xc / z3) + dJ(1, 2) * (2 * cam.fy * yc / z3);
        if (x_clamped)
            dL_dt_cam.z() += dL_dxc * (xc / z); // xc = ±lim * z on the clamp
        else
            dL_dt_cam.x() += dL_dxc;
        if (y_clamped)
            dL_dt_cam.z() += dL_dyc * (yc / z);
        else
            dL_dt_cam.y() += dL_dyc;

        // Screen-mean path uses the exact (unclamped) pinhole projection.
        dL_dt_cam.x() += sg.dmean2d.x() * cam.fx / z;
        dL_dt_cam.z() += -sg.dmean2d.x() * cam.fx * p_cam.x() / z2;
        dL_dt_cam.y() += sg.dmean2d.y() * cam.fy / z;
        dL_dt_cam.z() += -sg.dmean2d.y() * cam.fy * p_cam.y() / z2;

        dL_dmean += cam.R.transpose() * dL_dt_cam;
        grads.means[g] = dL_dmean;
    });

    return grads;
}

} // namespace splat::raster
