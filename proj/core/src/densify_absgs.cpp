// Copyright Contributors to the splatbench Project
// SPDX-License-Identifier: Apache-2.0
#include "densify_impl.hpp"

#include "splatbench/covariance.hpp"

#include <algorithm>
#include <cmath>

namespace splat::densify {

void NoneStrategy::after_backward(const StepContext&, const Camera& cam,
                                  const raster::RenderOutput& fwd,
                                  const raster::ViewspaceGrads& vgrads, CloudGrads&) {
    // Only the screen-radius tracking is needed for size culls.
    state_.accumulate(cam, fwd, vgrads, true);
}

MutationReport NoneStrategy::after_step(StepContext& ctx) {
    MutationReport rep;
    rep.budget = ctx.cap;
    Schedule sched(cfg_, ctx.total_steps);
    if (sched.densify_event(ctx.step)) {
        rep.pruned = prune(ctx.cloud, ctx.adam, cfg_, ctx.step, ctx.scene_extent,
                           state_.max_radius, &state_.grad_sum, &state_.seen);
        state_.reset(ctx.cloud.size());
    }
    return rep;
}

void AbsGsStrategy::after_backward(const StepContext&, const Camera& cam,
                                   const raster::RenderOutput& fwd,
                                   const raster::ViewspaceGrads& vgrads, CloudGrads&) {
    state_.accumulate(cam, fwd, vgrads, true);
}

MutationReport AbsGsStrategy::after_step(StepContext& ctx) {
    MutationReport rep;
    rep.budget = ctx.cap;
    Schedule sched(cfg_, ctx.total_steps);
    GaussianCloud& cloud = ctx.cloud;

    if (sched.densify_event(ctx.step)) {
        state_.ensure(cloud.size());

        // Candidates over the trigger threshold, ranked by the statistic and
        // truncated to the cap headroom (each clone or split adds one row).
        std::vector<std::size_t> cand;
        for (std::size_t g = 0; g < cloud.size(); ++g)
            if (state_.mean_grad(g) >= cfg_.grad_threshold)
                cand.push_back(g);
        std::sort(cand.begin(), cand.end(), [&](std::size_t a, std::size_t b) {
            const Scalar sa = state_.mean_grad(a), sb = state_.mean_grad(b);
            if (sa != sb)
                return sa > sb;
            return a < b;
        });
        if (ctx.cap != kUncapped) {
            const std::size_t headroom = ctx.cap > cloud.size() ? ctx.cap - cloud.size() : 0;
            if (cand.size() > headroom)
                cand.resize(headroom);
        }

        EditBatch batch(cloud);
        const Scalar dense_limit = cfg_.percent_dense * ctx.scene_extent;
        for (std::size_t g : cand) {
            const Vec3 s = cloud.scale(g);
            if (s.maxCoeff() <= dense_limit) {
                batch.additions.append_from(cloud, g); // clone
                ++batch.cloned;
            } else {
                // Split: two children drawn from the parent's own density,
                // scales shrunk, parent removed.
                const Mat3 R = quat_to_rotmat(cloud.rotations[g]);
                const Vec3 shrunk =
                    (cloud.log_scales[g].array() - std::log(cfg_.split_scale_shrink)).matrix();
                for (int c = 0; c < 2; ++c) {
                    const Vec3 xi = ctx.rng.normal3();
                    batch.additions.append_from(cloud, g);
                    const std::size_t row = batch.additions.size() - 1;
                    batch.additions.means[row] = cloud.means[g] + R * s.cwiseProduct(xi);
                    batch.additions.log_scales[row] = shrunk;
                }
                batch.keep[g] = 0;
                ++batch.split;
            }
        }
        batch.apply(cloud, ctx.adam);
        rep.cloned = batch.cloned;
        rep.split = batch.split;

        // Radii/statistics for appended rows are unknown until the next
        // backward; prune sees zeros there, which only disables size culls.
        state_.max_radius.resize(cloud.size(), 0);
        state_.grad_sum.resize(cloud.size(), 0);
        state_.seen.resize(cloud.size(), 0);
        rep.pruned = prune(cloud, ctx.adam, cfg_, ctx.step, ctx.scene_extent, state_.max_radius,
                           &state_.grad_sum, &state_.seen);
        state_.reset(cloud.size());
    }

    if (sched.reset_event(ctx.step)) {
        reset_opacity(cloud, ctx.adam, cfg_.opacity_reset_value);
        rep.opacity_reset = true;
    }
    return rep;
}

} // namespace splat::densify
