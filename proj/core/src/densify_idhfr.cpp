// Copyright Contributors to the splatbench Project
// SPDX-License-Identifier: Apache-2.0
#include "densify_impl.hpp"

#include "splatbench/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace splat::densify {

void IdhfrStrategy::after_backward(const StepContext& ctx, const Camera& cam,
                                   const raster::RenderOutput& fwd,
                                   const raster::ViewspaceGrads& vgrads, CloudGrads&) {
    if (initial_n_ == 0)
        initial_n_ = ctx.cloud.size();
    state_.accumulate(cam, fwd, vgrads, true);
}

int IdhfrStrategy::accumulation_window(int step, int total_steps) const {
    const int phase_start = int(std::ceil(cfg_.idhfr_accum_start_fraction * total_steps));
    return step >= phase_start ? cfg_.idhfr_accum_window : 1;
}

MutationReport IdhfrStrategy::after_step(StepContext& ctx) {
    MutationReport rep;
    Schedule sched(cfg_, ctx.total_steps);
    GaussianCloud& cloud = ctx.cloud;
    if (ctx.cap == kUncapped)
        throw std::invalid_argument("idhfr requires a finite cap");
    rep.budget = ctx.cap;

    if (sched.densify_event(ctx.step)) {
        state_.ensure(cloud.size());

        // Nondecreasing budget ramp over the densify window, reaching the cap
        // at the final event.
        const int e = sched.event_index(ctx.step);
        const int E = std::max(1, sched.event_count());
        const Scalar start_b = std::min<Scalar>(
            Scalar(ctx.cap),
            std::max<Scalar>(Scalar(initial_n_), cfg_.idhfr_start_fraction * Scalar(ctx.cap)));
        const std::size_t budget_t =
            std::size_t(std::llround(start_b + (Scalar(ctx.cap) - start_b) * Scalar(e) / Scalar(E)));
        rep.budget = budget_t;

        std::vector<std::size_t> cand;
        for (std::size_t g = 0; g < cloud.size(); ++g)
            if (state_.mean_grad(g) >= cfg_.grad_threshold)
                cand.push_back(g);

        std::size_t n_sel = budget_t > cloud.size() ? budget_t - cloud.size() : 0;
        n_sel = std::min(n_sel, cand.size());

        if (n_sel > 0) {
            // Edge-aware scores on a few sampled views decide which candidates
            // actually split.
            if (!ctx.views || ctx.views->empty() || !ctx.render_cfg)
                throw std::logic_error("idhfr: scoring views not wired into the step context");
            const std::size_t v =
                std::min<std::size_t>(std::size_t(cfg_.idhfr_score_views), ctx.views->size());
            const auto view_idx = ctx.rng.sample_without_replacement(ctx.views->size(), v);
            const auto scores = edge_aware_scores(cloud, *ctx.views, view_idx, *ctx.render_cfg);

            std::vector<Scalar> cand_scores(cand.size());
            std::size_t positive = 0;
            for (std::size_t i = 0; i < cand.size(); ++i) {
                cand_scores[i] = std::max(Scalar(0), scores[cand[i]]);
                if (cand_scores[i] > 0)
                    ++positive;
            }
            n_sel = std::min(n_sel, positive);

            if (n_sel > 0) {
                const auto chosen = ctx.rng.weighted_sample_without_replacement(cand_scores, n_sel);
                EditBatch batch(cloud);
                for (std::size_t ci : chosen) {
                    const std::size_t g = cand[ci];
                    // Split along the longest principal axis; children sit at
                    // mu ± offset * s_max * v_max with that axis halved and
                    // opacity reduced.
                    const Vec3 s = cloud.scale(g);
                    int axis = 0;
                    s.maxCoeff(&axis);
                    const Mat3 R = quat_to_rotmat(cloud.rotations[g]);
                    const Vec3 v_max = R.col(axis);
                    const Vec3 offset = cfg_.idhfr_split_offset * s[axis] * v_max;
                    Vec3 child_log_scale = cloud.log_scales[g];
                    child_log_scale[axis] -= std::log(Scalar(2));
                    const Scalar child_alpha = std::clamp(cfg_.idhfr_child_opacity *
                                                              cloud.opacity(g),
                                                          Scalar(1e-7), Scalar(1) - Scalar(1e-7));
                    for (int c = 0; c < 2; ++c) {
                        batch.additions.append_from(cloud, g);
                        const std::size_t row = batch.additions.size() - 1;
                        batch.additions.means[row] =
                            cloud.means[g] + (c == 0 ? offset : Vec3(-offset));
                        batch.additions.log_scales[row] = child_log_scale;
                        batch.additions.opacity_logits[row] = logit(child_alpha);
                    }
                    batch.keep[g] = 0;
                    ++batch.split;
                }
                batch.apply(cloud, ctx.adam);
                rep.split = batch.split;
            }
        }

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
        const int delay = cfg_.idhfr_post_reset_prune_delay < 0 ? cfg_.interval
                                                                : cfg_.idhfr_post_reset_prune_delay;
        pending_prune_step_ = ctx.step + delay;
    }

    if (ctx.step == pending_prune_step_) {
        // Extra opacity-prune pass a fixed delay after each reset.
        rep.pruned += prune(cloud, ctx.adam, cfg_, ctx.step, ctx.scene_extent, state_.max_radius,
                            &state_.grad_sum, &state_.seen);
        state_.ensure(cloud.size());
        pending_prune_step_ = -1;
    }
    return rep;
}

} // namespace splat::densify
