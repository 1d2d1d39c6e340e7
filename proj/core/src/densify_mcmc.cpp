// Copyright Contributors to the splatbench Project
// SPDX-License-Identifier: Apache-2.0
#include "densify_impl.hpp"

#include "splatbench/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace splat::densify {

namespace {

// Copies every parameter of row src onto row dst (same cloud).
void copy_row(GaussianCloud& cloud, std::size_t dst, std::size_t src) {
    cloud.means[dst] = cloud.means[src];
    cloud.log_scales[dst] = cloud.log_scales[src];
    cloud.rotations[dst] = cloud.rotations[src];
    cloud.opacity_logits[dst] = cloud.opacity_logits[src];
    const std::size_t stride = std::size_t(cloud.sh_coeff_count()) * 3;
    for (std::size_t j = 0; j < stride; ++j)
        cloud.sh[dst * stride + j] = cloud.sh[src * stride + j];
}

// Applies the relocation parameter rule to a target row and its n-1 copies.
void apply_relocation(GaussianCloud& cloud, std::size_t target,
                      const std::vector<std::size_t>& copies) {
    Scalar alpha_new = 0, scale_factor = 1;
    relocation_params(cloud.opacity(target), int(copies.size()) + 1, alpha_new, scale_factor);
    const Scalar new_logit = logit(std::clamp(alpha_new, Scalar(1e-7), Scalar(1) - Scalar(1e-7)));
    const Vec3 new_log_scale =
        (cloud.log_scales[target].array() + std::log(scale_factor)).matrix();
    for (std::size_t r : copies) {
        copy_row(cloud, r, target);
        cloud.opacity_logits[r] = new_logit;
        cloud.log_scales[r] = new_log_scale;
    }
    cloud.opacity_logits[target] = new_logit;
    cloud.log_scales[target] = new_log_scale;
}

} // namespace

void McmcStrategy::after_backward(const StepContext& ctx, const Camera&,
                                  const raster::RenderOutput&, const raster::ViewspaceGrads&,
                                  CloudGrads& grads) {
    // L += reg_o * sum |alpha| + reg_s * sum |s|, injected directly as gradients
    // on the raw parameters (both alpha and s are positive by activation).
    GaussianCloud& cloud = ctx.cloud;
    for (std::size_t g = 0; g < cloud.size(); ++g) {
        const Scalar a = cloud.opacity(g);
        grads.opacity_logits[g] += cfg_.mcmc_opacity_reg * a * (1 - a);
        grads.log_scales[g] += cfg_.mcmc_scale_reg * cloud.scale(g);
    }
}

MutationReport McmcStrategy::after_step(StepContext& ctx) {
    MutationReport rep;
    rep.budget = ctx.cap;
    Schedule sched(cfg_, ctx.total_steps);
    GaussianCloud& cloud = ctx.cloud;

    if (sched.densify_event(ctx.step)) {
        // Relocate dead gaussians onto targets sampled by opacity.
        std::vector<std::size_t> dead;
        std::vector<Scalar> weights(cloud.size(), 0);
        for (std::size_t g = 0; g < cloud.size(); ++g) {
            if (cloud.opacity(g) < cfg_.prune_alpha)
                dead.push_back(g);
            else
                weights[g] = cloud.opacity(g);
        }
        if (!dead.empty() && dead.size() < cloud.size()) {
            std::map<std::size_t, std::vector<std::size_t>> groups;
            for (std::size_t d : dead)
                groups[ctx.rng.multinomial(weights)].push_back(d);
            std::vector<std::size_t> touched;
            for (const auto& [target, copies] : groups) {
                apply_relocation(cloud, target, copies);
                touched.push_back(target);
                touched.insert(touched.end(), copies.begin(), copies.end());
            }
            ctx.adam.zero_rows(touched);
            rep.relocated = dead.size();
        }

        // Grow toward the cap by sampling high-opacity targets.
        const std::size_t want = std::size_t(std::ceil(cfg_.mcmc_grow_fraction * cloud.size()));
        std::size_t n_add = want;
        if (ctx.cap != kUncapped)
            n_add = std::min(want, ctx.cap > cloud.size() ? ctx.cap - cloud.size() : 0);
        if (n_add > 0) {
            std::vector<Scalar> w(cloud.size());
            for (std::size_t g = 0; g < cloud.size(); ++g)
                w[g] = cloud.opacity(g);
            std::map<std::size_t, std::vector<std::size_t>> groups;
            const std::size_t old_n = cloud.size();
            for (std::size_t i = 0; i < n_add; ++i)
                groups[ctx.rng.multinomial(w)].push_back(old_n + i);
            cloud.resize(old_n + n_add);
            ctx.adam.append_zero_rows(n_add);
            std::vector<std::size_t> touched;
            for (const auto& [target, copies] : groups) {
                apply_relocation(cloud, target, copies);
                touched.push_back(target);
            }
            ctx.adam.zero_rows(touched);
            rep.grown = n_add;
        }
    }

    // Exploration noise on the means, every step: covariance-shaped, gated to
    // near-dead gaussians, scaled by the current position learning rate.
    const Scalar k = cfg_.mcmc_noise_gate_k;
    for (std::size_t g = 0; g < cloud.size(); ++g) {
        const Vec3 xi = ctx.rng.normal3();
        const Scalar gate = sigmoid(-k * (cloud.opacity(g) - cfg_.prune_alpha));
        const Mat3 R = quat_to_rotmat(cloud.rotations[g]);
        cloud.means[g] +=
            R * cloud.scale(g).cwiseProduct(xi) * (ctx.position_lr * cfg_.mcmc_noise_scale * gate);
    }
    return rep;
}

} // namespace splat::densify
