// Copyright Contributors to the splatbench Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "splatbench/gaussian_cloud.hpp"
#include "splatbench/optim/adam.hpp"
#include "splatbench/raster/render.hpp"
#include "splatbench/rng.hpp"
#include "splatbench/view.hpp"

#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace splat::densify {

inline constexpr std::size_t kUncapped = std::numeric_limits<std::size_t>::max();

enum class Kind { None, AbsGS, MCMC, IDHFR };

Kind kind_from_string(const std::string& s);
std::string to_string(Kind k);

struct Config {
    Kind kind = Kind::AbsGS;

    // Shared schedule. stop < 0 means total_steps / 2, resolved at training start.
    int interval = 100;
    int start = 500;
    int stop = -1;
    int opacity_reset_interval = 3000;
    Scalar opacity_reset_value = Scalar(0.01);

    Scalar prune_alpha = Scalar(0.005);
    Scalar world_size_fraction = Scalar(0.1);
    Scalar screen_size_px = Scalar(20);

    Scalar grad_threshold = Scalar(4e-4);
    Scalar percent_dense = Scalar(0.01);
    Scalar split_scale_shrink = Scalar(1.6);

    Scalar mcmc_opacity_reg = Scalar(0.01);
    Scalar mcmc_scale_reg = Scalar(0.01);
    Scalar mcmc_grow_fraction = Scalar(0.05);
    Scalar mcmc_noise_scale = Scalar(1);
    Scalar mcmc_noise_gate_k = Scalar(100);

    Scalar idhfr_start_fraction = Scalar(0.3); // of the cap, for the budget ramp
    Scalar idhfr_child_opacity = Scalar(0.6);
    Scalar idhfr_split_offset = Scalar(0.5); // children at mu ± offset * s_max * v_max
    int idhfr_score_views = 4;
    int idhfr_accum_window = 4;
    Scalar idhfr_accum_start_fraction = Scalar(0.8);
    int idhfr_post_reset_prune_delay = -1; // -1: one densify interval
};

// What a strategy did to the cloud in one step.
struct MutationReport {
    std::size_t cloned = 0;
    std::size_t split = 0;
    std::size_t pruned = 0;
    std::size_t relocated = 0;
    std::size_t grown = 0;
    bool opacity_reset = false;
    std::size_t budget = 0; // cap in force at this event (IDHFR: scheduled G_max(t))

    bool any() const {
        return cloned || split || pruned || relocated || grown || opacity_reset;
    }
};

// Everything a strategy may touch during training. Cloud and optimizer rows
// must stay in lockstep through every structural edit.
struct StepContext {
    GaussianCloud& cloud;
    optim::AdamState& adam;
    Rng& rng;
    int step = 0;        // 1-based training step
    int total_steps = 0;
    Scalar scene_extent = 0;
    std::size_t cap = kUncapped;
    Scalar position_lr = 0; // current scheduled means learning rate
    const std::vector<TrainView>* views = nullptr; // scoring views (IDHFR)
    const raster::RenderConfig* render_cfg = nullptr;
};

class Strategy {
public:
    virtual ~Strategy() = default;

    // Called after every backward pass, before the optimizer step. Strategies
    // accumulate trigger statistics here and may inject regularization terms
    // into the parameter gradients.
    virtual void after_backward(const StepContext& ctx, const Camera& cam,
                                const raster::RenderOutput& fwd,
                                const raster::ViewspaceGrads& vgrads, CloudGrads& grads) = 0;

    // Called after the optimizer step (or after a deferred-update step when
    // gradient accumulation is active). Structural edits happen here.
    virtual MutationReport after_step(StepContext& ctx) = 0;

    // Gradient accumulation window for this step (1 = update every step).
    virtual int accumulation_window(int step, int total_steps) const {
        (void)step;
        (void)total_steps;
        return 1;
    }
};

std::unique_ptr<Strategy> make_strategy(const Config& cfg);

// Alpha-threshold prune plus, once past the warmup step, world-size and
// screen-size culls. Returns the number of removed gaussians; optimizer rows
// are removed in lockstep. max_radius may be empty (screen cull skipped).
std::size_t prune(GaussianCloud& cloud, optim::AdamState& adam, const Config& cfg, int step,
                  Scalar scene_extent, std::vector<Scalar>& max_radius,
                  std::vector<Scalar>* stat_accum = nullptr, std::vector<int>* seen = nullptr);

// Relocation parameter rule: one gaussian replaced by n identical copies.
// Returns the new opacity and the scale multiplier.
void relocation_params(Scalar alpha_old, int n, Scalar& alpha_new, Scalar& scale_factor);

// Per-gaussian mean over the sampled views of sum_pixels (alpha*T) * E, where
// E is the absolute Laplacian of the grayscale target.
std::vector<Scalar> edge_aware_scores(const GaussianCloud& cloud,
                                      const std::vector<TrainView>& views,
                                      const std::vector<std::size_t>& view_indices,
                                      const raster::RenderConfig& cfg);

// |laplacian| of the Rec.601 grayscale image; border pixels are zero.
Plane edge_map(const Image& img);

} // namespace splat::densify
