// Copyright Contributors to the splatbench Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "splatbench/densify/strategy.hpp"

namespace splat::densify {

// Accumulated densification trigger statistics between events. Gradients are
// rescaled from pixel units to NDC-half-extent units (x W/2, x H/2) so the
// published thresholds apply unchanged.
struct TriggerState {
    std::vector<Scalar> grad_sum;
    std::vector<int> seen;
    std::vector<Scalar> max_radius;

    void reset(std::size_t n) {
        grad_sum.assign(n, 0);
        seen.assign(n, 0);
        max_radius.assign(n, 0);
    }

    void ensure(std::size_t n) {
        if (grad_sum.size() != n)
            reset(n);
    }

    // abs_mode: accumulate the absolute-value-accumulated gradient vector
    // (AbsGS); otherwise the plain summed vector.
    void accumulate(const Camera& cam, const raster::RenderOutput& fwd,
                    const raster::ViewspaceGrads& vgrads, bool abs_mode) {
        ensure(vgrads.summed.size());
        const Scalar sx = Scalar(cam.width) / 2, sy = Scalar(cam.height) / 2;
        for (std::size_t g = 0; g < grad_sum.size(); ++g) {
            if (!vgrads.visible[g])
                continue;
            const Vec2& v = abs_mode ? vgrads.abs[g] : vgrads.summed[g];
            grad_sum[g] += Vec2(v.x() * sx, v.y() * sy).norm();
            seen[g] += 1;
            max_radius[g] = std::max(max_radius[g], fwd.proj[g].radius);
        }
    }

    Scalar mean_grad(std::size_t g) const {
        return seen[g] > 0 ? grad_sum[g] / Scalar(seen[g]) : Scalar(0);
    }
};

// Schedule helpers shared by the strategies.
struct Schedule {
    int interval, start, stop, reset_interval;

    Schedule(const Config& cfg, int total_steps)
        : interval(cfg.interval), start(cfg.start),
          stop(cfg.stop < 0 ? total_steps / 2 : cfg.stop),
          reset_interval(cfg.opacity_reset_interval) {}

    bool densify_event(int step) const {
        return step >= start && step <= stop && step % interval == 0;
    }
    bool reset_event(int step) const {
        return reset_interval > 0 && step > 0 && step <= stop && step % reset_interval == 0;
    }
    // 1-based index of a densify event and the total event count.
    int event_index(int step) const { return (step - first_event()) / interval + 1; }
    int event_count() const {
        return stop < first_event() ? 0 : (stop - first_event()) / interval + 1;
    }

private:
    int first_event() const {
        int f = (start + interval - 1) / interval * interval;
        return f < interval ? interval : f;
    }
};

// Lowers alpha to min(alpha, reset_value) and zeroes the opacity moments.
void reset_opacity(GaussianCloud& cloud, optim::AdamState& adam, Scalar reset_value);

class NoneStrategy final : public Strategy {
public:
    explicit NoneStrategy(const Config& cfg) : cfg_(cfg) {}
    void after_backward(const StepContext&, const Camera& cam, const raster::RenderOutput& fwd,
                        const raster::ViewspaceGrads& vgrads, CloudGrads&) override;
    MutationReport after_step(StepContext& ctx) override;

private:
    Config cfg_;
    TriggerState state_;
};

class AbsGsStrategy final : public Strategy {
public:
    explicit AbsGsStrategy(const Config& cfg) : cfg_(cfg) {}
    void after_backward(const StepContext&, const Camera& cam, const raster::RenderOutput& fwd,
                        const raster::ViewspaceGrads& vgrads, CloudGrads&) override;
    MutationReport after_step(StepContext& ctx) override;

private:
    Config cfg_;
    TriggerState state_;
};

class McmcStrategy final : public Strategy {
public:
    explicit McmcStrategy(const Config& cfg) : cfg_(cfg) {}
    void after_backward(const StepContext& ctx, const Camera&, const raster::RenderOutput&,
                        const raster::ViewspaceGrads&, CloudGrads& grads) override;
    MutationReport after_step(StepContext& ctx) override;

private:
    Config cfg_;
};

class IdhfrStrategy final : public Strategy {
public:
    explicit IdhfrStrategy(const Config& cfg) : cfg_(cfg) {}
    void after_backward(const StepContext& ctx, const Camera& cam,
                        const raster::RenderOutput& fwd, const raster::ViewspaceGrads& vgrads,
                        CloudGrads&) override;
    MutationReport after_step(StepContext& ctx) override;
    int accumulation_window(int step, int total_steps) const override;

private:
    Config cfg_;
    TriggerState state_;
    std::size_t initial_n_ = 0; // cloud size at the first training step
    int pending_prune_step_ = -1;
};

// The single-candidate structural edit batch used by AbsGS (and, for splits,
// by IDHFR): clones duplicate the row, splits replace the parent with two
// children sampled from its own density with shrunken scales.
struct EditBatch {
    std::vector<char> keep;           // existing rows to keep
    GaussianCloud additions;          // appended rows
    std::size_t cloned = 0, split = 0;

    explicit EditBatch(const GaussianCloud& cloud) : keep(cloud.size(), 1) {
        additions.sh_degree = cloud.sh_degree;
    }
    void apply(GaussianCloud& cloud, optim::AdamState& adam) const;
};

} // namespace splat::densify
