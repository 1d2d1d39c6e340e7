// Copyright Contributors to the splatbench Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "splatbench/gaussian_cloud.hpp"

#include <cstdint>
#include <vector>

namespace splat::optim {

struct AdamConfig {
    Scalar beta1 = Scalar(0.9);
    Scalar beta2 = Scalar(0.999);
    Scalar eps = Scalar(1e-15);
};

// Per-group learning rates for one optimizer step. The means rate is the
// already-scheduled value (scene-extent scaling and decay applied by the
// caller).
struct GroupLrs {
    Scalar means = 0;
    Scalar log_scales = Scalar(5e-3);
    Scalar rotations = Scalar(1e-3);
    Scalar opacity = Scalar(5e-2);
    Scalar sh_dc = Scalar(2.5e-3);
    Scalar sh_rest = Scalar(2.5e-3) / 20;
};

// Adam moments in cloud layout. Row edits must mirror every structural edit of
// the cloud so that moments stay aligned with parameters.
class AdamState {
public:
    void init(const GaussianCloud& cloud);
    bool initialized() const { return sh_coeffs_ > 0; }
    std::size_t rows() const { return m_.means.size(); }

    // One Adam update over all parameter groups. SH coefficient 0 uses the dc
    // rate, the rest use sh_rest. Bias correction uses a global step counter.
    void step(GaussianCloud& cloud, const CloudGrads& grads, const GroupLrs& lrs,
              const AdamConfig& cfg);

    void keep_only(const std::vector<char>& keep);
    void append_zero_rows(std::size_t n);
    void zero_rows(const std::vector<std::size_t>& rows);
    // Zeroes only the opacity moments (used by opacity resets).
    void zero_opacity_rows();

    std::int64_t step_count() const { return step_count_; }

private:
    CloudGrads m_, v_;
    std::int64_t step_count_ = 0;
    int sh_coeffs_ = 0; // coefficients per gaussian (K), for row-wise edits
};

} // namespace splat::optim
