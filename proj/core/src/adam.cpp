// Copyright Contributors to the splatbench Project
// SPDX-License-Identifier: Apache-2.0
#include "splatbench/optim/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace splat::optim {

namespace {

template <typename T>
void filter_rows(std::vector<T>& v, const std::vector<char>& keep) {
    std::size_t w = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (keep[i])
            v[w++] = v[i];
    v.resize(w);
}

void filter_flat(std::vector<Scalar>& v, const std::vector<char>& keep, std::size_t stride) {
    std::size_t w = 0;
    for (std::size_t i = 0; i < keep.size(); ++i)
        if (keep[i]) {
            for (std::size_t j = 0; j < stride; ++j)
                v[w * stride + j] = v[i * stride + j];
            ++w;
        }
    v.resize(w * stride);
}

} // namespace

void AdamState::init(const GaussianCloud& cloud) {
    m_.resize_zero(cloud);
    v_.resize_zero(cloud);
    sh_coeffs_ = cloud.sh_coeff_count();
    step_count_ = 0;
}

void AdamState::step(GaussianCloud& cloud, const CloudGrads& grads, const GroupLrs& lrs,
                     const AdamConfig& cfg) {
    if (m_.means.size() != cloud.size())
        throw std::logic_error("AdamState: moment rows out of sync with cloud");
    ++step_count_;
    const Scalar bc1 = 1 - std::pow(cfg.beta1, Scalar(step_count_));
    const Scalar bc2 = 1 - std::pow(cfg.beta2, Scalar(step_count_));

    auto update = [&](Scalar& p, Scalar g, Scalar& m, Scalar& v, Scalar lr) {
        m = cfg.beta1 * m + (1 - cfg.beta1) * g;
        v = cfg.beta2 * v + (1 - cfg.beta2) * g * g;
        const Scalar mhat = m / bc1;
        const Scalar vhat = v / bc2;
        p -= lr * mhat / (std::sqrt(vhat) + cfg.eps);
    };

    const std::size_t n = cloud.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (int c = 0; c < 3; ++c) {
            update(cloud.means[i][c], grads.means[i][c], m_.means[i][c], v_.means[i][c], lrs.means);
            update(cloud.log_scales[i][c], grads.log_scales[i][c], m_.log_scales[i][c],
                   v_.log_scales[i][c], lrs.log_scales);
        }
        for (int c = 0; c < 4; ++c)
            update(cloud.rotations[i][c], grads.rotations[i][c], m_.rotations[i][c],
                   v_.rotations[i][c], lrs.rotations);
        update(cloud.opacity_logits[i], grads.opacity_logits[i], m_.opacity_logits[i],
               v_.opacity_logits[i], lrs.opacity);
        const std::size_t base = i * std::size_t(sh_coeffs_) * 3;
        for (int k = 0; k < sh_coeffs_; ++k) {
            const Scalar lr = k == 0 ? lrs.sh_dc : lrs.sh_rest;
            for (int c = 0; c < 3; ++c) {
                const std::size_t j = base + std::size_t(k) * 3 + c;
                update(cloud.sh[j], grads.sh[j], m_.sh[j], v_.sh[j], lr);
            }
        }
    }
}

void AdamState::keep_only(const std::vector<char>& keep) {
    if (keep.size() != m_.means.size())
        throw std::invalid_argument("AdamState::keep_only: mask length mismatch");
    for (CloudGrads* s : {&m_, &v_}) {
        filter_rows(s->means, keep);
        filter_rows(s->log_scales, keep);
        filter_rows(s->rotations, keep);
        filter_rows(s->opacity_logits, keep);
        filter_flat(s->sh, keep, std::size_t(sh_coeffs_) * 3);
    }
}

void AdamState::append_zero_rows(std::size_t n) {
    for (CloudGrads* s : {&m_, &v_}) {
        s->means.resize(s->means.size() + n, Vec3::Zero());
        s->log_scales.resize(s->log_scales.size() + n, Vec3::Zero());
        s->rotations.resize(s->rotations.size() + n, Vec4::Zero());
        s->opacity_logits.resize(s->opacity_logits.size() + n, Scalar(0));
        s->sh.resize(s->sh.size() + n * std::size_t(sh_coeffs_) * 3, Scalar(0));
    }
}

void AdamState::zero_rows(const std::vector<std::size_t>& rows) {
    for (CloudGrads* s : {&m_, &v_}) {
        for (std::size_t i : rows) {
            s->means[i].setZero();
            s->log_scales[i].setZero();
            s->rotations[i].setZero();
            s->opacity_logits[i] = 0;
            const std::size_t base = i * std::size_t(sh_coeffs_) * 3;
            for (std::size_t j = 0; j < std::size_t(sh_coeffs_) * 3; ++j)
                s->sh[base + j] = 0;
        }
    }
}

void AdamState::zero_opacity_rows() {
    for (CloudGrads* s : {&m_, &v_})
        for (Scalar& x : s->opacity_logits)
            x = 0;
}

} // namespace splat::optim
