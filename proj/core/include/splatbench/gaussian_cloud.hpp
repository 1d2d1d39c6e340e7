// Copyright Contributors to the splatbench Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "splatbench/types.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace splat {

// Structure-of-arrays gaussian set. Stored parameters are the raw optimizer
// variables: log scales (activation exp), opacity logits (activation sigmoid),
// rotations as wxyz quaternions normalized inside the covariance computation.
// SH coefficients are band-major, DC first, RGB interleaved per coefficient:
// sh[g * K * 3 + k * 3 + c] with K = (degree + 1)^2.
struct GaussianCloud {
    int sh_degree = 0;
    std::vector<Vec3> means;
    std::vector<Vec3> log_scales;
    std::vector<Vec4> rotations; // w, x, y, z
    std::vector<Scalar> opacity_logits;
    std::vector<Scalar> sh;

    std::size_t size() const { return means.size(); }
    int sh_coeff_count() const { return (sh_degree + 1) * (sh_degree + 1); }

    Scalar* sh_at(std::size_t g) { return sh.data() + g * std::size_t(sh_coeff_count()) * 3; }
    const Scalar* sh_at(std::size_t g) const {
        return sh.data() + g * std::size_t(sh_coeff_count()) * 3;
    }

    Vec3 scale(std::size_t g) const { return log_scales[g].array().exp().matrix(); }
    Scalar opacity(std::size_t g) const { return sigmoid(opacity_logits[g]); }

    void resize(std::size_t n) {
        means.resize(n, Vec3::Zero());
        log_scales.resize(n, Vec3::Zero());
        rotations.resize(n, Vec4(1, 0, 0, 0));
        opacity_logits.resize(n, Scalar(0));
        sh.resize(n * std::size_t(sh_coeff_count()) * 3, Scalar(0));
    }

    // Appends row g of src. Degrees must match.
    void append_from(const GaussianCloud& src, std::size_t g) {
        if (src.sh_degree != sh_degree)
            throw std::invalid_argument("append_from: sh degree mismatch");
        means.push_back(src.means[g]);
        log_scales.push_back(src.log_scales[g]);
        rotations.push_back(src.rotations[g]);
        opacity_logits.push_back(src.opacity_logits[g]);
        const Scalar* s = src.sh_at(g);
        sh.insert(sh.end(), s, s + std::size_t(sh_coeff_count()) * 3);
    }

    // Compacts rows where keep[g] is true, preserving order.
    void keep_only(const std::vector<char>& keep) {
        if (keep.size() != size())
            throw std::invalid_argument("keep_only: mask length mismatch");
        std::size_t w = 0;
        std::size_t stride = std::size_t(sh_coeff_count()) * 3;
        for (std::size_t g = 0; g < size(); ++g) {
            if (!keep[g])
                continue;
            if (w != g) {
                means[w] = means[g];
                log_scales[w] = log_scales[g];
                rotations[w] = rotations[g];
                opacity_logits[w] = opacity_logits[g];
                for (std::size_t j = 0; j < stride; ++j)
                    sh[w * stride + j] = sh[g * stride + j];
            }
            ++w;
        }
        means.resize(w);
        log_scales.resize(w);
        rotations.resize(w);
        opacity_logits.resize(w);
        sh.resize(w * stride);
    }

    void check_consistent() const {
        std::size_t n = means.size();
        if (log_scales.size() != n || rotations.size() != n || opacity_logits.size() != n ||
            sh.size() != n * std::size_t(sh_coeff_count()) * 3)
            throw std::logic_error("GaussianCloud: array lengths out of sync");
    }
};

// Gradients with the same layout as the parameter arrays.
struct CloudGrads {
    std::vector<Vec3> means;
    std::vector<Vec3> log_scales;
    std::vector<Vec4> rotations;
    std::vector<Scalar> opacity_logits;
    std::vector<Scalar> sh;

    void resize_zero(const GaussianCloud& cloud) {
        means.assign(cloud.size(), Vec3::Zero());
        log_scales.assign(cloud.size(), Vec3::Zero());
        rotations.assign(cloud.size(), Vec4::Zero());
        opacity_logits.assign(cloud.size(), Scalar(0));
        sh.assign(cloud.sh.size(), Scalar(0));
    }
};

} // namespace splat
