// Copyright Contributors to the splatbench Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "splatbench/types.hpp"

#include <array>

namespace splat {

// Real spherical harmonics constants, band-major ordering, degree <= 3.
inline constexpr double SH_C0 = 0.28209479177387814;
inline constexpr double SH_C1 = 0.4886025119029199;
inline constexpr std::array<double, 5> SH_C2 = {1.0925484305920792, -1.0925484305920792,
                                                0.31539156525252005, -1.0925484305920792,
                                                0.5462742152960396};
inline constexpr std::array<double, 7> SH_C3 = {-0.5900435899266435, 2.890611442640554,
                                                -0.4570457994644658, 0.3731763325901154,
                                                -0.4570457994644658, 1.445305721320277,
                                                -0.5900435899266435};

inline constexpr int sh_coeff_count(int degree) { return (degree + 1) * (degree + 1); }

// Fills basis[k] for k < (degree+1)^2 at unit direction dir.
void sh_basis(int degree, const Vec3& dir, Scalar* basis);

// View-dependent color: clamp(sum_k basis_k * sh[k*3 + c] + 0.5, >= 0).
// If clamped != nullptr, clamped[c] records whether channel c hit the clamp
// (needed to gate gradients).
Vec3 sh_evaluate(int degree, const Vec3& dir, const Scalar* sh, bool* clamped = nullptr);

// d(basis_k)/d(dir) for every k; dir must be unit length. Derivatives are taken
// w.r.t. the unnormalized components (normalization handled by the caller).
void sh_basis_grad(int degree, const Vec3& dir, Vec3* dbasis);

// DC coefficient that makes sh_evaluate return `color` when all higher bands
// are zero.
inline Vec3 rgb_to_sh_dc(const Vec3& color) {
    return (color.array() - Scalar(0.5)).matrix() / Scalar(SH_C0);
}

inline Vec3 sh_dc_to_rgb(const Vec3& dc) {
    return (dc.array() * Scalar(SH_C0) + Scalar(0.5)).matrix();
}

} // namespace splat
