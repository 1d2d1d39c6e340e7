// Copyright Contributors to the splatbench Project
// SPDX-License-Identifier: Apache-2.0
#include "splatbench/sh.hpp"

#include <stdexcept>

namespace splat {

void sh_basis(int degree, const Vec3& dir, Scalar* basis) {
    if (degree < 0 || degree > 3)
        throw std::invalid_argument("sh_basis: degree must be in [0, 3]");
    const Scalar x = dir.x(), y = dir.y(), z = dir.z();
    basis[0] = Scalar(SH_C0);
    if (degree < 1)
        return;
    basis[1] = Scalar(-SH_C1) * y;
    basis[2] = Scalar(SH_C1) * z;
    basis[3] = Scalar(-SH_C1) * x;
    if (degree < 2)
        return;
    const Scalar xx = x * x, yy = y * y, zz = z * z;
    const Scalar xy = x * y, yz = y * z, xz = x * z;
    basis[4] = Scalar(SH_C2[0]) * xy;
    basis[5] = Scalar(SH_C2[1]) * yz;
    basis[6] = Scalar(SH_C2[2]) * (2 * zz - xx - yy);
    basis[7] = Scalar(SH_C2[3]) * xz;
    basis[8] = Scalar(SH_C2[4]) * (xx - yy);
    if (degree < 3)
        return;
    basis[9] = Scalar(SH_C3[0]) * y * (3 * xx - yy);
    basis[10] = Scalar(SH_C3[1]) * xy * z;
    basis[11] = Scalar(SH_C3[2]) * y * (4 * zz - xx - yy);
    basis[12] = Scalar(SH_C3[3]) * z * (2 * zz - 3 * xx - 3 * yy);
    basis[13] = Scalar(SH_C3[4]) * x * (4 * zz - xx - yy);
    basis[14] = Scalar(SH_C3[5]) * z * (xx - yy);
    basis[15] = Scalar(SH_C3[6]) * x * (xx - 3 * yy);
}

Vec3 sh_evaluate(int degree, const Vec3& dir, const Scalar* sh, bool* clamped) {
    Scalar basis[16];
    sh_basis(degree, dir, basis);
    const int K = sh_coeff_count(degree);
    Vec3 color = Vec3::Zero();
    for (int k = 0; k < K; ++k)
        for (int c = 0; c < 3; ++c)
            color[c] += basis[k] * sh[k * 3 + c];
    color.array() += Scalar(0.5);
    for (int c = 0; c < 3; ++c) {
        bool clip = color[c] < 0;
        if (clamped)
            clamped[c] = clip;
        if (clip)
            color[c] = 0;
    }
    return color;
}

void sh_basis_grad(int degree, const Vec3& dir, Vec3* dbasis) {
    if (degree < 0 || degree > 3)
        throw std::invalid_argument("sh_basis_grad: degree must be in [0, 3]");
    const Scalar x = dir.x(), y = dir.y(), z = dir.z();
    dbasis[0] = Vec3::Zero();
    if (degree < 1)
        return;
    dbasis[1] = Vec3(0, -SH_C1, 0);
    dbasis[2] = Vec3(0, 0, SH_C1);
    dbasis[3] = Vec3(-SH_C1, 0, 0);
    if (degree < 2)
        return;
    const Scalar xx = x * x, yy = y * y, zz = z * z;
    dbasis[4] = Scalar(SH_C2[0]) * Vec3(y, x, 0);
    dbasis[5] = Scalar(SH_C2[1]) * Vec3(0, z, y);
    dbasis[6] = Scalar(SH_C2[2]) * Vec3(-2 * x, -2 * y, 4 * z);
    dbasis[7] = Scalar(SH_C2[3]) * Vec3(z, 0, x);
    dbasis[8] = Scalar(SH_C2[4]) * Vec3(2 * x, -2 * y, 0);
    if (degree < 3)
        return;
    dbasis[9] = Scalar(SH_C3[0]) * Vec3(6 * x * y, 3 * xx - 3 * yy, 0);
    dbasis[10] = Scalar(SH_C3[1]) * Vec3(y * z, x * z, x * y);
    dbasis[11] = Scalar(SH_C3[2]) * Vec3(-2 * x * y, 4 * zz - xx - 3 * yy, 8 * y * z);
    dbasis[12] = Scalar(SH_C3[3]) * Vec3(-6 * x * z, -6 * y * z, 6 * zz - 3 * xx - 3 * yy);
    dbasis[13] = Scalar(SH_C3[4]) * Vec3(4 * zz - 3 * xx - yy, -2 * x * y, 8 * x * z);
    dbasis[14] = Scalar(SH_C3[5]) * Vec3(2 * x * z, -2 * y * z, xx - yy);
    dbasis[15] = Scalar(SH_C3[6]) * Vec3(3 * xx - 3 * yy, -6 * x * y, 0);
}

} // namespace splat
