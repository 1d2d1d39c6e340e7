// Copyright Contributors to the splatbench Project
// SPDX-License-Identifier: Apache-2.0
#include "splatbench/covariance.hpp"

#include <stdexcept>

namespace splat {

namespace {

Mat3 rotmat_unit(Scalar w, Scalar x, Scalar y, Scalar z) {
    Mat3 R;
    R << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
        2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
        2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
    return R;
}

// dR/dq_c for a unit quaternion, c in {w, x, y, z}.
void rotmat_partials(Scalar w, Scalar x, Scalar y, Scalar z, Mat3 dR[4]) {
    dR[0] << 0, -z, y, z, 0, -x, -y, x, 0;
    dR[1] << 0, y, z, y, -2 * x, -w, z, w, -2 * x;
    dR[2] << -2 * y, x, w, x, 0, z, -w, z, -2 * y;
    dR[3] << -2 * z, -w, x, w, -2 * z, y, x, y, 0;
    for (int c = 0; c < 4; ++c)
        dR[c] *= Scalar(2);
}

} // namespace

Mat3 quat_to_rotmat(const Vec4& q_raw) {
    Scalar n = q_raw.norm();
    if (!(n > 0))
        throw std::invalid_argument("quat_to_rotmat: zero quaternion");
    Vec4 q = q_raw / n;
    return rotmat_unit(q[0], q[1], q[2], q[3]);
}

Mat3 covariance_from_params(const Vec3& log_scale, const Vec4& q_raw) {
    Mat3 R = quat_to_rotmat(q_raw);
    Vec3 s = log_scale.array().exp().matrix();
    Mat3 M = R * s.asDiagonal();
    return M * M.transpose();
}

void covariance_backward(const Vec3& log_scale, const Vec4& q_raw, const Mat3& dL_dcov,
                         Vec3& dL_dlog_scale, Vec4& dL_dq_raw) {
    Scalar n = q_raw.norm();
    if (!(n > 0))
        throw std::invalid_argument("covariance_backward: zero quaternion");
    Vec4 q = q_raw / n;
    Mat3 R = rotmat_unit(q[0], q[1], q[2], q[3]);
    Vec3 s = log_scale.array().exp().matrix();
    Mat3 M = R * s.asDiagonal();

    // Sigma = M M^T, so dL/dM = (G + G^T) M.
    Mat3 G = dL_dcov;
    Mat3 dL_dM = (G + G.transpose()) * M;

    Mat3 dL_dR = dL_dM * s.asDiagonal();
    Vec3 dL_ds = (R.transpose() * dL_dM).diagonal();
    dL_dlog_scale = dL_ds.cwiseProduct(s);

    Mat3 dR[4];
    rotmat_partials(q[0], q[1], q[2], q[3], dR);
    Vec4 dL_dq_unit;
    for (int c = 0; c < 4; ++c)
        dL_dq_unit[c] = (dL_dR.array() * dR[c].array()).sum();

    // Through normalization: dq_unit/dq_raw = (I - q q^T) / |q_raw|.
    dL_dq_raw = (dL_dq_unit - q * q.dot(dL_dq_unit)) / n;
}

} // namespace splat
