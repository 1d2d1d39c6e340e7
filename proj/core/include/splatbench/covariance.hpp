// Copyright Contributors to the splatbench Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "splatbench/types.hpp"

namespace splat {

// Rotation matrix of an unnormalized wxyz quaternion (normalized internally).
Mat3 quat_to_rotmat(const Vec4& q_raw);

// World covariance R diag(exp(log_scale)^2) R^T. Always symmetric PSD.
Mat3 covariance_from_params(const Vec3& log_scale, const Vec4& q_raw);

// Chain rule through covariance_from_params. dL_dcov is the full-matrix
// gradient (must already account for symmetry, i.e. off-diagonal entries carry
// half the packed gradient each). Gradients flow through the internal
// quaternion normalization, so q_raw need not be unit length.
void covariance_backward(const Vec3& log_scale, const Vec4& q_raw, const Mat3& dL_dcov,
                         Vec3& dL_dlog_scale, Vec4& dL_dq_raw);

} // namespace splat
