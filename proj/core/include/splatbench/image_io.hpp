// Copyright Contributors to the splatbench Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "splatbench/image.hpp"

#include <string>

namespace splat {

// 8-bit binary PPM (P6).
Image read_ppm(const std::string& path);
void write_ppm(const std::string& path, const Image& img);

// PFM, 32-bit floats. "PF" (color) maps to Image, "Pf" (grayscale) to Plane.
// Negative scale header means little-endian; rows are stored bottom-to-top.
Image read_pfm_color(const std::string& path);
Plane read_pfm(const std::string& path);
void write_pfm_color(const std::string& path, const Image& img);
void write_pfm(const std::string& path, const Plane& plane);

// Reads whichever of .ppm / .pfm the extension indicates.
Image read_image(const std::string& path);

} // namespace splat
