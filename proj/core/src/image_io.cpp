// Copyright Contributors to the splatbench Project
// SPDX-License-Identifier: Apache-2.0
#include "splatbench/image_io.hpp"

#include "splatbench/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace splat {

namespace {

[[noreturn]] void fail(const std::string& path, std::istream& in, const std::string& msg) {
    auto pos = in.tellg();
    throw ParseError(path, pos < 0 ? 0 : std::size_t(pos), msg);
}

// Skips whitespace and PNM '#' comment lines, then reads one token.
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.peek()) != EOF) {
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            break;
        }
    }
    in >> tok;
    return tok;
}

bool host_is_little_endian() {
    return std::endian::native == std::endian::little;
}

void byteswap_floats(std::vector<float>& v) {
    for (float& f : v) {
        std::uint32_t u;
        std::memcpy(&u, &f, 4);
        u = __builtin_bswap32(u);
        std::memcpy(&f, &u, 4);
    }
}

std::vector<float> read_pfm_payload(const std::string& path, std::ifstream& in, bool color,
                                    int& width, int& height) {
    std::string magic = next_token(in);
    const char* want = color ? "PF" : "Pf";
    if (magic != want)
        fail(path, in, "expected PFM magic '" + std::string(want) + "', got '" + magic + "'");
    width = std::stoi(next_token(in));
    height = std::stoi(next_token(in));
    double scale = std::stod(next_token(in));
    if (width <= 0 || height <= 0)
        fail(path, in, "non-positive PFM dimensions");
    in.get(); // single whitespace byte after the scale line
    std::size_t n = std::size_t(width) * height * (color ? 3 : 1);
    std::vector<float> raw(n);
    in.read(reinterpret_cast<char*>(raw.data()), std::streamsize(n * 4));
    if (!in)
        fail(path, in, "truncated PFM payload");
    bool file_le = scale < 0;
    if (file_le != host_is_little_endian())
        byteswap_floats(raw);
    return raw;
}

void write_pfm_payload(const std::string& path, const char* magic, int width, int height,
                       const std::vector<float>& rows_top_down, int channels) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path);
    double scale = host_is_little_endian() ? -1.0 : 1.0;
    out << magic << "\n" << width << " " << height << "\n" << scale << "\n";
    // PFM stores rows bottom-to-top.
    std::size_t row_elems = std::size_t(width) * channels;
    for (int y = height - 1; y >= 0; --y)
        out.write(reinterpret_cast<const char*>(rows_top_down.data() + std::size_t(y) * row_elems),
                  std::streamsize(row_elems * 4));
    if (!out)
        throw std::runtime_error("write failed: " + path);
}

} // namespace

Image read_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open: " + path);
    std::string magic = next_token(in);
    if (magic != "P6")
        fail(path, in, "expected PPM magic 'P6', got '" + magic + "'");
    int width = std::stoi(next_token(in));
    int height = std::stoi(next_token(in));
    int maxval = std::stoi(next_token(in));
    if (width <= 0 || height <= 0)
        fail(path, in, "non-positive PPM dimensions");
    if (maxval != 255)
        fail(path, in, "only maxval 255 PPM supported");
    in.get();
    std::vector<unsigned char> raw(std::size_t(width) * height * 3);
    in.read(reinterpret_cast<char*>(raw.data()), std::streamsize(raw.size()));
    if (!in)
        fail(path, in, "truncated PPM payload");
    Image img(width, height);
    for (std::size_t i = 0; i < raw.size(); ++i)
        img.data[i] = Scalar(raw[i]) / Scalar(255);
    return img;
}

void write_ppm(const std::string& path, const Image& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path);
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    std::vector<unsigned char> raw(img.data.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        Scalar v = std::clamp(img.data[i], Scalar(0), Scalar(1));
        raw[i] = static_cast<unsigned char>(std::lround(double(v) * 255.0));
    }
    out.write(reinterpret_cast<const char*>(raw.data()), std::streamsize(raw.size()));
    if (!out)
        throw std::runtime_error("write failed: " + path);
}

Image read_pfm_color(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open: " + path);
    int w = 0, h = 0;
    std::vector<float> raw = read_pfm_payload(path, in, true, w, h);
    Image img(w, h);
    // File rows are bottom-to-top.
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < 3; ++c)
                img.at(y, x, c) = Scalar(raw[(std::size_t(h - 1 - y) * w + x) * 3 + c]);
    return img;
}

Plane read_pfm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open: " + path);
    int w = 0, h = 0;
    std::vector<float> raw = read_pfm_payload(path, in, false, w, h);
    Plane p(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            p.at(y, x) = Scalar(raw[std::size_t(h - 1 - y) * w + x]);
    return p;
}

void write_pfm_color(const std::string& path, const Image& img) {
    std::vector<float> rows(img.data.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        rows[i] = float(img.data[i]);
    write_pfm_payload(path, "PF", img.width, img.height, rows, 3);
}

void write_pfm(const std::string& path, const Plane& plane) {
    std::vector<float> rows(plane.data.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        rows[i] = float(plane.data[i]);
    write_pfm_payload(path, "Pf", plane.width, plane.height, rows, 1);
}

Image read_image(const std::string& path) {
    auto dot = path.rfind('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot);
    if (ext == ".ppm")
        return read_ppm(path);
    if (ext == ".pfm")
        return read_pfm_color(path);
    throw std::runtime_error("unsupported image extension (want .ppm or .pfm): " + path);
}

} // namespace splat
