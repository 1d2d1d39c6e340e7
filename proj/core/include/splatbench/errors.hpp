// Copyright Contributors to the splatbench Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace splat {

// File-format violation. Carries the byte offset at which parsing failed.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& file, std::size_t byte_offset, const std::string& what)
        : std::runtime_error(file + ": byte " + std::to_string(byte_offset) + ": " + what),
          byte_offset_(byte_offset) {}

    std::size_t byte_offset() const { return byte_offset_; }

private:
    std::size_t byte_offset_;
};

// Depth-to-SfM alignment could not be established (degenerate or rejected fit).
class AlignmentError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace splat
