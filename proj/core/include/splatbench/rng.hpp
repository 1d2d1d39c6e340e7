// Copyright Contributors to the splatbench Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "splatbench/types.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace splat {

// Seeded RNG used everywhere randomness is needed. One instance per run keeps
// logs bitwise reproducible for a fixed seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::mt19937_64& engine() { return gen_; }

    Scalar uniform(Scalar lo = 0, Scalar hi = 1) {
        std::uniform_real_distribution<Scalar> d(lo, hi);
        return d(gen_);
    }

    Scalar normal(Scalar mean = 0, Scalar stddev = 1) {
        std::normal_distribution<Scalar> d(mean, stddev);
        return d(gen_);
    }

    Vec3 normal3(Scalar stddev = 1) {
        return Vec3(normal(0, stddev), normal(0, stddev), normal(0, stddev));
    }

    // Uniform integer in [0, n).
    std::size_t index(std::size_t n) {
        std::uniform_int_distribution<std::size_t> d(0, n - 1);
        return d(gen_);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        std::shuffle(v.begin(), v.end(), gen_);
    }

    // k distinct indices drawn uniformly from [0, n), in ascending order.
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

    // One index drawn with probability weights[i] / sum(weights).
    std::size_t multinomial(const std::vector<Scalar>& weights);

    // k draws WITH replacement, each with probability proportional to weights.
    std::vector<std::size_t> multinomial_n(const std::vector<Scalar>& weights, std::size_t k);

    // k distinct indices drawn sequentially without replacement, each draw with
    // probability proportional to the remaining weights. Zero-weight entries are
    // never selected while positive-weight entries remain.
    std::vector<std::size_t> weighted_sample_without_replacement(std::vector<Scalar> weights,
                                                                 std::size_t k);

private:
    std::mt19937_64 gen_;
};

} // namespace splat
