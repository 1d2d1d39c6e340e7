// Copyright Contributors to the splatbench Project
// SPDX-License-Identifier: Apache-2.0
#include "splatbench/rng.hpp"

#include <numeric>

namespace splat {

std::vector<std::size_t> Rng::sample_without_replacement(std::size_t n, std::size_t k) {
    if (k > n)
        throw std::invalid_argument("sample_without_replacement: k > n");
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::vector<std::size_t> out;
    out.reserve(k);
    std::sample(all.begin(), all.end(), std::back_inserter(out), k, gen_);
    return out;
}

std::size_t Rng::multinomial(const std::vector<Scalar>& weights) {
    Scalar total = std::accumulate(weights.begin(), weights.end(), Scalar(0));
    if (!(total > 0))
        throw std::invalid_argument("multinomial: weights must have positive sum");
    Scalar r = uniform(0, total);
    Scalar acc = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (r < acc)
            return i;
    }
    // r landed on the trailing rounding gap; return the last positive-weight entry.
    for (std::size_t i = weights.size(); i-- > 0;)
        if (weights[i] > 0)
            return i;
    return weights.size() - 1;
}

std::vector<std::size_t> Rng::multinomial_n(const std::vector<Scalar>& weights, std::size_t k) {
    std::vector<std::size_t> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i)
        out.push_back(multinomial(weights));
    return out;
}

std::vector<std::size_t> Rng::weighted_sample_without_replacement(std::vector<Scalar> weights,
                                                                  std::size_t k) {
    std::size_t positive = 0;
    for (Scalar w : weights) {
        if (w < 0)
            throw std::invalid_argument("weighted_sample_without_replacement: negative weight");
        if (w > 0)
            ++positive;
    }
    if (k > positive)
        throw std::invalid_argument("weighted_sample_without_replacement: k exceeds positive-weight entries");
    std::vector<std::size_t> out;
    out.reserve(k);
    for (std::size_t draw = 0; draw < k; ++draw) {
        std::size_t idx = multinomial(weights);
        out.push_back(idx);
        weights[idx] = 0;
    }
    return out;
}

} // namespace splat
