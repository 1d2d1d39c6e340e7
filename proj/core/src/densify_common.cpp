// Copyright Contributors to the splatbench Project
// SPDX-License-Identifier: Apache-2.0
#include "densify_impl.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace splat::densify {

Kind kind_from_string(const std::string& s) {
    if (s == "none")
        return Kind::None;
    if (s == "absgs")
        return Kind::AbsGS;
    if (s == "mcmc")
        return Kind::MCMC;
    if (s == "idhfr")
        return Kind::IDHFR;
    throw std::invalid_argument("unknown densification strategy: " + s);
}

std::string to_string(Kind k) {
    switch (k) {
    case Kind::None: return "none";
    case Kind::AbsGS: return "absgs";
    case Kind::MCMC: return "mcmc";
    case Kind::IDHFR: return "idhfr";
    }
    return "?";
}

std::unique_ptr<Strategy> make_strategy(const Config& cfg) {
    switch (cfg.kind) {
    case Kind::None: return std::make_unique<NoneStrategy>(cfg);
    case Kind::AbsGS: return std::make_unique<AbsGsStrategy>(cfg);
    case Kind::MCMC: return std::make_unique<McmcStrategy>(cfg);
    case Kind::IDHFR: return std::make_unique<IdhfrStrategy>(cfg);
    }
    throw std::logic_error("make_strategy: bad kind");
}

void reset_opacity(GaussianCloud& cloud, optim::AdamState& adam, Scalar reset_value) {
    const Scalar cap_logit = logit(reset_value);
    for (Scalar& l : cloud.opacity_logits)
        l = std::min(l, cap_logit);
    adam.zero_opacity_rows();
}

std::size_t prune(GaussianCloud& cloud, optim::AdamState& adam, const Config& cfg, int step,
                  Scalar scene_extent, std::vector<Scalar>& max_radius,
                  std::vector<Scalar>* stat_accum, std::vector<int>* seen) {
    const std::size_t n = cloud.size();
    const bool size_culls = step > cfg.opacity_reset_interval;
    std::vector<char> keep(n, 1);
    std::size_t removed = 0;
    for (std::size_t g = 0; g < n; ++g) {
        bool drop = cloud.opacity(g) < cfg.prune_alpha;
        if (!drop && size_culls) {
            if (cloud.scale(g).maxCoeff() > cfg.world_size_fraction * scene_extent)
                drop = true;
            else if (g < max_radius.size() && max_radius[g] > cfg.screen_size_px)
                drop = true;
        }
        if (drop) {
            keep[g] = 0;
            ++removed;
        }
    }
    if (removed == 0)
        return 0;
    cloud.keep_only(keep);
    adam.keep_only(keep);
    auto filter = [&keep](auto& v) {
        if (v.size() != keep.size())
            return; // aux array not tracked at cloud granularity
        std::size_t w = 0;
        for (std::size_t i = 0; i < keep.size(); ++i)
            if (keep[i])
                v[w++] = v[i];
        v.resize(w);
    };
    filter(max_radius);
    if (stat_accum)
        filter(*stat_accum);
    if (seen)
        filter(*seen);
    return removed;
}

void relocation_params(Scalar alpha_old, int n, Scalar& alpha_new, Scalar& scale_factor) {
    if (!(alpha_old > 0 && alpha_old < 1))
        throw std::invalid_argument("relocation_params: alpha_old must be in (0, 1)");
    if (n < 1)
        throw std::invalid_argument("relocation_params: n must be >= 1");
    n = std::min(n, 51); // binomial row stays exactly representable
    alpha_new = 1 - std::pow(Scalar(1) - alpha_old, Scalar(1) / Scalar(n));

    // denom = sum_{i=1..n} sum_{k=0..i-1} C(i-1,k) (-1)^k alpha_new^{k+1} / sqrt(k+1)
    Scalar denom = 0;
    std::vector<double> binom(1, 1.0); // row C(i-1, .)
    for (int i = 1; i <= n; ++i) {
        for (int k = 0; k < i; ++k)
            denom += Scalar(binom[std::size_t(k)]) * Scalar(k % 2 == 0 ? 1 : -1) *
                     std::pow(alpha_new, Scalar(k + 1)) / std::sqrt(Scalar(k + 1));
        std::vector<double> next(binom.size() + 1, 1.0);
        for (std::size_t j = 1; j + 1 < next.size(); ++j)
            next[j] = binom[j - 1] + binom[j];
        binom.swap(next);
    }
    scale_factor = alpha_old / denom;
}

Plane edge_map(const Image& img) {
    Plane e(img.width, img.height, 0);
    auto gray = [&img](int y, int x) {
        return Scalar(0.299) * img.at(y, x, 0) + Scalar(0.587) * img.at(y, x, 1) +
               Scalar(0.114) * img.at(y, x, 2);
    };
    for (int y = 1; y + 1 < img.height; ++y)
        for (int x = 1; x + 1 < img.width; ++x) {
            const Scalar lap = gray(y - 1, x) + gray(y + 1, x) + gray(y, x - 1) + gray(y, x + 1) -
                               4 * gray(y, x);
            e.at(y, x) = std::abs(lap);
        }
    return e;
}

std::vector<Scalar> edge_aware_scores(const GaussianCloud& cloud,
                                      const std::vector<TrainView>& views,
                                      const std::vector<std::size_t>& view_indices,
                                      const raster::RenderConfig& cfg) {
    if (view_indices.empty())
        throw std::invalid_argument("edge_aware_scores: no views");
    std::vector<Scalar> scores(cloud.size(), 0);
    for (std::size_t vi : view_indices) {
        const TrainView& view = views.at(vi);
        const Plane e = edge_map(view.target);
        const auto sums = raster::accumulate_pixel_weights(cloud, view.cam, cfg, e);
        for (std::size_t g = 0; g < scores.size(); ++g)
            scores[g] += sums[g];
    }
    for (Scalar& s : scores)
        s /= Scalar(view_indices.size());
    return scores;
}

void EditBatch::apply(GaussianCloud& cloud, optim::AdamState& adam) const {
    cloud.keep_only(keep);
    adam.keep_only(keep);
    const std::size_t n_add = additions.size();
    for (std::size_t i = 0; i < n_add; ++i)
        cloud.append_from(additions, i);
    adam.append_zero_rows(n_add);
    cloud.check_consistent();
}

} // namespace splat::densify
