// Copyright Contributors to the splatbench Project
// SPDX-License-Identifier: Apache-2.0
#include "splatbench/optim/loss.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace splat::optim {

namespace {

std::vector<Scalar> gaussian_kernel(int window, Scalar sigma) {
    std::vector<Scalar> k(window);
    Scalar sum = 0;
    const Scalar mid = Scalar(window - 1) / 2;
    for (int i = 0; i < window; ++i) {
        k[i] = std::exp(-(i - mid) * (i - mid) / (2 * sigma * sigma));
        sum += k[i];
    }
    for (Scalar& v : k)
        v /= sum;
    return k;
}

// Separable valid correlation: (H, W) -> (H - w + 1, W - w + 1).
void valid_corr(const std::vector<Scalar>& in, int H, int W, const std::vector<Scalar>& k,
                std::vector<Scalar>& out, std::vector<Scalar>& scratch) {
    const int w = int(k.size());
    const int Wo = W - w + 1, Ho = H - w + 1;
    scratch.assign(std::size_t(H) * Wo, 0);
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < Wo; ++x) {
            Scalar acc = 0;
            for (int j = 0; j < w; ++j)
                acc += k[j] * in[std::size_t(y) * W + x + j];
            scratch[std::size_t(y) * Wo + x] = acc;
        }
    out.assign(std::size_t(Ho) * Wo, 0);
    for (int y = 0; y < Ho; ++y)
        for (int x = 0; x < Wo; ++x) {
            Scalar acc = 0;
            for (int j = 0; j < w; ++j)
                acc += k[j] * scratch[std::size_t(y + j) * Wo + x];
            out[std::size_t(y) * Wo + x] = acc;
        }
}

// Adjoint of valid_corr: spreads a window-position field back onto pixels.
void adjoint_corr(const std::vector<Scalar>& field, int H, int W, const std::vector<Scalar>& k,
                  std::vector<Scalar>& out, std::vector<Scalar>& scratch) {
    const int w = int(k.size());
    const int Wo = W - w + 1, Ho = H - w + 1;
    scratch.assign(std::size_t(H) * Wo, 0);
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < Wo; ++x) {
            const int i0 = std::max(0, y - w + 1), i1 = std::min(Ho - 1, y);
            Scalar acc = 0;
            for (int i = i0; i <= i1; ++i)
                acc += k[y - i] * field[std::size_t(i) * Wo + x];
            scratch[std::size_t(y) * Wo + x] = acc;
        }
    out.assign(std::size_t(H) * W, 0);
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) {
            const int i0 = std::max(0, x - w + 1), i1 = std::min(Wo - 1, x);
            Scalar acc = 0;
            for (int i = i0; i <= i1; ++i)
                acc += k[x - i] * scratch[std::size_t(y) * Wo + i];
            out[std::size_t(y) * W + x] = acc;
        }
}

struct ChannelStats {
    int Ho = 0, Wo = 0;
    std::vector<Scalar> mu_x, mu_y, sxx, syy, sxy; // sxx etc. are raw second moments
};

ChannelStats window_stats(const std::vector<Scalar>& x, const std::vector<Scalar>& y, int H, int W,
                          const std::vector<Scalar>& k) {
    ChannelStats st;
    st.Ho = H - int(k.size()) + 1;
    st.Wo = W - int(k.size()) + 1;
    std::vector<Scalar> scratch, tmp(x.size());
    valid_corr(x, H, W, k, st.mu_x, scratch);
    valid_corr(y, H, W, k, st.mu_y, scratch);
    for (std::size_t i = 0; i < x.size(); ++i)
        tmp[i] = x[i] * x[i];
    valid_corr(tmp, H, W, k, st.sxx, scratch);
    for (std::size_t i = 0; i < x.size(); ++i)
        tmp[i] = y[i] * y[i];
    valid_corr(tmp, H, W, k, st.syy, scratch);
    for (std::size_t i = 0; i < x.size(); ++i)
        tmp[i] = x[i] * y[i];
    valid_corr(tmp, H, W, k, st.sxy, scratch);
    return st;
}

void extract_channel(const Image& img, int c, std::vector<Scalar>& out) {
    out.resize(img.pixel_count());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = img.data[i * 3 + c];
}

void check_shapes(const Image& a, const Image& b, const LossConfig& cfg) {
    if (!a.same_shape(b))
        throw std::invalid_argument("ssim/loss: image shapes differ");
    if (a.width < cfg.window || a.height < cfg.window)
        throw std::invalid_argument("ssim: image smaller than the SSIM window");
}

} // namespace

Scalar ssim(const Image& a, const Image& b, const LossConfig& cfg) {
    check_shapes(a, b, cfg);
    const auto k = gaussian_kernel(cfg.window, cfg.sigma);
    const Scalar C1 = cfg.k1 * cfg.k1, C2 = cfg.k2 * cfg.k2;
    Scalar total = 0;
    std::size_t count = 0;
    std::vector<Scalar> x, y;
    for (int c = 0; c < 3; ++c) {
        extract_channel(a, c, x);
        extract_channel(b, c, y);
        ChannelStats st = window_stats(x, y, a.height, a.width, k);
        for (std::size_t i = 0; i < st.mu_x.size(); ++i) {
            const Scalar mx = st.mu_x[i], my = st.mu_y[i];
            const Scalar vx = st.sxx[i] - mx * mx;
            const Scalar vy = st.syy[i] - my * my;
            const Scalar cxy = st.sxy[i] - mx * my;
            const Scalar A1 = 2 * mx * my + C1, A2 = 2 * cxy + C2;
            const Scalar B1 = mx * mx + my * my + C1, B2 = vx + vy + C2;
            total += (A1 * A2) / (B1 * B2);
        }
        count += st.mu_x.size();
    }
    return total / Scalar(count);
}

LossResult photometric_loss(const Image& render, const Image& target, const LossConfig& cfg) {
    check_shapes(render, target, cfg);
    LossResult res;
    res.grad = Image(render.width, render.height);

    const Scalar lam = cfg.lambda_ssim;
    const std::size_t entries = render.data.size();

    Scalar l1 = 0;
    for (std::size_t i = 0; i < entries; ++i) {
        const Scalar diff = render.data[i] - target.data[i];
        l1 += std::abs(diff);
        res.grad.data[i] = (1 - lam) * (diff > 0 ? Scalar(1) : (diff < 0 ? Scalar(-1) : Scalar(0))) /
                           Scalar(entries);
    }
    l1 /= Scalar(entries);
    res.l1 = l1;

    if (lam == 0) {
        res.ssim = 0;
        res.value = l1;
        return res;
    }

    const auto k = gaussian_kernel(cfg.window, cfg.sigma);
    const Scalar C1 = cfg.k1 * cfg.k1, C2 = cfg.k2 * cfg.k2;
    const int H = render.height, W = render.width;

    Scalar ssim_total = 0;
    std::size_t window_count = 0;
    std::vector<Scalar> x, y, P, Q, R, scratch;
    std::vector<Scalar> ssim_grad(render.data.size(), 0); // dS sums, scaled at the end
    for (int c = 0; c < 3; ++c) {
        extract_channel(render, c, x);
        extract_channel(target, c, y);
        ChannelStats st = window_stats(x, y, H, W, k);
        const std::size_t nw = st.mu_x.size();
        window_count += nw;
        P.assign(nw, 0);
        Q.assign(nw, 0);
        R.assign(nw, 0);
        for (std::size_t i = 0; i < nw; ++i) {
            const Scalar mx = st.mu_x[i], my = st.mu_y[i];
            const Scalar vx = st.sxx[i] - mx * mx;
            const Scalar vy = st.syy[i] - my * my;
            const Scalar cxy = st.sxy[i] - mx * my;
            const Scalar A1 = 2 * mx * my + C1, A2 = 2 * cxy + C2;
            const Scalar B1 = mx * mx + my * my + C1, B2 = vx + vy + C2;
            const Scalar S = (A1 * A2) / (B1 * B2);
            ssim_total += S;
            // Partials w.r.t. the raw window moments (mu_x, E[x^2], E[xy]).
            P[i] = 2 * my * S / A1 - 2 * mx * S / B1 - 2 * my * S / A2 + 2 * mx * S / B2;
            Q[i] = -S / B2;
            R[i] = 2 * S / A2;
        }
        std::vector<Scalar> adjP, adjQ, adjR;
        adjoint_corr(P, H, W, k, adjP, scratch);
        adjoint_corr(Q, H, W, k, adjQ, scratch);
        adjoint_corr(R, H, W, k, adjR, scratch);
        for (std::size_t i = 0; i < x.size(); ++i)
            ssim_grad[i * 3 + c] = adjP[i] + 2 * x[i] * adjQ[i] + y[i] * adjR[i];
    }

    // loss = (1-lam) L1 + lam (1 - mean S).
    const Scalar dldS = -lam / Scalar(window_count);
    for (std::size_t i = 0; i < res.grad.data.size(); ++i)
        res.grad.data[i] += dldS * ssim_grad[i];

    res.ssim = ssim_total / Scalar(window_count);
    res.value = (1 - lam) * l1 + lam * (1 - res.ssim);
    return res;
}

} // namespace splat::optim
