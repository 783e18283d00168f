#pragma once

#include <array>
#include <cmath>

#include "auif/tensor.hpp"

namespace auif {

// ---------------------------------------------------------------------------
// pixel (l2) loss, mean over elements
// ---------------------------------------------------------------------------

template <class T>
T l2_loss(const Tensor4<T>& x, const Tensor4<T>& xhat) {
    require_same_dims(x, xhat, "l2_loss");
    T acc = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        T d = xhat.data[i] - x.data[i];
        acc += d * d;
    }
    return acc / static_cast<T>(x.size());
}

/// d l2 / d xhat (the gradient w.r.t. x is the negation).
template <class T>
Tensor4<T> l2_loss_backward(const Tensor4<T>& x, const Tensor4<T>& xhat, T upstream = T(1)) {
    require_same_dims(x, xhat, "l2_loss_backward");
    Tensor4<T> g(x.n, x.c, x.h, x.w);
    const T s = T(2) * upstream / static_cast<T>(x.size());
    for (size_t i = 0; i < x.size(); ++i) g.data[i] = s * (xhat.data[i] - x.data[i]);
    return g;
}

// ---------------------------------------------------------------------------
// windowed SSIM (11x11 Gaussian window, sigma 1.5, L = 1)
// ---------------------------------------------------------------------------

inline constexpr int kSsimWindow = 11;
inline constexpr double kSsimSigma = 1.5;
inline constexpr double kSsimK1 = 0.01;
inline constexpr double kSsimK2 = 0.03;

template <class T>
const std::array<T, kSsimWindow * kSsimWindow>& ssim_window() {
    static const auto win = [] {
        std::array<T, kSsimWindow * kSsimWindow> w{};
        const int r = kSsimWindow / 2;
        double sum = 0;
        for (int i = 0; i < kSsimWindow; ++i)
            for (int j = 0; j < kSsimWindow; ++j) {
                double d2 = (i - r) * double(i - r) + (j - r) * double(j - r);
                double v = std::exp(-d2 / (2.0 * kSsimSigma * kSsimSigma));
                w[i * kSsimWindow + j] = static_cast<T>(v);
                sum += v;
            }
        for (auto& v : w) v = static_cast<T>(v / sum);
        return w;
    }();
    return win;
}

/// Mean local SSIM over all valid window positions of every (n,c) plane.
/// When da/db are non-null they receive the gradients (overwritten).
template <class T>
T ssim_grad(const Tensor4<T>& a, const Tensor4<T>& b, Tensor4<T>* da, Tensor4<T>* db) {
    require_same_dims(a, b, "ssim");
    if (a.h < kSsimWindow || a.w < kSsimWindow)
        throw std::invalid_argument("ssim: image " + a.dims_str() + " smaller than the " +
                                    std::to_string(kSsimWindow) + "x" +
                                    std::to_string(kSsimWindow) + " window");
    const auto& win = ssim_window<T>();
    const T c1 = static_cast<T>(kSsimK1 * kSsimK1);  // L = 1
    const T c2 = static_cast<T>(kSsimK2 * kSsimK2);
    const int oh = a.h - kSsimWindow + 1, ow = a.w - kSsimWindow + 1;
    const size_t planes = static_cast<size_t>(a.n) * a.c;
    const T norm = T(1) / (static_cast<T>(planes) * oh * ow);

    if (da) *da = Tensor4<T>(a.n, a.c, a.h, a.w);
    if (db) *db = Tensor4<T>(a.n, a.c, a.h, a.w);

    T total = 0;
    for (size_t pl = 0; pl < planes; ++pl) {
        const T* pa = a.data.data() + pl * a.h * a.w;
        const T* pb = b.data.data() + pl * a.h * a.w;
        T* ga = da ? da->data.data() + pl * a.h * a.w : nullptr;
        T* gb = db ? db->data.data() + pl * a.h * a.w : nullptr;
        for (int py = 0; py < oh; ++py)
            for (int px = 0; px < ow; ++px) {
                T sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
                for (int i = 0; i < kSsimWindow; ++i) {
                    const T* ra = pa + static_cast<size_t>(py + i) * a.w + px;
                    const T* rb = pb + static_cast<size_t>(py + i) * a.w + px;
                    const T* rw = win.data() + i * kSsimWindow;
                    for (int j = 0; j < kSsimWindow; ++j) {
                        sa += rw[j] * ra[j];
                        sb += rw[j] * rb[j];
                        saa += rw[j] * ra[j] * ra[j];
                        sbb += rw[j] * rb[j] * rb[j];
                        sab += rw[j] * ra[j] * rb[j];
                    }
                }
                const T va = saa - sa * sa, vb = sbb - sb * sb, cov = sab - sa * sb;
                const T a1 = 2 * sa * sb + c1, a2 = 2 * cov + c2;
                const T b1 = sa * sa + sb * sb + c1, b2 = va + vb + c2;
                const T denom = b1 * b2;
                const T s = a1 * a2 / denom;
                total += s;
                if (ga) {
                    const T coef = norm * 2 / denom;
                    for (int i = 0; i < kSsimWindow; ++i) {
                        const T* ra = pa + static_cast<size_t>(py + i) * a.w + px;
                        const T* rb = pb + static_cast<size_t>(py + i) * a.w + px;
                        const T* rw = win.data() + i * kSsimWindow;
                        T* wa = ga + static_cast<size_t>(py + i) * a.w + px;
                        T* wb = gb + static_cast<size_t>(py + i) * a.w + px;
                        for (int j = 0; j < kSsimWindow; ++j) {
                            const T w = rw[j] * coef;
                            wa[j] += w * (sb * a2 + (rb[j] - sb) * a1 -
                                          s * (sa * b2 + (ra[j] - sa) * b1));
                            wb[j] += w * (sa * a2 + (ra[j] - sa) * a1 -
                                          s * (sb * b2 + (rb[j] - sb) * b1));
                        }
                    }
                }
            }
    }
    return total * norm;
}

template <class T>
T ssim(const Tensor4<T>& a, const Tensor4<T>& b) {
    return ssim_grad<T>(a, b, nullptr, nullptr);
}

// ---------------------------------------------------------------------------
// total reconstruction loss: w_l2 * l2 + (mu/2) * (1 - ssim)
// ---------------------------------------------------------------------------

template <class T>
struct LossValue {
    T total = 0;
    T l2_part = 0;
    T ssim_part = 0;  // (1 - SSIM) / 2, in [0, 1] for inputs in [0, 1]
    T mu = 0;
};

template <class T>
LossValue<T> total_loss(const Tensor4<T>& x, const Tensor4<T>& xhat, T mu, T l2_weight = T(1)) {
    LossValue<T> v;
    v.mu = mu;
    v.l2_part = l2_weight * l2_loss(x, xhat);
    v.ssim_part = (T(1) - ssim(x, xhat)) / T(2);
    v.total = v.l2_part + mu * v.ssim_part;
    return v;
}

/// Gradient of total_loss w.r.t. xhat; optionally also returns the value.
template <class T>
Tensor4<T> total_loss_backward(const Tensor4<T>& x, const Tensor4<T>& xhat, T mu,
                               T l2_weight = T(1), LossValue<T>* value = nullptr) {
    Tensor4<T> g = l2_loss_backward(x, xhat, l2_weight);
    Tensor4<T> dssim_dxhat;
    T s = ssim_grad<T>(x, xhat, nullptr, &dssim_dxhat);
    const T scale = -mu / T(2);
    for (size_t i = 0; i < g.size(); ++i) g.data[i] += scale * dssim_dxhat.data[i];
    if (value) {
        value->mu = mu;
        value->l2_part = l2_weight * l2_loss(x, xhat);
        value->ssim_part = (T(1) - s) / T(2);
        value->total = value->l2_part + mu * value->ssim_part;
    }
    return g;
}

}  // namespace auif
