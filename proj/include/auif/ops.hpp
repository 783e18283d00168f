#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "auif/tensor.hpp"
#include "auif/threading.hpp"

namespace auif {

// ---------------------------------------------------------------------------
// reflection padding (reflect-101: the edge pixel is not repeated)
// ---------------------------------------------------------------------------

inline int mirror101(int i, int size) {
    if (size == 1) return 0;  // single pixel: every mirror lands on it
    while (i < 0 || i >= size) {
        if (i < 0) i = -i;
        if (i >= size) i = 2 * size - 2 - i;
    }
    return i;
}

template <class T>
void check_pad_args(const Tensor4<T>& x, int p) {
    if (p < 1) throw std::invalid_argument("reflect_pad: pad width must be >= 1");
    bool ok_h = x.h > p || x.h == 1;
    bool ok_w = x.w > p || x.w == 1;
    if (!ok_h || !ok_w)
        throw std::invalid_argument("reflect_pad: dims " + x.dims_str() +
                                    " too small for pad " + std::to_string(p));
}

template <class T>
Tensor4<T> reflect_pad(const Tensor4<T>& x, int p) {
    check_pad_args(x, p);
    Tensor4<T> out(x.n, x.c, x.h + 2 * p, x.w + 2 * p);
    std::vector<int> my(out.h), mx(out.w);
    for (int y = 0; y < out.h; ++y) my[y] = mirror101(y - p, x.h);
    for (int xx = 0; xx < out.w; ++xx) mx[xx] = mirror101(xx - p, x.w);
    for (int in = 0; in < x.n; ++in)
        for (int ic = 0; ic < x.c; ++ic) {
            const T* src = x.plane(in, ic);
            T* dst = out.plane(in, ic);
            for (int y = 0; y < out.h; ++y) {
                const T* row = src + static_cast<size_t>(my[y]) * x.w;
                for (int xx = 0; xx < out.w; ++xx) dst[static_cast<size_t>(y) * out.w + xx] = row[mx[xx]];
            }
        }
    return out;
}

/// Scatters border gradients back to their mirrored source pixels.
template <class T>
Tensor4<T> reflect_pad_backward(const Tensor4<T>& dpad, int p) {
    int h = dpad.h - 2 * p, w = dpad.w - 2 * p;
    if (h < 1 || w < 1) throw std::invalid_argument("reflect_pad_backward: bad padded dims");
    Tensor4<T> dx(dpad.n, dpad.c, h, w);
    std::vector<int> my(dpad.h), mx(dpad.w);
    for (int y = 0; y < dpad.h; ++y) my[y] = mirror101(y - p, h);
    for (int xx = 0; xx < dpad.w; ++xx) mx[xx] = mirror101(xx - p, w);
    for (int in = 0; in < dpad.n; ++in)
        for (int ic = 0; ic < dpad.c; ++ic) {
            const T* src = dpad.plane(in, ic);
            T* dst = dx.plane(in, ic);
            for (int y = 0; y < dpad.h; ++y)
                for (int xx = 0; xx < dpad.w; ++xx)
                    dst[static_cast<size_t>(my[y]) * w + mx[xx]] += src[static_cast<size_t>(y) * dpad.w + xx];
        }
    return dx;
}

// ---------------------------------------------------------------------------
// convolution ("valid" correlation, stride 1, no bias)
// ---------------------------------------------------------------------------

template <class T>
void check_conv_args(const Tensor4<T>& x, const Tensor4<T>& k) {
    if (x.c != k.c)
        throw std::invalid_argument("conv2d: input has " + std::to_string(x.c) +
                                    " channels, kernel expects " + std::to_string(k.c));
    if (x.h < k.h || x.w < k.w)
        throw std::invalid_argument("conv2d: input " + x.dims_str() + " smaller than kernel " +
                                    k.dims_str());
}

template <class T>
Tensor4<T> conv2d(const Tensor4<T>& x, const Tensor4<T>& k) {
    check_conv_args(x, k);
    const int oh = x.h - k.h + 1, ow = x.w - k.w + 1;
    Tensor4<T> out(x.n, k.n, oh, ow);
    const size_t units = static_cast<size_t>(x.n) * k.n;
    parallel_for(units, [&](size_t b, size_t e) {
        for (size_t u = b; u < e; ++u) {
            const int in = static_cast<int>(u) / k.n;
            const int co = static_cast<int>(u) % k.n;
            T* dst = out.plane(in, co);
            for (int ci = 0; ci < x.c; ++ci) {
                const T* src = x.plane(in, ci);
                const T* kw_ = k.plane(co, ci);
                for (int ky = 0; ky < k.h; ++ky)
                    for (int kx = 0; kx < k.w; ++kx) {
                        const T wv = kw_[ky * k.w + kx];
                        for (int y = 0; y < oh; ++y) {
                            const T* s = src + static_cast<size_t>(y + ky) * x.w + kx;
                            T* d = dst + static_cast<size_t>(y) * ow;
                            for (int xx = 0; xx < ow; ++xx) d[xx] += wv * s[xx];
                        }
                    }
            }
        }
    });
    return out;
}

/// dL/dx of conv2d: full correlation of dy with the kernel (scatter form).
template <class T>
Tensor4<T> conv2d_backward_input(const Tensor4<T>& dy, const Tensor4<T>& k) {
    const int h = dy.h + k.h - 1, w = dy.w + k.w - 1;
    Tensor4<T> dx(dy.n, k.c, h, w);
    const size_t units = static_cast<size_t>(dy.n) * k.c;
    parallel_for(units, [&](size_t b, size_t e) {
        for (size_t u = b; u < e; ++u) {
            const int in = static_cast<int>(u) / k.c;
            const int ci = static_cast<int>(u) % k.c;
            T* dst = dx.plane(in, ci);
            for (int co = 0; co < k.n; ++co) {
                const T* src = dy.plane(in, co);
                const T* kw_ = k.plane(co, ci);
                for (int ky = 0; ky < k.h; ++ky)
                    for (int kx = 0; kx < k.w; ++kx) {
                        const T wv = kw_[ky * k.w + kx];
                        for (int y = 0; y < dy.h; ++y) {
                            T* d = dst + static_cast<size_t>(y + ky) * w + kx;
                            const T* s = src + static_cast<size_t>(y) * dy.w;
                            for (int xx = 0; xx < dy.w; ++xx) d[xx] += wv * s[xx];
                        }
                    }
            }
        }
    });
    return dx;
}

/// dL/dk of conv2d.
template <class T>
Tensor4<T> conv2d_backward_kernel(const Tensor4<T>& x, const Tensor4<T>& dy, int kh, int kw) {
    Tensor4<T> dk(dy.c, x.c, kh, kw);
    const size_t units = static_cast<size_t>(dy.c) * x.c;
    parallel_for(units, [&](size_t b, size_t e) {
        for (size_t u = b; u < e; ++u) {
            const int co = static_cast<int>(u) / x.c;
            const int ci = static_cast<int>(u) % x.c;
            T* dst = dk.plane(co, ci);
            for (int ky = 0; ky < kh; ++ky)
                for (int kx = 0; kx < kw; ++kx) {
                    T acc = 0;
                    for (int in = 0; in < x.n; ++in) {
                        const T* xp = x.plane(in, ci);
                        const T* gp = dy.plane(in, co);
                        for (int y = 0; y < dy.h; ++y) {
                            const T* s1 = xp + static_cast<size_t>(y + ky) * x.w + kx;
                            const T* s2 = gp + static_cast<size_t>(y) * dy.w;
                            for (int xx = 0; xx < dy.w; ++xx) acc += s1[xx] * s2[xx];
                        }
                    }
                    dst[ky * kw + kx] = acc;
                }
        }
    });
    return dk;
}

// ---------------------------------------------------------------------------
// 180-degree kernel tying
// ---------------------------------------------------------------------------

/// k2[b,a,i,j] = k1[a,b,K-1-i,K-1-j]; swaps the channel roles and rotates
/// every 3x3 slice by 180 degrees. Involution up to the axis swap.
template <class T>
Tensor4<T> tie_rot180(const Tensor4<T>& k1) {
    if (k1.h != 3 || k1.w != 3)
        throw std::invalid_argument("tie_rot180: expected 3x3 kernel slices, got " + k1.dims_str());
    Tensor4<T> k2(k1.c, k1.n, 3, 3);
    for (int a = 0; a < k1.n; ++a)
        for (int b = 0; b < k1.c; ++b)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) k2.at(b, a, i, j) = k1.at(a, b, 2 - i, 2 - j);
    return k2;
}

/// The tying map is an element permutation, so the gradient flows back
/// through the same transform.
template <class T>
Tensor4<T> tie_rot180_backward(const Tensor4<T>& dk2) {
    return tie_rot180(dk2);
}

// ---------------------------------------------------------------------------
// batch normalization (per channel over n,h,w)
// ---------------------------------------------------------------------------

enum class BnMode { train, eval };

inline constexpr double kBnEps = 1e-5;
inline constexpr double kBnMomentum = 0.1;

template <class T>
struct BnCache {
    Tensor4<T> xhat;
    std::vector<T> invstd;  // per channel
    BnMode mode = BnMode::train;
};

template <class T>
struct BnOut {
    Tensor4<T> y;
    BnCache<T> cache;
    // running statistics are an explicit output, never a hidden side effect
    std::vector<T> new_running_mean, new_running_var;
};

template <class T>
BnOut<T> batch_norm(const Tensor4<T>& x, const std::vector<T>& scale, const std::vector<T>& shift,
                    const std::vector<T>& running_mean, const std::vector<T>& running_var,
                    BnMode mode) {
    const size_t c = static_cast<size_t>(x.c);
    if (scale.size() != c || shift.size() != c || running_mean.size() != c ||
        running_var.size() != c)
        throw std::invalid_argument("batch_norm: per-channel parameter size mismatch");
    const size_t m = static_cast<size_t>(x.n) * x.h * x.w;
    if (mode == BnMode::train && m < 2)
        throw std::invalid_argument("batch_norm: train mode needs at least 2 elements per channel");

    BnOut<T> out;
    out.y = Tensor4<T>(x.n, x.c, x.h, x.w);
    out.cache.xhat = Tensor4<T>(x.n, x.c, x.h, x.w);
    out.cache.invstd.resize(c);
    out.cache.mode = mode;
    out.new_running_mean = running_mean;
    out.new_running_var = running_var;

    const size_t plane = static_cast<size_t>(x.h) * x.w;
    for (int ic = 0; ic < x.c; ++ic) {
        T mean, invstd;
        if (mode == BnMode::train) {
            T sum = 0;
            for (int in = 0; in < x.n; ++in) {
                const T* p = x.plane(in, ic);
                for (size_t i = 0; i < plane; ++i) sum += p[i];
            }
            mean = sum / static_cast<T>(m);
            T ss = 0;
            for (int in = 0; in < x.n; ++in) {
                const T* p = x.plane(in, ic);
                for (size_t i = 0; i < plane; ++i) {
                    T d = p[i] - mean;
                    ss += d * d;
                }
            }
            T var = ss / static_cast<T>(m);
            invstd = T(1) / std::sqrt(var + static_cast<T>(kBnEps));
            T unbiased = ss / static_cast<T>(m - 1);
            out.new_running_mean[ic] = static_cast<T>((1.0 - kBnMomentum) * running_mean[ic] +
                                                      kBnMomentum * mean);
            out.new_running_var[ic] = static_cast<T>((1.0 - kBnMomentum) * running_var[ic] +
                                                     kBnMomentum * unbiased);
        } else {
            mean = running_mean[ic];
            invstd = T(1) / std::sqrt(running_var[ic] + static_cast<T>(kBnEps));
        }
        out.cache.invstd[ic] = invstd;
        const T g = scale[ic], b = shift[ic];
        for (int in = 0; in < x.n; ++in) {
            const T* p = x.plane(in, ic);
            T* xh = out.cache.xhat.plane(in, ic);
            T* yp = out.y.plane(in, ic);
            for (size_t i = 0; i < plane; ++i) {
                xh[i] = (p[i] - mean) * invstd;
                yp[i] = g * xh[i] + b;
            }
        }
    }
    return out;
}

template <class T>
struct BnGrads {
    Tensor4<T> dx;
    std::vector<T> dscale, dshift;
};

template <class T>
BnGrads<T> batch_norm_backward(const Tensor4<T>& dy, const BnCache<T>& cache,
                               const std::vector<T>& scale) {
    const Tensor4<T>& xhat = cache.xhat;
    require_same_dims(dy, xhat, "batch_norm_backward");
    BnGrads<T> g;
    g.dx = Tensor4<T>(dy.n, dy.c, dy.h, dy.w);
    g.dscale.assign(dy.c, T(0));
    g.dshift.assign(dy.c, T(0));
    const size_t plane = static_cast<size_t>(dy.h) * dy.w;
    const T m = static_cast<T>(static_cast<size_t>(dy.n) * plane);
    for (int ic = 0; ic < dy.c; ++ic) {
        T sum_dy = 0, sum_dy_xhat = 0;
        for (int in = 0; in < dy.n; ++in) {
            const T* gp = dy.plane(in, ic);
            const T* xh = xhat.plane(in, ic);
            for (size_t i = 0; i < plane; ++i) {
                sum_dy += gp[i];
                sum_dy_xhat += gp[i] * xh[i];
            }
        }
        g.dscale[ic] = sum_dy_xhat;
        g.dshift[ic] = sum_dy;
        const T gi = scale[ic] * cache.invstd[ic];
        if (cache.mode == BnMode::train) {
            const T mdy = sum_dy / m, mdyx = sum_dy_xhat / m;
            for (int in = 0; in < dy.n; ++in) {
                const T* gp = dy.plane(in, ic);
                const T* xh = xhat.plane(in, ic);
                T* dx = g.dx.plane(in, ic);
                for (size_t i = 0; i < plane; ++i) dx[i] = gi * (gp[i] - mdy - xh[i] * mdyx);
            }
        } else {
            for (int in = 0; in < dy.n; ++in) {
                const T* gp = dy.plane(in, ic);
                T* dx = g.dx.plane(in, ic);
                for (size_t i = 0; i < plane; ++i) dx[i] = gi * gp[i];
            }
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// PReLU (one learnable slope per layer)
// ---------------------------------------------------------------------------

template <class T>
Tensor4<T> prelu(const Tensor4<T>& x, T slope) {
    Tensor4<T> y(x.n, x.c, x.h, x.w);
    for (size_t i = 0; i < x.size(); ++i) y.data[i] = x.data[i] >= T(0) ? x.data[i] : slope * x.data[i];
    return y;
}

template <class T>
struct PreluGrads {
    Tensor4<T> dx;
    T dslope = 0;
};

template <class T>
PreluGrads<T> prelu_backward(const Tensor4<T>& dy, const Tensor4<T>& x, T slope) {
    require_same_dims(dy, x, "prelu_backward");
    PreluGrads<T> g;
    g.dx = Tensor4<T>(x.n, x.c, x.h, x.w);
    for (size_t i = 0; i < x.size(); ++i) {
        if (x.data[i] >= T(0)) {
            g.dx.data[i] = dy.data[i];
        } else {
            g.dx.data[i] = slope * dy.data[i];
            g.dslope += dy.data[i] * x.data[i];
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// sigmoid
// ---------------------------------------------------------------------------

/// Numerically stable logistic; output clamped to the open interval (0,1)
/// so downstream code can rely on strict bounds even after float rounding.
template <class T>
Tensor4<T> sigmoid(const Tensor4<T>& x) {
    Tensor4<T> y(x.n, x.c, x.h, x.w);
    const T lo = std::numeric_limits<T>::min();
    const T hi = T(1) - std::numeric_limits<T>::epsilon() / 2;
    for (size_t i = 0; i < x.size(); ++i) {
        T v = x.data[i], s;
        if (v >= T(0)) {
            s = T(1) / (T(1) + std::exp(-v));
        } else {
            T e = std::exp(v);
            s = e / (T(1) + e);
        }
        y.data[i] = std::min(hi, std::max(lo, s));
    }
    return y;
}

template <class T>
Tensor4<T> sigmoid_backward(const Tensor4<T>& dy, const Tensor4<T>& y) {
    require_same_dims(dy, y, "sigmoid_backward");
    Tensor4<T> dx(y.n, y.c, y.h, y.w);
    for (size_t i = 0; i < y.size(); ++i) dx.data[i] = dy.data[i] * y.data[i] * (T(1) - y.data[i]);
    return dx;
}

// ---------------------------------------------------------------------------
// fixed initialization filters (shared by the network and the classical
// decompositions)
// ---------------------------------------------------------------------------

template <class T>
Tensor4<T> blur3_kernel() {
    Tensor4<T> k(1, 1, 3, 3);
    for (auto& v : k.data) v = T(1) / T(9);
    return k;
}

template <class T>
Tensor4<T> laplacian4_kernel() {
    Tensor4<T> k(1, 1, 3, 3);
    const T vals[9] = {0, 1, 0, 1, -4, 1, 0, 1, 0};
    std::copy(vals, vals + 9, k.data.begin());
    return k;
}

/// reflect-pad by 1 then 3x3 "valid" convolution: preserves spatial dims.
template <class T>
Tensor4<T> conv3x3_same(const Tensor4<T>& x, const Tensor4<T>& k) {
    return conv2d(reflect_pad(x, 1), k);
}

}  // namespace auif
