#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace auif {

/// Dense 4-D array in NCHW order, width fastest. The payload type of every
/// network operation; kernels are stored as (out_channels, in_channels, kh, kw).
template <class T>
struct Tensor4 {
    int n = 0, c = 0, h = 0, w = 0;
    std::vector<T> data;

    Tensor4() = default;
    Tensor4(int n_, int c_, int h_, int w_)
        : n(n_), c(c_), h(h_), w(w_), data(static_cast<size_t>(n_) * c_ * h_ * w_, T(0)) {
        if (n_ < 1 || c_ < 1 || h_ < 1 || w_ < 1)
            throw std::invalid_argument("Tensor4: all dims must be >= 1");
    }

    static Tensor4 zeros(int n_, int c_, int h_, int w_) { return Tensor4(n_, c_, h_, w_); }

    size_t size() const { return data.size(); }

    size_t idx(int in, int ic, int iy, int ix) const {
        return ((static_cast<size_t>(in) * c + ic) * h + iy) * w + ix;
    }
    T& at(int in, int ic, int iy, int ix) { return data[idx(in, ic, iy, ix)]; }
    T at(int in, int ic, int iy, int ix) const { return data[idx(in, ic, iy, ix)]; }

    T* plane(int in, int ic) { return data.data() + (static_cast<size_t>(in) * c + ic) * h * w; }
    const T* plane(int in, int ic) const {
        return data.data() + (static_cast<size_t>(in) * c + ic) * h * w;
    }

    bool same_dims(const Tensor4& o) const {
        return n == o.n && c == o.c && h == o.h && w == o.w;
    }
    std::string dims_str() const {
        return std::to_string(n) + "x" + std::to_string(c) + "x" + std::to_string(h) + "x" +
               std::to_string(w);
    }

    bool all_finite() const {
        for (T v : data)
            if (!std::isfinite(static_cast<double>(v))) return false;
        return true;
    }

    template <class U>
    Tensor4<U> cast() const {
        Tensor4<U> out(n, c, h, w);
        for (size_t i = 0; i < data.size(); ++i) out.data[i] = static_cast<U>(data[i]);
        return out;
    }
};

using Tensor4f = Tensor4<float>;
using Tensor4d = Tensor4<double>;

template <class T>
void require_same_dims(const Tensor4<T>& a, const Tensor4<T>& b, const char* where) {
    if (!a.same_dims(b))
        throw std::invalid_argument(std::string(where) + ": dimension mismatch " + a.dims_str() +
                                    " vs " + b.dims_str());
}

}  // namespace auif
