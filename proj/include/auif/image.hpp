#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "auif/tensor.hpp"

namespace auif {

/// Single-channel 2-D raster, row-major, values nominally in [0,1].
struct Image {
    int height = 0, width = 0;
    std::vector<float> pix;

    Image() = default;
    Image(int h, int w) : height(h), width(w), pix(static_cast<size_t>(h) * w, 0.0f) {}

    float& at(int y, int x) { return pix[static_cast<size_t>(y) * width + x]; }
    float at(int y, int x) const { return pix[static_cast<size_t>(y) * width + x]; }
    size_t size() const { return pix.size(); }

    bool all_finite() const {
        for (float v : pix)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

inline Tensor4f image_to_tensor(const Image& img) {
    Tensor4f t(1, 1, img.height, img.width);
    for (size_t i = 0; i < img.size(); ++i) t.data[i] = img.pix[i];
    return t;
}

inline Image tensor_to_image(const Tensor4f& t) {
    Image img(t.h, t.w);
    for (size_t i = 0; i < img.size(); ++i) img.pix[i] = t.data[i];
    return img;
}

}  // namespace auif
