#pragma once

#include <string>

#include "auif/image.hpp"

namespace auif {

/// Loads an 8/16-bit grayscale or RGB raster (PNG, PGM/PPM) as [0,1]
/// grayscale. RGB is reduced to luminance with weights 0.299/0.587/0.114.
Image load_gray(const std::string& path);

/// Quantizes round-half-up to 8 bits and writes PNG or PGM depending on the
/// extension. Out-of-range values are clamped; returns how many were.
size_t save_gray(const Image& img, const std::string& path);

}  // namespace auif
