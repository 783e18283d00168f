#pragma once

#include <vector>

#include "auif/image.hpp"

namespace auif {

/// Dense 2-D double matrix for the classical solvers and oracles.
struct Mat2 {
    int h = 0, w = 0;
    std::vector<double> v;

    Mat2() = default;
    Mat2(int h_, int w_) : h(h_), w(w_), v(static_cast<size_t>(h_) * w_, 0.0) {}

    double& at(int y, int x) { return v[static_cast<size_t>(y) * w + x]; }
    double at(int y, int x) const { return v[static_cast<size_t>(y) * w + x]; }
    size_t size() const { return v.size(); }
};

Mat2 image_to_mat(const Image& img);
Image mat_to_image(const Mat2& m);

/// The fixed 2-D kernels used by the classical decompositions.
namespace filter_bank {
const Mat2& blur3();       // 3x3 mean
const Mat2& laplacian4();  // 4-neighbor Laplacian
const Mat2& gx();          // [-1, 1]
const Mat2& gy();          // [-1, 1]^T
}  // namespace filter_bank

/// Size-preserving correlation with reflect-101 padding (general kernel
/// sizes; even kernels pad one extra pixel on the trailing side).
Mat2 correlate_reflect(const Mat2& x, const Mat2& k);

/// Adjoint of correlate_reflect as a linear operator in x, i.e. the exact
/// gradient map of t -> d(1/2 ||k * x||^2)/dx when fed t = k * x.
Mat2 correlate_reflect_adjoint(const Mat2& t, const Mat2& k);

struct DecomposeResult {
    Image base, detail;        // 8-bit-friendly float views
    Mat2 base_d, detail_d;     // full-precision planes (base_d + detail_d == input exactly
                               // for the additive-split methods)
    std::vector<double> loss_trace;  // objective before iteration 1, then after each
};

enum class GdVariant { base, detail };

/// Blur split: base = blur3 * img, detail = img - base (exact).
DecomposeResult filter_decompose(const Image& img);

/// Gradient descent on ||I-B||^2 + lambda(||gx*B||^2 + ||gy*B||^2) from B = I.
DecomposeResult optim_decompose(const Image& img, double lambda, int iters, double step);

/// Gradient descent with fixed filters on the base/detail objective,
/// initialized with the blur (base) or Laplacian (detail) filter.
DecomposeResult classic_gd_decompose(const Image& img, GdVariant variant, double theta, double eta,
                                     int iters);

/// Closed-form minimizer of the regularized objective: assembles the dense
/// operator A b = theta*b + sum_j g_j^T * (g_j * b) column by column
/// (reflection boundaries included) and solves A b = theta*x by Cholesky.
/// Validates symmetry and positive definiteness. img must be <= 24x24.
Mat2 linear_oracle(const Mat2& img, double theta, const std::vector<Mat2>& filters);

}  // namespace auif
