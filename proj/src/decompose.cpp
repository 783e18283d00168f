#include "auif/decompose.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "auif/ops.hpp"

namespace auif {

Mat2 image_to_mat(const Image& img) {
    Mat2 m(img.height, img.width);
    for (size_t i = 0; i < img.size(); ++i) m.v[i] = img.pix[i];
    return m;
}

Image mat_to_image(const Mat2& m) {
    Image img(m.h, m.w);
    for (size_t i = 0; i < m.size(); ++i) img.pix[i] = static_cast<float>(m.v[i]);
    return img;
}

namespace filter_bank {

const Mat2& blur3() {
    static const Mat2 k = [] {
        Mat2 m(3, 3);
        for (auto& x : m.v) x = 1.0 / 9.0;
        return m;
    }();
    return k;
}

const Mat2& laplacian4() {
    static const Mat2 k = [] {
        Mat2 m(3, 3);
        const double vals[9] = {0, 1, 0, 1, -4, 1, 0, 1, 0};
        m.v.assign(vals, vals + 9);
        return m;
    }();
    return k;
}

const Mat2& gx() {
    static const Mat2 k = [] {
        Mat2 m(1, 2);
        m.v = {-1.0, 1.0};
        return m;
    }();
    return k;
}

const Mat2& gy() {
    static const Mat2 k = [] {
        Mat2 m(2, 1);
        m.v = {-1.0, 1.0};
        return m;
    }();
    return k;
}

}  // namespace filter_bank

Mat2 correlate_reflect(const Mat2& x, const Mat2& k) {
    const int pt = (k.h - 1) / 2, pl = (k.w - 1) / 2;
    Mat2 out(x.h, x.w);
    for (int y = 0; y < x.h; ++y)
        for (int xx = 0; xx < x.w; ++xx) {
            double acc = 0;
            for (int ky = 0; ky < k.h; ++ky)
                for (int kx = 0; kx < k.w; ++kx)
                    acc += k.at(ky, kx) *
                           x.at(mirror101(y + ky - pt, x.h), mirror101(xx + kx - pl, x.w));
            out.at(y, xx) = acc;
        }
    return out;
}

Mat2 correlate_reflect_adjoint(const Mat2& t, const Mat2& k) {
    const int pt = (k.h - 1) / 2, pl = (k.w - 1) / 2;
    Mat2 out(t.h, t.w);
    for (int y = 0; y < t.h; ++y)
        for (int xx = 0; xx < t.w; ++xx) {
            const double g = t.at(y, xx);
            for (int ky = 0; ky < k.h; ++ky)
                for (int kx = 0; kx < k.w; ++kx)
                    out.at(mirror101(y + ky - pt, t.h), mirror101(xx + kx - pl, t.w)) +=
                        k.at(ky, kx) * g;
        }
    return out;
}

namespace {

void check_input(const Image& img, const char* where) {
    if (img.height < 1 || img.width < 1)
        throw std::invalid_argument(std::string(where) + ": empty image");
    if (!img.all_finite())
        throw std::invalid_argument(std::string(where) + ": non-finite pixel values");
}

double sq_diff_sum(const Mat2& a, const Mat2& b) {
    double acc = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        double d = a.v[i] - b.v[i];
        acc += d * d;
    }
    return acc;
}

double sq_sum(const Mat2& a) {
    double acc = 0;
    for (double x : a.v) acc += x * x;
    return acc;
}

struct Objective {
    double fidelity_weight;      // applied as fidelity_weight/2 * ||X-B||^2
    double regularizer_weight;   // applied as regularizer_weight/2 * ||g*B||^2 each
    const std::vector<Mat2>* filters;
    const Mat2* target;

    double value(const Mat2& b) const {
        double v = 0.5 * fidelity_weight * sq_diff_sum(*target, b);
        for (const auto& g : *filters) v += 0.5 * regularizer_weight * sq_sum(correlate_reflect(b, g));
        return v;
    }
    Mat2 gradient(const Mat2& b) const {
        Mat2 grad(b.h, b.w);
        for (size_t i = 0; i < b.size(); ++i)
            grad.v[i] = fidelity_weight * (b.v[i] - target->v[i]);
        for (const auto& g : *filters) {
            Mat2 r = correlate_reflect_adjoint(correlate_reflect(b, g), g);
            for (size_t i = 0; i < b.size(); ++i) grad.v[i] += regularizer_weight * r.v[i];
        }
        return grad;
    }
};

/// Plain gradient descent with a 10-strike divergence detector.
std::vector<double> descend(Mat2& b, const Objective& obj, double step, int iters,
                            const char* where) {
    std::vector<double> trace;
    trace.reserve(iters + 1);
    double prev = obj.value(b);
    trace.push_back(prev);
    int rises = 0;
    for (int it = 0; it < iters; ++it) {
        Mat2 g = obj.gradient(b);
        for (size_t i = 0; i < b.size(); ++i) b.v[i] -= step * g.v[i];
        double cur = obj.value(b);
        trace.push_back(cur);
        rises = cur > prev ? rises + 1 : 0;
        if (rises >= 10)
            throw std::runtime_error(std::string(where) +
                                     ": diverging (objective rose 10 consecutive iterations); "
                                     "reduce the step size");
        prev = cur;
    }
    return trace;
}

}  // namespace

DecomposeResult filter_decompose(const Image& img) {
    check_input(img, "filter_decompose");
    Mat2 x = image_to_mat(img);
    Mat2 base = correlate_reflect(x, filter_bank::blur3());
    Mat2 detail(x.h, x.w);
    for (size_t i = 0; i < x.size(); ++i) detail.v[i] = x.v[i] - base.v[i];
    DecomposeResult r;
    r.base = mat_to_image(base);
    r.detail = mat_to_image(detail);
    r.base_d = std::move(base);
    r.detail_d = std::move(detail);
    return r;
}

DecomposeResult optim_decompose(const Image& img, double lambda, int iters, double step) {
    check_input(img, "optim_decompose");
    if (lambda < 0) throw std::invalid_argument("optim_decompose: lambda must be >= 0");
    if (step <= 0) throw std::invalid_argument("optim_decompose: step must be > 0");
    Mat2 x = image_to_mat(img);
    std::vector<Mat2> filters = {filter_bank::gx(), filter_bank::gy()};
    Objective obj{2.0, 2.0 * lambda, &filters, &x};
    Mat2 b = x;
    DecomposeResult r;
    r.loss_trace = descend(b, obj, step, iters, "optim_decompose");
    Mat2 detail(x.h, x.w);
    for (size_t i = 0; i < x.size(); ++i) detail.v[i] = x.v[i] - b.v[i];
    r.base = mat_to_image(b);
    r.detail = mat_to_image(detail);
    r.base_d = std::move(b);
    r.detail_d = std::move(detail);
    return r;
}

DecomposeResult classic_gd_decompose(const Image& img, GdVariant variant, double theta, double eta,
                                     int iters) {
    check_input(img, "classic_gd_decompose");
    if (theta <= 0) throw std::invalid_argument("classic_gd_decompose: theta must be > 0");
    if (eta <= 0) throw std::invalid_argument("classic_gd_decompose: eta must be > 0");
    Mat2 x = image_to_mat(img);
    std::vector<Mat2> filters = {variant == GdVariant::base ? filter_bank::laplacian4()
                                                            : filter_bank::blur3()};
    Objective obj{theta, 1.0, &filters, &x};
    Mat2 b = correlate_reflect(
        x, variant == GdVariant::base ? filter_bank::blur3() : filter_bank::laplacian4());
    DecomposeResult r;
    r.loss_trace = descend(b, obj, eta, iters, "classic_gd_decompose");
    Mat2 rest(x.h, x.w);
    for (size_t i = 0; i < x.size(); ++i) rest.v[i] = x.v[i] - b.v[i];
    if (variant == GdVariant::base) {
        r.base = mat_to_image(b);
        r.detail = mat_to_image(rest);
        r.base_d = std::move(b);
        r.detail_d = std::move(rest);
    } else {
        r.detail = mat_to_image(b);
        r.base = mat_to_image(rest);
        r.detail_d = std::move(b);
        r.base_d = std::move(rest);
    }
    return r;
}

Mat2 linear_oracle(const Mat2& img, double theta, const std::vector<Mat2>& filters) {
    if (img.h > 24 || img.w > 24)
        throw std::invalid_argument("linear_oracle: image larger than 24x24");
    if (theta <= 0) throw std::invalid_argument("linear_oracle: theta must be > 0");
    const int n = img.h * img.w;

    auto apply = [&](const Mat2& b) {
        Mat2 out(b.h, b.w);
        for (int i = 0; i < n; ++i) out.v[i] = theta * b.v[i];
        for (const auto& g : filters) {
            Mat2 r = correlate_reflect_adjoint(correlate_reflect(b, g), g);
            for (int i = 0; i < n; ++i) out.v[i] += r.v[i];
        }
        return out;
    };

    // assemble A column by column from unit basis images
    std::vector<double> a(static_cast<size_t>(n) * n, 0.0);
    Mat2 basis(img.h, img.w);
    for (int j = 0; j < n; ++j) {
        basis.v[j] = 1.0;
        Mat2 col = apply(basis);
        basis.v[j] = 0.0;
        for (int i = 0; i < n; ++i) a[static_cast<size_t>(i) * n + j] = col.v[i];
    }

    double asym = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            asym = std::max(asym, std::fabs(a[static_cast<size_t>(i) * n + j] -
                                            a[static_cast<size_t>(j) * n + i]));
    if (asym > 1e-10)
        throw std::runtime_error("linear_oracle: operator not symmetric (residual " +
                                 std::to_string(asym) + ")");

    // in-place Cholesky A = L L^T
    std::vector<double>& l = a;
    for (int j = 0; j < n; ++j) {
        double d = l[static_cast<size_t>(j) * n + j];
        for (int k = 0; k < j; ++k) {
            double ljk = l[static_cast<size_t>(j) * n + k];
            d -= ljk * ljk;
        }
        if (d <= 0) throw std::runtime_error("linear_oracle: operator not positive definite");
        d = std::sqrt(d);
        l[static_cast<size_t>(j) * n + j] = d;
        for (int i = j + 1; i < n; ++i) {
            double s = l[static_cast<size_t>(i) * n + j];
            for (int k = 0; k < j; ++k)
                s -= l[static_cast<size_t>(i) * n + k] * l[static_cast<size_t>(j) * n + k];
            l[static_cast<size_t>(i) * n + j] = s / d;
        }
    }

    // solve L y = theta * x, then L^T b = y
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) {
        double s = theta * img.v[i];
        for (int k = 0; k < i; ++k) s -= l[static_cast<size_t>(i) * n + k] * y[k];
        y[i] = s / l[static_cast<size_t>(i) * n + i];
    }
    Mat2 b(img.h, img.w);
    for (int i = n - 1; i >= 0; --i) {
        double s = y[i];
        for (int k = i + 1; k < n; ++k) s -= l[static_cast<size_t>(k) * n + i] * b.v[k];
        b.v[i] = s / l[static_cast<size_t>(i) * n + i];
    }
    return b;
}

}  // namespace auif
