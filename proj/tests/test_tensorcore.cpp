#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "auif/gradcheck.hpp"
#include "auif/ops.hpp"
#include "auif/rng.hpp"

using namespace auif;

namespace {

void fill_uniform(Tensor4d& t, Rng& rng, double lo, double hi) {
    for (auto& v : t.data) v = lo + (hi - lo) * rng.uniform01();
}

// independent index-mirror oracle for reflect-101 padding
int oracle_mirror(int i, int size) {
    if (size == 1) return 0;
    int period = 2 * size - 2;
    int m = ((i % period) + period) % period;
    return m < size ? m : period - m;
}

// quadruple-loop direct correlation oracle
Tensor4d oracle_conv(const Tensor4d& x, const Tensor4d& k) {
    Tensor4d out(x.n, k.n, x.h - k.h + 1, x.w - k.w + 1);
    for (int n = 0; n < x.n; ++n)
        for (int co = 0; co < k.n; ++co)
            for (int y = 0; y < out.h; ++y)
                for (int xx = 0; xx < out.w; ++xx) {
                    double acc = 0;
                    for (int ci = 0; ci < x.c; ++ci)
                        for (int ky = 0; ky < k.h; ++ky)
                            for (int kx = 0; kx < k.w; ++kx)
                                acc += x.at(n, ci, y + ky, xx + kx) * k.at(co, ci, ky, kx);
                    out.at(n, co, y, xx) = acc;
                }
    return out;
}

}  // namespace

TEST_CASE("reflect_pad: single pixel mirrors to a constant block") {
    Tensor4d x(1, 1, 1, 1);
    x.data[0] = 0.37;
    Tensor4d p = reflect_pad(x, 1);
    CHECK(p.h == 3);
    CHECK(p.w == 3);
    for (double v : p.data) CHECK(v == doctest::Approx(0.37).epsilon(0));
}

TEST_CASE("reflect_pad: reflect-101 on a 3-wide row") {
    Tensor4d x(1, 1, 1, 3);
    x.data = {1.0, 2.0, 3.0};  // a, b, c
    Tensor4d p = reflect_pad(x, 1);
    CHECK(p.w == 5);
    const double expect[5] = {2, 1, 2, 3, 2};  // b a b c b
    for (int i = 0; i < 5; ++i) CHECK(p.at(0, 0, 1, i) == expect[i]);
}

TEST_CASE("reflect_pad: random tensor matches index-mirror oracle") {
    Rng rng(11);
    Tensor4d x(1, 2, 5, 5);
    fill_uniform(x, rng, -1, 1);
    for (int p = 1; p <= 3; ++p) {
        Tensor4d out = reflect_pad(x, p);
        for (int c = 0; c < 2; ++c)
            for (int y = 0; y < out.h; ++y)
                for (int xx = 0; xx < out.w; ++xx)
                    CHECK(out.at(0, c, y, xx) ==
                          x.at(0, c, oracle_mirror(y - p, 5), oracle_mirror(xx - p, 5)));
    }
}

TEST_CASE("reflect_pad: rejects pads needing repeated edge pixels") {
    Tensor4d x(1, 1, 2, 6);
    CHECK_THROWS_AS(reflect_pad(x, 2), std::invalid_argument);
    CHECK_NOTHROW(reflect_pad(x, 1));
}

TEST_CASE("reflect_pad backward scatters to mirror sources") {
    Rng rng(12);
    Tensor4d x(1, 1, 4, 4), w(1, 1, 6, 6);
    fill_uniform(x, rng, -1, 1);
    fill_uniform(w, rng, -1, 1);
    Tensor4d dx = reflect_pad_backward(w, 1);
    // oracle: accumulate per mirrored index
    Tensor4d expect(1, 1, 4, 4);
    for (int y = 0; y < 6; ++y)
        for (int xx = 0; xx < 6; ++xx)
            expect.at(0, 0, oracle_mirror(y - 1, 4), oracle_mirror(xx - 1, 4)) += w.at(0, 0, y, xx);
    for (size_t i = 0; i < dx.size(); ++i)
        CHECK(dx.data[i] == doctest::Approx(expect.data[i]).epsilon(1e-14));
}

TEST_CASE("conv2d: identity kernel after reflect pad reproduces the input") {
    Rng rng(13);
    Tensor4d x(1, 1, 6, 6);
    fill_uniform(x, rng, 0, 1);
    Tensor4d k(1, 1, 3, 3);
    k.at(0, 0, 1, 1) = 1.0;
    Tensor4d y = conv2d(reflect_pad(x, 1), k);
    REQUIRE(y.same_dims(x));
    for (size_t i = 0; i < x.size(); ++i) CHECK(y.data[i] == x.data[i]);
}

TEST_CASE("conv2d: all-ones window sums") {
    Tensor4d x(1, 1, 5, 5), k(1, 1, 3, 3);
    for (auto& v : x.data) v = 1.0;
    for (auto& v : k.data) v = 1.0;
    Tensor4d y = conv2d(x, k);
    CHECK(y.h == 3);
    CHECK(y.w == 3);
    for (double v : y.data) CHECK(v == 9.0);
}

TEST_CASE("conv2d: random case matches the quadruple-loop oracle") {
    Rng rng(14);
    Tensor4d x(2, 3, 8, 8), k(4, 3, 3, 3);
    fill_uniform(x, rng, -1, 1);
    fill_uniform(k, rng, -1, 1);
    Tensor4d got = conv2d(x, k), want = oracle_conv(x, k);
    REQUIRE(got.same_dims(want));
    for (size_t i = 0; i < got.size(); ++i) {
        double denom = std::max(1.0, std::fabs(want.data[i]));
        CHECK(std::fabs(got.data[i] - want.data[i]) / denom <= 1e-12);
    }
}

TEST_CASE("conv2d: channel mismatch is rejected") {
    Tensor4d x(1, 2, 5, 5), k(1, 3, 3, 3);
    CHECK_THROWS_AS(conv2d(x, k), std::invalid_argument);
}

TEST_CASE("tie_rot180: centrally symmetric kernel is unchanged") {
    Tensor4d lap = laplacian4_kernel<double>();
    Tensor4d tied = tie_rot180(lap);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(tied.at(0, 0, i, j) == lap.at(0, 0, i, j));
}

TEST_CASE("tie_rot180: rotates each slice by 180 degrees") {
    Tensor4d k(1, 1, 3, 3);
    k.data = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    Tensor4d t = tie_rot180(k);
    const double expect[9] = {9, 8, 7, 6, 5, 4, 3, 2, 1};
    for (int i = 0; i < 9; ++i) CHECK(t.data[i] == expect[i]);
}

TEST_CASE("tie_rot180: involution up to the axis swap") {
    Rng rng(15);
    Tensor4d k(5, 1, 3, 3);
    fill_uniform(k, rng, -1, 1);
    Tensor4d back = tie_rot180(tie_rot180(k));
    REQUIRE(back.same_dims(k));
    for (size_t i = 0; i < k.size(); ++i) CHECK(back.data[i] == k.data[i]);
}

TEST_CASE("tie_rot180: rejects non-3x3 kernels") {
    Tensor4d k(2, 1, 5, 5);
    CHECK_THROWS_AS(tie_rot180(k), std::invalid_argument);
}

TEST_CASE("batch_norm: constant channel normalizes to (near) zero") {
    Tensor4d x(2, 1, 4, 4);
    for (auto& v : x.data) v = 0.8;
    std::vector<double> scale{1}, shift{0}, rm{0}, rv{1};
    auto out = batch_norm(x, scale, shift, rm, rv, BnMode::train);
    for (double v : out.y.data) CHECK(std::fabs(v) <= 1e-6);
}

TEST_CASE("batch_norm: zero scale collapses to the shift") {
    Rng rng(16);
    Tensor4d x(2, 2, 4, 4);
    fill_uniform(x, rng, -1, 1);
    std::vector<double> scale{0, 0}, shift{0.25, -0.5}, rm{0, 0}, rv{1, 1};
    auto out = batch_norm(x, scale, shift, rm, rv, BnMode::train);
    for (int n = 0; n < 2; ++n)
        for (int c = 0; c < 2; ++c)
            for (int i = 0; i < 16; ++i) CHECK(out.y.plane(n, c)[i] == shift[c]);
}

TEST_CASE("batch_norm: matches a two-pass statistics oracle") {
    Rng rng(17);
    Tensor4d x(4, 2, 6, 6);
    fill_uniform(x, rng, -2, 2);
    std::vector<double> scale{1.3, 0.6}, shift{0.1, -0.2}, rm{0.5, -0.5}, rv{2.0, 0.7};
    auto out = batch_norm(x, scale, shift, rm, rv, BnMode::train);

    const size_t m = 4 * 6 * 6;
    for (int c = 0; c < 2; ++c) {
        double sum = 0;
        for (int n = 0; n < 4; ++n)
            for (int i = 0; i < 36; ++i) sum += x.plane(n, c)[i];
        double mean = sum / m;
        double ss = 0;
        for (int n = 0; n < 4; ++n)
            for (int i = 0; i < 36; ++i) ss += (x.plane(n, c)[i] - mean) * (x.plane(n, c)[i] - mean);
        double var = ss / m;
        for (int n = 0; n < 4; ++n)
            for (int i = 0; i < 36; ++i) {
                double want = scale[c] * (x.plane(n, c)[i] - mean) / std::sqrt(var + 1e-5) + shift[c];
                CHECK(out.y.plane(n, c)[i] == doctest::Approx(want).epsilon(1e-10));
            }
        // running statistics use the unbiased variance and momentum 0.1
        CHECK(out.new_running_mean[c] == doctest::Approx(0.9 * rm[c] + 0.1 * mean).epsilon(1e-12));
        CHECK(out.new_running_var[c] ==
              doctest::Approx(0.9 * rv[c] + 0.1 * ss / (m - 1)).epsilon(1e-12));
    }
}

TEST_CASE("batch_norm: train mode rejects single-element channels") {
    Tensor4d x(1, 3, 1, 1);
    std::vector<double> one(3, 1.0), zero(3, 0.0);
    CHECK_THROWS_AS(batch_norm(x, one, zero, zero, one, BnMode::train), std::invalid_argument);
    CHECK_NOTHROW(batch_norm(x, one, zero, zero, one, BnMode::eval));
}

TEST_CASE("prelu: piecewise definition") {
    Tensor4d x(1, 1, 1, 2);
    x.data = {3.0, -2.0};
    Tensor4d y = prelu(x, 0.25);
    CHECK(y.data[0] == 3.0);
    CHECK(y.data[1] == -0.5);
}

TEST_CASE("sigmoid: symmetry point, saturation, strict bounds") {
    Tensor4d x(1, 1, 1, 5);
    x.data = {0.0, 40.0, -40.0, 1e4, -1e4};
    Tensor4d y = sigmoid(x);
    CHECK(y.data[0] == 0.5);
    for (double v : y.data) {
        CHECK(std::isfinite(v));
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("gradient suite: every primitive and composite passes") {
    auto checks = run_gradcheck_suite(2);
    for (const auto& c : checks) {
        INFO(c.op, " max_rel_err=", c.report.max_rel_err, " worst=", c.report.worst_slot);
        CHECK(c.pass());
    }
}

TEST_CASE("gradient suite: elementwise primitives are tight") {
    auto checks = run_gradcheck_suite(2);
    for (const auto& c : checks)
        if (c.op == "prelu" || c.op == "sigmoid" || c.op == "l2_loss") {
            INFO(c.op);
            CHECK(c.report.max_rel_err <= 1e-6);
        }
}

TEST_CASE("conv2d gradient on a 1x1x5x5 input") {
    Rng rng(19);
    Tensor4d x(1, 1, 5, 5), k(1, 1, 3, 3), w(1, 1, 3, 3);
    fill_uniform(x, rng, -1, 1);
    fill_uniform(k, rng, -1, 1);
    fill_uniform(w, rng, -1, 1);
    Tensor4d dx = conv2d_backward_input(w, k);
    Tensor4d dk = conv2d_backward_kernel(x, w, 3, 3);
    auto dot = [&](const Tensor4d& a, const Tensor4d& b) {
        double acc = 0;
        for (size_t i = 0; i < a.size(); ++i) acc += a.data[i] * b.data[i];
        return acc;
    };
    auto rep = check_gradients([&] { return dot(conv2d(x, k), w); },
                               {{"x", x.data.data(), dx.data.data(), x.size()},
                                {"k", k.data.data(), dk.data.data(), k.size()}});
    CHECK(rep.max_rel_err <= 1e-5);
}

TEST_CASE("pad + 3x3 conv preserves spatial dims for arbitrary sizes") {
    Rng rng(20);
    Tensor4d k(2, 1, 3, 3);
    fill_uniform(k, rng, -1, 1);
    for (int h : {4, 5, 7, 12})
        for (int w : {4, 6, 9, 17}) {
            Tensor4d x(1, 1, h, w);
            fill_uniform(x, rng, 0, 1);
            Tensor4d y = conv2d(reflect_pad(x, 1), k);
            CHECK(y.h == h);
            CHECK(y.w == w);
            CHECK(y.all_finite());
        }
}
