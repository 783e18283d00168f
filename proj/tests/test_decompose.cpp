#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "auif/decompose.hpp"
#include "test_oracles.hpp"

using namespace auif;

namespace {

double linf(const Mat2& a, const Mat2& b) {
    double m = 0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a.v[i] - b.v[i]));
    return m;
}

// independent sliding 3x3 mean with reflect-101 borders
double mean3x3_at(const Image& img, int y, int x) {
    double acc = 0;
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
            int yy = y + dy, xx = x + dx;
            if (img.height > 1) {
                if (yy < 0) yy = -yy;
                if (yy >= img.height) yy = 2 * img.height - 2 - yy;
            } else {
                yy = 0;
            }
            if (img.width > 1) {
                if (xx < 0) xx = -xx;
                if (xx >= img.width) xx = 2 * img.width - 2 - xx;
            } else {
                xx = 0;
            }
            acc += img.at(yy, xx);
        }
    return acc / 9.0;
}

bool non_increasing(const std::vector<double>& trace, double slack = 0.0) {
    for (size_t i = 1; i < trace.size(); ++i)
        if (trace[i] > trace[i - 1] + slack) return false;
    return true;
}

}  // namespace

TEST_CASE("filter_decompose: constant image splits into itself and zero") {
    Image img(8, 8);
    for (auto& v : img.pix) v = 0.6f;
    DecomposeResult r = filter_decompose(img);
    for (size_t i = 0; i < r.base_d.size(); ++i) {
        CHECK(r.base_d.v[i] == doctest::Approx(0.6).epsilon(1e-12));
        CHECK(r.detail_d.v[i] == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("filter_decompose: base + detail reconstructs the input exactly") {
    Image img = oracle::random_image(13, 17, 31);
    DecomposeResult r = filter_decompose(img);
    for (size_t i = 0; i < img.size(); ++i)
        CHECK(r.base_d.v[i] + r.detail_d.v[i] == double(img.pix[i]));
}

TEST_CASE("filter_decompose: base matches the sliding-mean oracle") {
    Image img = oracle::random_image(16, 16, 32);
    DecomposeResult r = filter_decompose(img);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x)
            CHECK(std::fabs(r.base_d.at(y, x) - mean3x3_at(img, y, x)) <= 1e-12);
}

TEST_CASE("optim_decompose: lambda 0 reduces to the identity split") {
    Image img = oracle::random_image(10, 10, 33);
    DecomposeResult r = optim_decompose(img, 0.0, 50, 0.05);
    for (size_t i = 0; i < img.size(); ++i) {
        CHECK(r.base_d.v[i] == double(img.pix[i]));
        CHECK(r.detail_d.v[i] == 0.0);
    }
}

TEST_CASE("optim_decompose: constant image is a fixed point") {
    Image img(9, 9);
    for (auto& v : img.pix) v = 0.4f;
    DecomposeResult r = optim_decompose(img, 7.0, 100, 0.02);
    for (size_t i = 0; i < img.size(); ++i) {
        CHECK(r.base_d.v[i] == doctest::Approx(double(img.pix[i])).epsilon(1e-12));
        CHECK(std::fabs(r.detail_d.v[i]) <= 1e-12);
    }
}

TEST_CASE("optim_decompose: converges to the dense linear-system oracle") {
    Image img = oracle::random_image(12, 12, 34);
    const double lambda = 5.0;
    DecomposeResult r = optim_decompose(img, lambda, 20000, 0.02);
    // stationary point solves (I + lambda K^T K) b = x: oracle with theta=1
    // and filters scaled by sqrt(lambda)
    std::vector<Mat2> filters = {filter_bank::gx(), filter_bank::gy()};
    for (auto& f : filters)
        for (auto& v : f.v) v *= std::sqrt(lambda);
    Mat2 want = linear_oracle(image_to_mat(img), 1.0, filters);
    CHECK(linf(r.base_d, want) <= 1e-4);
}

TEST_CASE("classic_gd_decompose: zero image stays at the zero minimizer") {
    Image img(10, 10);
    DecomposeResult r = classic_gd_decompose(img, GdVariant::base, 1.0, 0.01, 50);
    for (double v : r.base_d.v) CHECK(v == 0.0);
    for (double v : r.detail_d.v) CHECK(v == 0.0);
}

TEST_CASE("classic_gd_decompose: huge fidelity weight recovers the input") {
    Image img = oracle::random_image(12, 12, 35);
    const double theta = 1e6;
    DecomposeResult r =
        classic_gd_decompose(img, GdVariant::base, theta, 1.0 / (theta + 64.0), 200);
    double gap = 0;
    for (size_t i = 0; i < img.size(); ++i)
        gap = std::max(gap, std::fabs(r.base_d.v[i] - img.pix[i]));
    CHECK(gap <= 1e-3);
}

TEST_CASE("classic_gd_decompose: agrees with the linear oracle") {
    Image img = oracle::random_image(12, 12, 36);
    DecomposeResult r = classic_gd_decompose(img, GdVariant::base, 1.0, 0.028, 20000);
    Mat2 want = linear_oracle(image_to_mat(img), 1.0, {filter_bank::laplacian4()});
    CHECK(linf(r.base_d, want) <= 1e-4);
}

TEST_CASE("classic_gd_decompose: zero iterations returns the initialization") {
    Image img = oracle::random_image(11, 14, 37);
    Mat2 x = image_to_mat(img);

    DecomposeResult rb = classic_gd_decompose(img, GdVariant::base, 1.0, 0.01, 0);
    Mat2 b0 = correlate_reflect(x, filter_bank::blur3());
    CHECK(rb.loss_trace.size() == 1);
    for (size_t i = 0; i < x.size(); ++i) CHECK(rb.base_d.v[i] == b0.v[i]);

    DecomposeResult rd = classic_gd_decompose(img, GdVariant::detail, 1.0, 0.01, 0);
    Mat2 d0 = correlate_reflect(x, filter_bank::laplacian4());
    for (size_t i = 0; i < x.size(); ++i) CHECK(rd.detail_d.v[i] == d0.v[i]);
}

TEST_CASE("objective traces are non-increasing at eta 0.01") {
    for (uint64_t seed : {40u, 41u}) {
        Image img = oracle::random_image(16, 16, seed);
        CHECK(non_increasing(classic_gd_decompose(img, GdVariant::base, 1.0, 0.01, 400).loss_trace));
        CHECK(
            non_increasing(classic_gd_decompose(img, GdVariant::detail, 1.0, 0.01, 400).loss_trace));
        CHECK(non_increasing(optim_decompose(img, 5.0, 400, 0.01).loss_trace));
    }
    Image textured = oracle::synth_textured(16, 16, 42);
    CHECK(non_increasing(classic_gd_decompose(textured, GdVariant::base, 1.0, 0.01, 400).loss_trace));
}

TEST_CASE("divergent step size raises a step-size error") {
    Image img = oracle::random_image(16, 16, 43);
    CHECK_THROWS_AS(classic_gd_decompose(img, GdVariant::base, 1.0, 0.1, 400), std::runtime_error);
}

TEST_CASE("linear_oracle: theta with no filters is the identity") {
    Image img = oracle::random_image(8, 8, 44);
    Mat2 x = image_to_mat(img);
    Mat2 b = linear_oracle(x, 1.0, {});
    for (size_t i = 0; i < x.size(); ++i) CHECK(b.v[i] == doctest::Approx(x.v[i]).epsilon(1e-14));
}

TEST_CASE("linear_oracle: SPD validation and size/parameter guards") {
    Image img = oracle::random_image(12, 12, 45);
    Mat2 x = image_to_mat(img);
    CHECK_NOTHROW(linear_oracle(x, 0.5, {filter_bank::laplacian4()}));
    CHECK_THROWS_AS(linear_oracle(x, 0.0, {filter_bank::laplacian4()}), std::invalid_argument);
    Mat2 big(25, 25);
    CHECK_THROWS_AS(linear_oracle(big, 1.0, {filter_bank::laplacian4()}), std::invalid_argument);
}

TEST_CASE("long-run descent lands on the oracle for several thetas") {
    for (double theta : {0.5, 2.0}) {
        Image img = oracle::random_image(12, 12, 46 + uint64_t(theta * 10));
        double eta = 1.8 / (theta + 64.0);
        DecomposeResult r = classic_gd_decompose(img, GdVariant::base, theta, eta, 20000);
        Mat2 want = linear_oracle(image_to_mat(img), theta, {filter_bank::laplacian4()});
        CHECK(linf(r.base_d, want) <= 1e-4);
    }
}

TEST_CASE("filter bank invariants") {
    double s = 0;
    for (double v : filter_bank::blur3().v) s += v;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    s = 0;
    for (double v : filter_bank::laplacian4().v) s += v;
    CHECK(s == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(filter_bank::gx().v == std::vector<double>{-1.0, 1.0});
    CHECK(filter_bank::gy().v == std::vector<double>{-1.0, 1.0});
    CHECK(filter_bank::gy().h == 2);
    CHECK(filter_bank::gx().w == 2);
}
