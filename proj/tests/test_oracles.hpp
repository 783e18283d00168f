#pragma once

// Brute-force reference implementations, independent of the library code
// paths they validate. Everything here works on plain double grids.

#include <cmath>
#include <cstddef>
#include <vector>

#include "auif/image.hpp"
#include "auif/rng.hpp"

namespace oracle {

using Grid = std::vector<std::vector<double>>;

inline Grid grid_from_image(const auif::Image& img, double scale = 255.0) {
    Grid g(img.height, std::vector<double>(img.width));
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) g[y][x] = scale * img.at(y, x);
    return g;
}

inline double entropy_bits(const auif::Image& img) {
    std::vector<size_t> hist(256, 0);
    for (float v : img.pix) {
        long b = std::lround(double(v) * 255.0);
        if (b < 0) b = 0;
        if (b > 255) b = 255;
        hist[b]++;
    }
    double e = 0;
    for (size_t c : hist)
        if (c) {
            double p = double(c) / img.size();
            e -= p * std::log2(p);
        }
    return e;
}

inline double std_dev(const auif::Image& img) {
    Grid g = grid_from_image(img);
    double mean = 0, n = 0;
    for (auto& row : g)
        for (double v : row) {
            mean += v;
            n += 1;
        }
    mean /= n;
    double ss = 0;
    for (auto& row : g)
        for (double v : row) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / n);
}

inline double spatial_frequency(const auif::Image& img) {
    Grid g = grid_from_image(img);
    const int h = img.height, w = img.width;
    double rf = 0, cf = 0;
    for (int y = 0; y < h; ++y)
        for (int x = 1; x < w; ++x) rf += (g[y][x] - g[y][x - 1]) * (g[y][x] - g[y][x - 1]);
    for (int y = 1; y < h; ++y)
        for (int x = 0; x < w; ++x) cf += (g[y][x] - g[y - 1][x]) * (g[y][x] - g[y - 1][x]);
    return std::sqrt(rf / (double(h) * (w - 1)) + cf / (double(h - 1) * w));
}

inline double average_gradient(const auif::Image& img) {
    Grid g = grid_from_image(img);
    double acc = 0;
    for (int y = 0; y + 1 < img.height; ++y)
        for (int x = 0; x + 1 < img.width; ++x) {
            double dx = g[y][x + 1] - g[y][x], dy = g[y + 1][x] - g[y][x];
            acc += std::sqrt((dx * dx + dy * dy) / 2.0);
        }
    return acc / (double(img.height - 1) * (img.width - 1));
}

inline double correlation(const Grid& a, const Grid& b) {
    double ma = 0, mb = 0, n = 0;
    for (size_t y = 0; y < a.size(); ++y)
        for (size_t x = 0; x < a[y].size(); ++x) {
            ma += a[y][x];
            mb += b[y][x];
            n += 1;
        }
    ma /= n;
    mb /= n;
    double saa = 0, sbb = 0, sab = 0;
    for (size_t y = 0; y < a.size(); ++y)
        for (size_t x = 0; x < a[y].size(); ++x) {
            saa += (a[y][x] - ma) * (a[y][x] - ma);
            sbb += (b[y][x] - mb) * (b[y][x] - mb);
            sab += (a[y][x] - ma) * (b[y][x] - mb);
        }
    if (saa <= 0 || sbb <= 0) return 0;
    return sab / std::sqrt(saa * sbb);
}

inline double scd(const auif::Image& f, const auif::Image& ir, const auif::Image& vis) {
    Grid gf = grid_from_image(f), gi = grid_from_image(ir), gv = grid_from_image(vis);
    Grid fmv = gf, fmi = gf;
    for (size_t y = 0; y < gf.size(); ++y)
        for (size_t x = 0; x < gf[y].size(); ++x) {
            fmv[y][x] -= gv[y][x];
            fmi[y][x] -= gi[y][x];
        }
    return correlation(fmv, gi) + correlation(fmi, gv);
}

/// Straight-line pixel-domain VIF over a 4-level Gaussian pyramid,
/// written against the published reference procedure with no code shared
/// with the library implementation.
inline double vifp_reference(Grid ref, Grid dist) {
    const double noise = 2.0;
    double num = 0.0, den = 0.0;
    for (int scale = 1; scale <= 4; ++scale) {
        const int m = (1 << (5 - scale)) + 1;
        // window
        Grid win(m, std::vector<double>(m));
        const double sigma = m / 5.0, center = (m - 1) / 2.0;
        double wsum = 0;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                win[i][j] = std::exp(-((i - center) * (i - center) + (j - center) * (j - center)) /
                                     (2 * sigma * sigma));
                wsum += win[i][j];
            }
        for (auto& row : win)
            for (auto& v : row) v /= wsum;

        auto valid = [&](const Grid& g) {
            int oh = int(g.size()) - m + 1, ow = g.empty() ? 0 : int(g[0].size()) - m + 1;
            Grid out;
            if (oh < 1 || ow < 1) return out;
            out.assign(oh, std::vector<double>(ow, 0.0));
            for (int y = 0; y < oh; ++y)
                for (int x = 0; x < ow; ++x) {
                    double acc = 0;
                    for (int i = 0; i < m; ++i)
                        for (int j = 0; j < m; ++j) acc += win[i][j] * g[y + i][x + j];
                    out[y][x] = acc;
                }
            return out;
        };
        auto decimate = [](const Grid& g) {
            Grid out;
            for (size_t y = 0; y < g.size(); y += 2) {
                out.emplace_back();
                for (size_t x = 0; x < g[y].size(); x += 2) out.back().push_back(g[y][x]);
            }
            return out;
        };
        if (scale > 1) {
            ref = decimate(valid(ref));
            dist = decimate(valid(dist));
        }
        Grid mu1 = valid(ref), mu2 = valid(dist);
        if (mu1.empty()) continue;
        auto mul = [](const Grid& a, const Grid& b) {
            Grid out = a;
            for (size_t y = 0; y < a.size(); ++y)
                for (size_t x = 0; x < a[y].size(); ++x) out[y][x] = a[y][x] * b[y][x];
            return out;
        };
        Grid s11 = valid(mul(ref, ref)), s22 = valid(mul(dist, dist)), s12 = valid(mul(ref, dist));
        for (size_t y = 0; y < mu1.size(); ++y)
            for (size_t x = 0; x < mu1[y].size(); ++x) {
                double v1 = s11[y][x] - mu1[y][x] * mu1[y][x];
                double v2 = s22[y][x] - mu2[y][x] * mu2[y][x];
                double cv = s12[y][x] - mu1[y][x] * mu2[y][x];
                if (v1 < 0) v1 = 0;
                if (v2 < 0) v2 = 0;
                double g = cv / (v1 + 1e-10);
                double sv = v2 - g * cv;
                if (v1 < 1e-10) {
                    g = 0;
                    sv = v2;
                    v1 = 0;
                }
                if (v2 < 1e-10) {
                    g = 0;
                    sv = 0;
                }
                if (g < 0) {
                    sv = v2;
                    g = 0;
                }
                if (sv < 1e-10) sv = 1e-10;
                num += std::log10(1.0 + g * g * v1 / (sv + noise));
                den += std::log10(1.0 + v1 / noise);
            }
    }
    return den == 0 ? 1.0 : num / den;
}

inline double vif(const auif::Image& f, const auif::Image& ir, const auif::Image& vis) {
    Grid gf = grid_from_image(f);
    return 0.5 *
           (vifp_reference(grid_from_image(ir), gf) + vifp_reference(grid_from_image(vis), gf));
}

// ---------------------------------------------------------------------------
// deterministic synthetic imagery shared by tests and the acceptance suite
// ---------------------------------------------------------------------------

/// Smooth textured grayscale image: random blobs over a gradient background.
inline auif::Image synth_textured(int h, int w, uint64_t seed) {
    auif::Rng rng(seed);
    auif::Image img(h, w);
    struct Blob {
        double cy, cx, r, amp;
    };
    std::vector<Blob> blobs;
    for (int i = 0; i < 6; ++i)
        blobs.push_back({rng.uniform01() * h, rng.uniform01() * w, 4 + rng.uniform01() * (h / 4.0),
                         0.3 + 0.7 * rng.uniform01()});
    const double gx = rng.uniform01(), gy = rng.uniform01();
    const double phase = rng.uniform01() * 6.283, freq = 0.2 + 0.3 * rng.uniform01();
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double v = 0.25 + 0.2 * (gx * x / w + gy * y / h);
            v += 0.1 * std::sin(freq * x + phase) * std::sin(freq * y + phase);
            for (const auto& b : blobs) {
                double d2 = (y - b.cy) * (y - b.cy) + (x - b.cx) * (x - b.cx);
                v += b.amp * std::exp(-d2 / (2 * b.r * b.r)) * 0.5;
            }
            img.at(y, x) = static_cast<float>(std::min(1.0, std::max(0.0, v)));
        }
    return img;
}

/// Infrared-like frame: bright hot spots on a dark background.
inline auif::Image synth_infrared(int h, int w, uint64_t seed) {
    auif::Rng rng(seed);
    auif::Image img(h, w);
    struct Spot {
        double cy, cx, r;
    };
    std::vector<Spot> spots;
    for (int i = 0; i < 4; ++i)
        spots.push_back(
            {rng.uniform01() * h, rng.uniform01() * w, 3 + rng.uniform01() * (h / 6.0)});
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double v = 0.08 + 0.04 * rng.uniform01() * 0;  // flat dark background
            for (const auto& s : spots) {
                double d2 = (y - s.cy) * (y - s.cy) + (x - s.cx) * (x - s.cx);
                v = std::max(v, 0.95 * std::exp(-d2 / (2 * s.r * s.r)));
            }
            img.at(y, x) = static_cast<float>(std::min(1.0, v));
        }
    return img;
}

/// Visible-like frame: high-frequency stripes and checker texture.
inline auif::Image synth_visible(int h, int w, uint64_t seed) {
    auif::Rng rng(seed);
    auif::Image img(h, w);
    const double f1 = 0.5 + 0.4 * rng.uniform01(), f2 = 0.25 + 0.2 * rng.uniform01();
    const double ph = rng.uniform01() * 6.283;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double v = 0.5 + 0.25 * std::sin(f1 * x + ph) + 0.2 * std::sin(f2 * (x + y));
            if (((x / 8) + (y / 8)) % 2 == 0) v += 0.15;
            img.at(y, x) = static_cast<float>(std::min(1.0, std::max(0.0, v)));
        }
    return img;
}

inline auif::Image random_image(int h, int w, uint64_t seed) {
    auif::Rng rng(seed);
    auif::Image img(h, w);
    for (auto& v : img.pix) v = static_cast<float>(rng.uniform01());
    return img;
}

}  // namespace oracle
