#include "auif/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "auif/decompose.hpp"

namespace auif {
namespace {

Mat2 to_255(const Image& img) {
    Mat2 m(img.height, img.width);
    for (size_t i = 0; i < img.size(); ++i) m.v[i] = 255.0 * img.pix[i];
    return m;
}

void require_min_dims(const Image& img, int min_h, int min_w, const char* where) {
    if (img.height < min_h || img.width < min_w)
        throw std::invalid_argument(std::string(where) + ": image too small (" +
                                    std::to_string(img.height) + "x" +
                                    std::to_string(img.width) + ")");
}

double pearson(const Mat2& a, const Mat2& b) {
    const size_t n = a.size();
    double ma = 0, mb = 0;
    for (size_t i = 0; i < n; ++i) {
        ma += a.v[i];
        mb += b.v[i];
    }
    ma /= n;
    mb /= n;
    double saa = 0, sbb = 0, sab = 0;
    for (size_t i = 0; i < n; ++i) {
        const double da = a.v[i] - ma, db = b.v[i] - mb;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    if (saa <= 0 || sbb <= 0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

// ---- pixel-domain VIF ------------------------------------------------------

Mat2 gaussian_window(int n, double sigma) {
    Mat2 w(n, n);
    const double r = (n - 1) / 2.0;
    double sum = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double d2 = (i - r) * (i - r) + (j - r) * (j - r);
            w.at(i, j) = std::exp(-d2 / (2.0 * sigma * sigma));
            sum += w.at(i, j);
        }
    for (auto& v : w.v) v /= sum;
    return w;
}

Mat2 filter_valid(const Mat2& x, const Mat2& k) {
    const int oh = x.h - k.h + 1, ow = x.w - k.w + 1;
    if (oh < 1 || ow < 1) return Mat2();
    Mat2 out(oh, ow);
    for (int y = 0; y < oh; ++y)
        for (int xx = 0; xx < ow; ++xx) {
            double acc = 0;
            for (int ky = 0; ky < k.h; ++ky)
                for (int kx = 0; kx < k.w; ++kx) acc += k.at(ky, kx) * x.at(y + ky, xx + kx);
            out.at(y, xx) = acc;
        }
    return out;
}

Mat2 stride2(const Mat2& x) {
    Mat2 out((x.h + 1) / 2, (x.w + 1) / 2);
    for (int y = 0; y < out.h; ++y)
        for (int xx = 0; xx < out.w; ++xx) out.at(y, xx) = x.at(2 * y, 2 * xx);
    return out;
}

double vifp(Mat2 ref, Mat2 dist) {
    const double sigma_n_sq = 2.0;
    double num = 0, den = 0;
    for (int scale = 1; scale <= 4; ++scale) {
        const int n = (1 << (4 - scale + 1)) + 1;  // 17, 9, 5, 3
        Mat2 win = gaussian_window(n, n / 5.0);
        if (scale > 1) {
            ref = stride2(filter_valid(ref, win));
            dist = stride2(filter_valid(dist, win));
        }
        Mat2 mu1 = filter_valid(ref, win), mu2 = filter_valid(dist, win);
        if (mu1.size() == 0) continue;
        Mat2 rr = ref, dd = dist, rd = ref;
        for (size_t i = 0; i < rr.size(); ++i) {
            rr.v[i] = ref.v[i] * ref.v[i];
            dd.v[i] = dist.v[i] * dist.v[i];
            rd.v[i] = ref.v[i] * dist.v[i];
        }
        Mat2 s11 = filter_valid(rr, win), s22 = filter_valid(dd, win), s12 = filter_valid(rd, win);
        for (size_t i = 0; i < mu1.size(); ++i) {
            double sigma1_sq = s11.v[i] - mu1.v[i] * mu1.v[i];
            double sigma2_sq = s22.v[i] - mu2.v[i] * mu2.v[i];
            double sigma12 = s12.v[i] - mu1.v[i] * mu2.v[i];
            if (sigma1_sq < 0) sigma1_sq = 0;
            if (sigma2_sq < 0) sigma2_sq = 0;
            double g = sigma12 / (sigma1_sq + 1e-10);
            double sv_sq = sigma2_sq - g * sigma12;
            if (sigma1_sq < 1e-10) {
                g = 0;
                sv_sq = sigma2_sq;
                sigma1_sq = 0;
            }
            if (sigma2_sq < 1e-10) {
                g = 0;
                sv_sq = 0;
            }
            if (g < 0) {
                sv_sq = sigma2_sq;
                g = 0;
            }
            if (sv_sq < 1e-10) sv_sq = 1e-10;
            num += std::log10(1.0 + g * g * sigma1_sq / (sv_sq + sigma_n_sq));
            den += std::log10(1.0 + sigma1_sq / sigma_n_sq);
        }
    }
    if (den == 0) return 1.0;  // reference carries no information
    return num / den;
}

}  // namespace

double metric_en(const Image& f) {
    size_t hist[256] = {};
    for (float v : f.pix) {
        long b = std::lround(static_cast<double>(v) * 255.0);
        hist[std::clamp(b, 0L, 255L)]++;
    }
    const double n = static_cast<double>(f.size());
    double en = 0;
    for (size_t c : hist)
        if (c > 0) {
            double p = c / n;
            en -= p * std::log2(p);
        }
    return en;
}

double metric_sd(const Image& f) {
    Mat2 m = to_255(f);
    double mean = 0;
    for (double v : m.v) mean += v;
    mean /= m.size();
    double ss = 0;
    for (double v : m.v) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / m.size());
}

double metric_sf(const Image& f) {
    require_min_dims(f, 2, 2, "metric_sf");
    Mat2 m = to_255(f);
    double rf = 0, cf = 0;
    for (int y = 0; y < m.h; ++y)
        for (int x = 1; x < m.w; ++x) {
            double d = m.at(y, x) - m.at(y, x - 1);
            rf += d * d;
        }
    for (int y = 1; y < m.h; ++y)
        for (int x = 0; x < m.w; ++x) {
            double d = m.at(y, x) - m.at(y - 1, x);
            cf += d * d;
        }
    rf /= static_cast<double>(m.h) * (m.w - 1);
    cf /= static_cast<double>(m.h - 1) * m.w;
    return std::sqrt(rf + cf);
}

double metric_ag(const Image& f) {
    require_min_dims(f, 2, 2, "metric_ag");
    Mat2 m = to_255(f);
    double acc = 0;
    for (int y = 0; y + 1 < m.h; ++y)
        for (int x = 0; x + 1 < m.w; ++x) {
            double dx = m.at(y, x + 1) - m.at(y, x);
            double dy = m.at(y + 1, x) - m.at(y, x);
            acc += std::sqrt((dx * dx + dy * dy) / 2.0);
        }
    return acc / (static_cast<double>(m.h - 1) * (m.w - 1));
}

double metric_scd(const Image& f, const Image& ir, const Image& vis) {
    if (f.height != ir.height || f.width != ir.width || f.height != vis.height ||
        f.width != vis.width)
        throw std::invalid_argument("metric_scd: dimension mismatch");
    Mat2 mf = to_255(f), mi = to_255(ir), mv = to_255(vis);
    Mat2 fmv(mf.h, mf.w), fmi(mf.h, mf.w);
    for (size_t i = 0; i < mf.size(); ++i) {
        fmv.v[i] = mf.v[i] - mv.v[i];
        fmi.v[i] = mf.v[i] - mi.v[i];
    }
    return pearson(fmv, mi) + pearson(fmi, mv);
}

double metric_vif(const Image& f, const Image& ir, const Image& vis) {
    if (f.height != ir.height || f.width != ir.width || f.height != vis.height ||
        f.width != vis.width)
        throw std::invalid_argument("metric_vif: dimension mismatch");
    require_min_dims(f, 32, 32, "metric_vif");
    Mat2 mf = to_255(f);
    return 0.5 * (vifp(to_255(ir), mf) + vifp(to_255(vis), mf));
}

MetricReport evaluate_metrics(const Image& f, const Image& ir, const Image& vis) {
    MetricReport r;
    r.en = metric_en(f);
    r.sd = metric_sd(f);
    r.sf = metric_sf(f);
    r.ag = metric_ag(f);
    r.scd = metric_scd(f, ir, vis);
    r.vif = metric_vif(f, ir, vis);
    return r;
}

void write_metrics_csv(std::ostream& os,
                       const std::vector<std::pair<std::string, MetricReport>>& rows) {
    os << "image,EN,SD,SF,VIF,AG,SCD\n";
    auto emit = [&](const std::string& name, const MetricReport& r) {
        os << name << ',' << r.en << ',' << r.sd << ',' << r.sf << ',' << r.vif << ',' << r.ag
           << ',' << r.scd << '\n';
    };
    MetricReport mean, var;
    for (const auto& [name, r] : rows) {
        emit(name, r);
        mean.en += r.en;
        mean.sd += r.sd;
        mean.sf += r.sf;
        mean.vif += r.vif;
        mean.ag += r.ag;
        mean.scd += r.scd;
    }
    const double n = rows.empty() ? 1.0 : static_cast<double>(rows.size());
    mean.en /= n;
    mean.sd /= n;
    mean.sf /= n;
    mean.vif /= n;
    mean.ag /= n;
    mean.scd /= n;
    for (const auto& [name, r] : rows) {
        var.en += (r.en - mean.en) * (r.en - mean.en);
        var.sd += (r.sd - mean.sd) * (r.sd - mean.sd);
        var.sf += (r.sf - mean.sf) * (r.sf - mean.sf);
        var.vif += (r.vif - mean.vif) * (r.vif - mean.vif);
        var.ag += (r.ag - mean.ag) * (r.ag - mean.ag);
        var.scd += (r.scd - mean.scd) * (r.scd - mean.scd);
    }
    MetricReport std_dev{std::sqrt(var.en / n), std::sqrt(var.sd / n), std::sqrt(var.sf / n),
                         std::sqrt(var.vif / n), std::sqrt(var.ag / n), std::sqrt(var.scd / n)};
    emit("mean", mean);
    emit("std", std_dev);
}

}  // namespace auif
