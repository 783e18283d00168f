#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "auif/image.hpp"

namespace auif {

/// Per-image fusion quality record. EN/SD/SF/AG are computed on the 0-255
/// intensity scale; VIF and SCD are dimensionless.
struct MetricReport {
    double en = 0, sd = 0, sf = 0, vif = 0, ag = 0, scd = 0;
};

double metric_en(const Image& f);
double metric_sd(const Image& f);
double metric_sf(const Image& f);
double metric_ag(const Image& f);
/// r(F-V, I) + r(F-I, V); Pearson r, defined as 0 for zero variance.
double metric_scd(const Image& f, const Image& ir, const Image& vis);
/// Pixel-domain visual information fidelity of f against each source over a
/// 4-level Gaussian pyramid (noise variance 2 on the 0-255 scale), averaged
/// over the two sources. Needs dims >= 32.
double metric_vif(const Image& f, const Image& ir, const Image& vis);

MetricReport evaluate_metrics(const Image& f, const Image& ir, const Image& vis);

/// CSV report: header, one row per image, then mean and std rows.
void write_metrics_csv(std::ostream& os,
                       const std::vector<std::pair<std::string, MetricReport>>& rows);

}  // namespace auif
