#pragma once

#include <string>
#include <vector>

#include "auif/image.hpp"

namespace auif {

struct PairedDataset {
    struct Pair {
        std::string stem, ir_path, vis_path;
        int height = 0, width = 0;
    };
    std::vector<Pair> pairs;           // stem-sorted
    std::vector<std::string> reports;  // unmatched files, rejected pairs
};

/// Stem-matches image files across the two directories, sorted
/// lexicographically. Pairs with mismatched dimensions, or smaller than
/// min_size in either dimension, are dropped with a named report.
/// Throws when no usable pair remains.
PairedDataset pair_directories(const std::string& ir_dir, const std::string& vis_dir,
                               int min_size = 0);

/// Loads every image of the dataset (infrared then visible, pair order).
std::vector<Image> load_all_images(const PairedDataset& ds);

}  // namespace auif
