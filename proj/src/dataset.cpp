#include "auif/dataset.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <stdexcept>

#include "auif/image_io.hpp"

namespace fs = std::filesystem;

namespace auif {
namespace {

bool image_extension(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".png" || ext == ".pgm" || ext == ".ppm" || ext == ".pnm";
}

std::map<std::string, std::string> scan_dir(const std::string& dir) {
    if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir);
    std::map<std::string, std::string> stems;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && image_extension(entry.path()))
            stems[entry.path().stem().string()] = entry.path().string();
    return stems;
}

}  // namespace

PairedDataset pair_directories(const std::string& ir_dir, const std::string& vis_dir,
                               int min_size) {
    auto ir = scan_dir(ir_dir);
    auto vis = scan_dir(vis_dir);

    PairedDataset ds;
    for (const auto& [stem, ir_path] : ir) {
        auto it = vis.find(stem);
        if (it == vis.end()) {
            ds.reports.push_back("unmatched infrared file: " + ir_path);
            continue;
        }
        Image a = load_gray(ir_path);
        Image b = load_gray(it->second);
        if (a.height != b.height || a.width != b.width) {
            ds.reports.push_back("pair '" + stem + "' rejected: dimension mismatch " +
                                 std::to_string(a.height) + "x" + std::to_string(a.width) +
                                 " vs " + std::to_string(b.height) + "x" +
                                 std::to_string(b.width));
            continue;
        }
        if (a.height < min_size || a.width < min_size) {
            ds.reports.push_back("pair '" + stem + "' rejected: smaller than " +
                                 std::to_string(min_size) + "x" + std::to_string(min_size));
            continue;
        }
        ds.pairs.push_back({stem, ir_path, it->second, a.height, a.width});
    }
    for (const auto& [stem, path] : vis)
        if (!ir.count(stem)) ds.reports.push_back("unmatched visible file: " + path);

    std::sort(ds.pairs.begin(), ds.pairs.end(),
              [](const auto& a, const auto& b) { return a.stem < b.stem; });
    if (ds.pairs.empty())
        throw std::runtime_error("no usable image pairs between " + ir_dir + " and " + vis_dir);
    return ds;
}

std::vector<Image> load_all_images(const PairedDataset& ds) {
    std::vector<Image> out;
    out.reserve(2 * ds.pairs.size());
    for (const auto& p : ds.pairs) out.push_back(load_gray(p.ir_path));
    for (const auto& p : ds.pairs) out.push_back(load_gray(p.vis_path));
    return out;
}

}  // namespace auif
