#include "auif/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace auif {
namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    size_t e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

uint32_t parse_ablation_list(const std::string& value) {
    uint32_t mask = 0;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) mask |= ablation_from_name(item);
    }
    return mask;
}

}  // namespace

RunConfig parse_run_config(std::istream& is) {
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));

        auto as_int = [&] { return std::stoi(value); };
        auto as_u64 = [&] { return std::stoull(value); };
        auto as_double = [&] { return std::stod(value); };

        if (key == "epochs") cfg.train.epochs = as_int();
        else if (key == "batch_size") cfg.train.batch_size = as_int();
        else if (key == "crop") cfg.train.crop = as_int();
        else if (key == "mu") cfg.train.mu = as_double();
        else if (key == "lr_phase1") cfg.train.lr_phase1 = as_double();
        else if (key == "lr_phase2") cfg.train.lr_phase2 = as_double();
        else if (key == "phase_split") cfg.train.phase_split = as_int();
        else if (key == "seed") cfg.train.seed = as_u64();
        else if (key == "optimizer") cfg.train.optimizer = value;
        else if (key == "adam_beta1") cfg.train.adam_beta1 = as_double();
        else if (key == "adam_beta2") cfg.train.adam_beta2 = as_double();
        else if (key == "adam_eps") cfg.train.adam_eps = as_double();
        else if (key == "clip_norm") cfg.train.clip_norm = as_double();
        else if (key == "num_layers") cfg.train.num_layers = as_int();
        else if (key == "channels") cfg.train.channels = as_int();
        else if (key == "ablation") cfg.train.ablation = parse_ablation_list(value);
        else if (key == "snapshot_prefix") cfg.train.snapshot_prefix = value;
        else if (key == "data_ir") cfg.data_ir = value;
        else if (key == "data_vis") cfg.data_vis = value;
        else if (key == "out") cfg.out = value;
        else if (key == "strategy") cfg.strategy = value;
        else if (key == "avg_weight") cfg.avg_weight = as_double();
        else
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": unknown key '" + key + "'");
    }
    return cfg;
}

RunConfig parse_run_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file: " + path);
    return parse_run_config(is);
}

void echo_run_config(std::ostream& os, const RunConfig& cfg) {
    os << "epochs = " << cfg.train.epochs << '\n';
    os << "batch_size = " << cfg.train.batch_size << '\n';
    os << "crop = " << cfg.train.crop << '\n';
    os << "mu = " << fmt_double(cfg.train.mu) << '\n';
    os << "lr_phase1 = " << fmt_double(cfg.train.lr_phase1) << '\n';
    os << "lr_phase2 = " << fmt_double(cfg.train.lr_phase2) << '\n';
    os << "phase_split = " << cfg.train.phase_split << '\n';
    os << "seed = " << cfg.train.seed << '\n';
    os << "optimizer = " << cfg.train.optimizer << '\n';
    os << "adam_beta1 = " << fmt_double(cfg.train.adam_beta1) << '\n';
    os << "adam_beta2 = " << fmt_double(cfg.train.adam_beta2) << '\n';
    os << "adam_eps = " << fmt_double(cfg.train.adam_eps) << '\n';
    os << "clip_norm = " << fmt_double(cfg.train.clip_norm) << '\n';
    os << "num_layers = " << cfg.train.num_layers << '\n';
    os << "channels = " << cfg.train.channels << '\n';
    os << "ablation = " << ablation_names(cfg.train.ablation) << '\n';
    os << "snapshot_prefix = " << cfg.train.snapshot_prefix << '\n';
    os << "data_ir = " << cfg.data_ir << '\n';
    os << "data_vis = " << cfg.data_vis << '\n';
    os << "out = " << cfg.out << '\n';
    os << "strategy = " << cfg.strategy << '\n';
    os << "avg_weight = " << fmt_double(cfg.avg_weight) << '\n';
}

std::string run_config_text(const RunConfig& cfg) {
    std::ostringstream ss;
    echo_run_config(ss, cfg);
    return ss.str();
}

}  // namespace auif
