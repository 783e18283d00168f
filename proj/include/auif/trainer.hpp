#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "auif/image.hpp"
#include "auif/network.hpp"
#include "auif/rng.hpp"

namespace auif {

struct TrainConfig {
    int epochs = 80;
    int batch_size = 32;
    int crop = 128;
    double mu = 5.0;
    double lr_phase1 = 1e-2;
    double lr_phase2 = 1e-3;
    int phase_split = 40;
    uint64_t seed = 0;
    std::string optimizer = "adam";  // "adam" | "sgd"
    double adam_beta1 = 0.9, adam_beta2 = 0.999, adam_eps = 1e-8;
    double clip_norm = 0.0;  // 0 disables gradient clipping
    int num_layers = 10;
    int channels = 64;
    uint32_t ablation = 0;
    std::string snapshot_prefix = "auif_abort";  // diagnostic dump on non-finite loss

    void validate() const;
};

struct TrainLog {
    struct StepRecord {
        int step = 0, epoch = 0;
        double lr = 0, l2 = 0, ssim_part = 0, total = 0;
    };
    std::vector<StepRecord> steps;
    std::vector<double> epoch_mean_loss;
    // one series per layer (base layers first, then detail), sampled per step
    std::vector<std::vector<float>> eta_series, theta_series;
    double wall_seconds = 0;
    uint64_t seed = 0;
    TrainConfig config;
};

/// Piecewise-constant schedule: lr_phase1 before phase_split, lr_phase2 after.
double lr_at_epoch(int epoch, const TrainConfig& cfg);

/// batch_size random crops: uniform source image, uniform axis-aligned
/// window offset. Every source must be at least crop x crop.
Tensor4f sample_batch(const std::vector<Image>& dataset, const TrainConfig& cfg, Rng& rng);

struct TrainResult {
    NetworkParamsF params;
    TrainLog log;
};

TrainResult train(const std::vector<Image>& dataset, const TrainConfig& cfg);

void write_train_log_csv(std::ostream& os, const TrainLog& log);
void write_eta_theta_csv(std::ostream& os, const TrainLog& log);

}  // namespace auif
