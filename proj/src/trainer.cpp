#include "auif/trainer.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "auif/checkpoint.hpp"
#include "auif/losses.hpp"

namespace auif {

void TrainConfig::validate() const {
    if (epochs < 1) throw std::invalid_argument("TrainConfig: epochs must be >= 1");
    if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
    if (crop < 1) throw std::invalid_argument("TrainConfig: crop must be >= 1");
    if (phase_split < 0) throw std::invalid_argument("TrainConfig: phase_split must be >= 0");
    if (optimizer != "adam" && optimizer != "sgd")
        throw std::invalid_argument("TrainConfig: optimizer must be adam or sgd");
    NetworkConfig nc{num_layers, channels, ablation};
    nc.validate();
}

double lr_at_epoch(int epoch, const TrainConfig& cfg) {
    if (epoch < 0 || epoch >= cfg.epochs)
        throw std::out_of_range("lr_at_epoch: epoch " + std::to_string(epoch) +
                                " outside [0, " + std::to_string(cfg.epochs) + ")");
    return epoch < cfg.phase_split ? cfg.lr_phase1 : cfg.lr_phase2;
}

Tensor4f sample_batch(const std::vector<Image>& dataset, const TrainConfig& cfg, Rng& rng) {
    if (dataset.empty()) throw std::invalid_argument("sample_batch: empty dataset");
    for (const auto& img : dataset)
        if (img.height < cfg.crop || img.width < cfg.crop)
            throw std::invalid_argument("sample_batch: image smaller than crop size");
    Tensor4f batch(cfg.batch_size, 1, cfg.crop, cfg.crop);
    for (int b = 0; b < cfg.batch_size; ++b) {
        const Image& img = dataset[rng.uniform_int(dataset.size())];
        const int oy = static_cast<int>(rng.uniform_int(img.height - cfg.crop + 1));
        const int ox = static_cast<int>(rng.uniform_int(img.width - cfg.crop + 1));
        float* dst = batch.plane(b, 0);
        for (int y = 0; y < cfg.crop; ++y)
            for (int x = 0; x < cfg.crop; ++x)
                dst[static_cast<size_t>(y) * cfg.crop + x] = img.at(oy + y, ox + x);
    }
    return batch;
}

namespace {

struct Optimizer {
    const TrainConfig& cfg;
    std::vector<ParamView<float>> views;
    std::vector<std::vector<float>> m, v;
    long t = 0;

    explicit Optimizer(const TrainConfig& c, NetworkParamsF& params)
        : cfg(c), views(learnable_views(params)) {
        m.resize(views.size());
        v.resize(views.size());
        for (size_t i = 0; i < views.size(); ++i) {
            m[i].assign(views[i].count, 0.0f);
            v[i].assign(views[i].count, 0.0f);
        }
    }

    void step(NetworkParamsF& grads, double lr) {
        auto gviews = learnable_views(grads);
        double scale = 1.0;
        if (cfg.clip_norm > 0) {
            double sq = 0;
            for (const auto& gv : gviews)
                for (size_t i = 0; i < gv.count; ++i) sq += double(gv.data[i]) * gv.data[i];
            double norm = std::sqrt(sq);
            if (norm > cfg.clip_norm) scale = cfg.clip_norm / norm;
        }
        ++t;
        if (cfg.optimizer == "sgd") {
            for (size_t k = 0; k < views.size(); ++k)
                for (size_t i = 0; i < views[k].count; ++i)
                    views[k].data[i] -= static_cast<float>(lr * scale * gviews[k].data[i]);
            return;
        }
        const float b1 = static_cast<float>(cfg.adam_beta1);
        const float b2 = static_cast<float>(cfg.adam_beta2);
        const float bc1 = 1.0f - static_cast<float>(std::pow(cfg.adam_beta1, t));
        const float bc2 = 1.0f - static_cast<float>(std::pow(cfg.adam_beta2, t));
        const float eps = static_cast<float>(cfg.adam_eps);
        for (size_t k = 0; k < views.size(); ++k) {
            float* p = views[k].data;
            const float* g = gviews[k].data;
            for (size_t i = 0; i < views[k].count; ++i) {
                const float gi = static_cast<float>(scale) * g[i];
                m[k][i] = b1 * m[k][i] + (1.0f - b1) * gi;
                v[k][i] = b2 * v[k][i] + (1.0f - b2) * gi * gi;
                const float mhat = m[k][i] / bc1;
                const float vhat = v[k][i] / bc2;
                p[i] -= static_cast<float>(lr) * mhat / (std::sqrt(vhat) + eps);
            }
        }
    }
};

void dump_snapshot(const NetworkParamsF& params, const Tensor4f& batch,
                   const std::string& prefix) {
    save_checkpoint(params, prefix + ".params.auif");
    std::ofstream os(prefix + ".batch.bin", std::ios::binary | std::ios::trunc);
    int32_t dims[4] = {batch.n, batch.c, batch.h, batch.w};
    os.write(reinterpret_cast<const char*>(dims), sizeof(dims));
    os.write(reinterpret_cast<const char*>(batch.data.data()),
             static_cast<std::streamsize>(batch.size() * sizeof(float)));
}

}  // namespace

TrainResult train(const std::vector<Image>& dataset, const TrainConfig& cfg) {
    cfg.validate();
    if (dataset.empty()) throw std::invalid_argument("train: empty dataset");
    const auto t0 = std::chrono::steady_clock::now();

    TrainResult out;
    out.params = init_network<float>(cfg.num_layers, cfg.channels, cfg.seed, cfg.ablation);
    out.log.seed = cfg.seed;
    out.log.config = cfg;
    const int series = 2 * cfg.num_layers;
    out.log.eta_series.resize(series);
    out.log.theta_series.resize(series);

    Rng batch_rng(cfg.seed * 0x9E3779B97F4A7C15ull + 1);
    Optimizer opt(cfg, out.params);

    const float mu_eff = (cfg.ablation & kAblL2Only) ? 0.0f : static_cast<float>(cfg.mu);
    const float w_l2 = (cfg.ablation & kAblSsimOnly) ? 0.0f : 1.0f;
    const int steps_per_epoch =
        static_cast<int>((dataset.size() + cfg.batch_size - 1) / cfg.batch_size);

    int step = 0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const double lr = lr_at_epoch(epoch, cfg);
        double epoch_sum = 0;
        for (int s = 0; s < steps_per_epoch; ++s, ++step) {
            Tensor4f batch = sample_batch(dataset, cfg, batch_rng);
            GradTape<float> tape;
            Tensor4f xhat = net_forward(batch, out.params, BnMode::train, &tape, true);
            LossValue<float> val;
            Tensor4f dxhat = total_loss_backward(batch, xhat, mu_eff, w_l2, &val);
            if (!std::isfinite(val.total)) {
                dump_snapshot(out.params, batch, cfg.snapshot_prefix);
                throw std::runtime_error(
                    "train: non-finite loss at step " + std::to_string(step) +
                    "; diagnostic snapshot written to " + cfg.snapshot_prefix +
                    ".params.auif / .batch.bin");
            }
            NetworkParamsF grads = zeros_like(out.params);
            net_backward(dxhat, tape, out.params, grads);
            opt.step(grads, lr);

            out.log.steps.push_back(
                {step, epoch, lr, double(val.l2_part), double(val.ssim_part), double(val.total)});
            for (int l = 0; l < cfg.num_layers; ++l) {
                out.log.eta_series[l].push_back(out.params.base_layers[l].eta);
                out.log.theta_series[l].push_back(out.params.base_layers[l].theta);
                out.log.eta_series[cfg.num_layers + l].push_back(out.params.detail_layers[l].eta);
                out.log.theta_series[cfg.num_layers + l].push_back(
                    out.params.detail_layers[l].theta);
            }
            epoch_sum += val.total;
        }
        out.log.epoch_mean_loss.push_back(epoch_sum / steps_per_epoch);
    }
    out.log.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

void write_train_log_csv(std::ostream& os, const TrainLog& log) {
    os << "step,epoch,lr,l2,ssim_part,total\n";
    for (const auto& s : log.steps)
        os << s.step << ',' << s.epoch << ',' << s.lr << ',' << s.l2 << ',' << s.ssim_part << ','
           << s.total << '\n';
}

void write_eta_theta_csv(std::ostream& os, const TrainLog& log) {
    const int n = log.config.num_layers;
    os << "step";
    for (int l = 0; l < n; ++l) os << ",base." << l << ".eta";
    for (int l = 0; l < n; ++l) os << ",detail." << l << ".eta";
    for (int l = 0; l < n; ++l) os << ",base." << l << ".theta";
    for (int l = 0; l < n; ++l) os << ",detail." << l << ".theta";
    os << '\n';
    const size_t steps = log.eta_series.empty() ? 0 : log.eta_series[0].size();
    for (size_t s = 0; s < steps; ++s) {
        os << s;
        for (int l = 0; l < 2 * n; ++l) os << ',' << log.eta_series[l][s];
        for (int l = 0; l < 2 * n; ++l) os << ',' << log.theta_series[l][s];
        os << '\n';
    }
}

}  // namespace auif
