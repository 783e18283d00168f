#include "auif/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "auif/checkpoint.hpp"
#include "auif/config.hpp"
#include "auif/dataset.hpp"
#include "auif/decompose.hpp"
#include "auif/fusion.hpp"
#include "auif/gradcheck.hpp"
#include "auif/image_io.hpp"
#include "auif/metrics.hpp"
#include "auif/threading.hpp"
#include "auif/trainer.hpp"

namespace fs = std::filesystem;

namespace auif {
namespace {

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << text;
}

int run_train(const std::string& config_path, const std::vector<std::string>& ablations,
              CLI::App* cmd, const RunConfig& flag_cfg) {
    RunConfig cfg = flag_cfg;  // defaults with command-line flags already applied
    if (!config_path.empty()) {
        cfg = parse_run_config_file(config_path);
        // explicit flags override the file
        if (cmd->count("--data-ir")) cfg.data_ir = flag_cfg.data_ir;
        if (cmd->count("--data-vis")) cfg.data_vis = flag_cfg.data_vis;
        if (cmd->count("--out")) cfg.out = flag_cfg.out;
        if (cmd->count("--seed")) cfg.train.seed = flag_cfg.train.seed;
        if (cmd->count("--epochs")) cfg.train.epochs = flag_cfg.train.epochs;
        if (cmd->count("--batch-size")) cfg.train.batch_size = flag_cfg.train.batch_size;
        if (cmd->count("--crop")) cfg.train.crop = flag_cfg.train.crop;
        if (cmd->count("--mu")) cfg.train.mu = flag_cfg.train.mu;
        if (cmd->count("--lr1")) cfg.train.lr_phase1 = flag_cfg.train.lr_phase1;
        if (cmd->count("--lr2")) cfg.train.lr_phase2 = flag_cfg.train.lr_phase2;
        if (cmd->count("--phase-split")) cfg.train.phase_split = flag_cfg.train.phase_split;
        if (cmd->count("--optimizer")) cfg.train.optimizer = flag_cfg.train.optimizer;
        if (cmd->count("--num-layers")) cfg.train.num_layers = flag_cfg.train.num_layers;
        if (cmd->count("--channels")) cfg.train.channels = flag_cfg.train.channels;
        if (cmd->count("--clip-norm")) cfg.train.clip_norm = flag_cfg.train.clip_norm;
    }
    for (const auto& name : ablations) cfg.train.ablation |= ablation_from_name(name);

    if (cfg.data_ir.empty() || cfg.data_vis.empty())
        throw std::runtime_error("train: --data-ir and --data-vis (or config) are required");

    PairedDataset ds = pair_directories(cfg.data_ir, cfg.data_vis, cfg.train.crop);
    for (const auto& r : ds.reports) std::cerr << "warning: " << r << "\n";
    std::vector<Image> images = load_all_images(ds);
    std::cout << "training on " << images.size() << " images (" << ds.pairs.size() << " pairs)\n";

    TrainResult result = train(images, cfg.train);
    save_checkpoint(result.params, cfg.out);
    write_text_file(cfg.out + ".config", run_config_text(cfg));
    {
        std::ofstream os(cfg.out + ".loss.csv", std::ios::trunc);
        write_train_log_csv(os, result.log);
    }
    {
        std::ofstream os(cfg.out + ".etatheta.csv", std::ios::trunc);
        write_eta_theta_csv(os, result.log);
    }
    std::cout << "trained " << parameter_count(result.params) << " learnables, "
              << result.log.steps.size() << " steps in " << result.log.wall_seconds
              << " s; final epoch mean loss " << result.log.epoch_mean_loss.back() << "\n"
              << "checkpoint written to " << cfg.out << "\n";
    return 0;
}

int run_fuse(const std::string& checkpoint, const std::string& ir_path,
             const std::string& vis_path, const std::string& out_path,
             const std::string& strategy_name, double avg_weight,
             const std::string& dump_dir) {
    NetworkParamsF params = load_checkpoint(checkpoint);
    MergeStrategy strategy = MergeStrategy::from_name(strategy_name, avg_weight);
    Image ir = load_gray(ir_path), vis = load_gray(vis_path);
    FusionResult result = fuse(ir, vis, params, strategy, !dump_dir.empty());
    size_t clamped = save_gray(result.fused, out_path);
    if (clamped > 0)
        std::cerr << "warning: " << clamped << " pixels clamped to [0,1] on save\n";
    if (!dump_dir.empty()) {
        fs::create_directories(dump_dir);
        auto dump = [&](const Tensor4f& map, const std::string& name) {
            float lo = map.data[0], hi = map.data[0];
            for (float v : map.data) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            Image img(map.h, map.w);
            const float range = hi - lo;
            for (size_t i = 0; i < img.size(); ++i)
                img.pix[i] = range > 0 ? (map.data[i] - lo) / range : 0.5f;
            save_gray(img, (fs::path(dump_dir) / (name + ".png")).string());
        };
        dump(*result.merged_base, "merged_base");
        dump(*result.merged_detail, "merged_detail");
    }
    std::cout << "fused image written to " << out_path << "\n";
    return 0;
}

int run_decompose(const std::string& method, const std::string& input,
                  const std::string& out_base, const std::string& out_detail, double theta,
                  double eta, bool eta_given, int iters, double lambda) {
    Image img = load_gray(input);
    DecomposeResult r;
    if (method == "filter") {
        r = filter_decompose(img);
    } else if (method == "optim") {
        r = optim_decompose(img, lambda, iters, eta_given ? eta : 0.1);
    } else if (method == "gd-base") {
        // the Laplacian regularizer needs a small step to stay contractive
        r = classic_gd_decompose(img, GdVariant::base, theta, eta_given ? eta : 0.01, iters);
    } else if (method == "gd-detail") {
        r = classic_gd_decompose(img, GdVariant::detail, theta, eta_given ? eta : 0.1, iters);
    } else {
        throw std::runtime_error("unknown decompose method: " + method);
    }
    size_t c1 = save_gray(r.base, out_base);
    size_t c2 = save_gray(r.detail, out_detail);
    if (c1 + c2 > 0)
        std::cerr << "warning: " << (c1 + c2) << " pixels clamped to [0,1] on save\n";
    if (!r.loss_trace.empty())
        std::cout << "objective " << r.loss_trace.front() << " -> " << r.loss_trace.back() << " in "
                  << (r.loss_trace.size() - 1) << " iterations\n";
    std::cout << "base written to " << out_base << ", detail to " << out_detail << "\n";
    return 0;
}

int run_eval(const std::string& ir_dir, const std::string& vis_dir, const std::string& fused_dir,
             const std::string& csv_path) {
    PairedDataset ds = pair_directories(ir_dir, vis_dir);
    for (const auto& r : ds.reports) std::cerr << "warning: " << r << "\n";

    struct Job {
        std::string stem, ir, vis, fused;
    };
    std::vector<Job> jobs;
    for (const auto& p : ds.pairs) {
        std::string fused;
        for (const char* ext : {".png", ".pgm", ".ppm"}) {
            fs::path cand = fs::path(fused_dir) / (p.stem + ext);
            if (fs::exists(cand)) {
                fused = cand.string();
                break;
            }
        }
        if (fused.empty()) {
            std::cerr << "warning: no fused image for stem '" << p.stem << "'\n";
            continue;
        }
        jobs.push_back({p.stem, p.ir_path, p.vis_path, fused});
    }
    if (jobs.empty()) throw std::runtime_error("eval: nothing to evaluate in " + fused_dir);

    std::vector<std::pair<std::string, MetricReport>> rows(jobs.size());
    parallel_for(jobs.size(), [&](size_t b, size_t e) {
        for (size_t i = b; i < e; ++i) {
            Image ir = load_gray(jobs[i].ir), vis = load_gray(jobs[i].vis);
            Image fused = load_gray(jobs[i].fused);
            rows[i] = {jobs[i].stem, evaluate_metrics(fused, ir, vis)};
        }
    });
    std::ofstream os(csv_path, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + csv_path);
    write_metrics_csv(os, rows);
    std::cout << "evaluated " << rows.size() << " images -> " << csv_path << "\n";
    return 0;
}

int run_gradcheck(double tolerance) {
    auto checks = run_gradcheck_suite(5, tolerance / 1e-4);
    bool all_pass = true;
    for (const auto& c : checks) {
        std::printf("%-12s max_rel_err %.3e  tol %.1e  %s\n", c.op.c_str(), c.report.max_rel_err,
                    c.tolerance, c.pass() ? "PASS" : "FAIL");
        if (!c.pass()) {
            all_pass = false;
            if (!c.report.failure.empty()) std::printf("  %s\n", c.report.failure.c_str());
        }
    }
    return all_pass ? 0 : 1;
}

int run_params(const std::string& checkpoint) {
    NetworkParamsF params = load_checkpoint(checkpoint);
    std::cout << parameter_count(params) << "\n";
    return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"AUIF: unrolled two-scale decomposition for infrared/visible image fusion"};
    app.require_subcommand(1);

    // train
    auto* train_cmd = app.add_subcommand("train", "train the reconstruction network");
    std::string cfg_path;
    RunConfig cfg;
    std::vector<std::string> ablations;
    train_cmd->add_option("--config", cfg_path, "key = value config file");
    train_cmd->add_option("--data-ir", cfg.data_ir, "infrared image directory");
    train_cmd->add_option("--data-vis", cfg.data_vis, "visible image directory");
    train_cmd->add_option("--out", cfg.out, "checkpoint output path");
    train_cmd->add_option("--seed", cfg.train.seed, "RNG seed");
    train_cmd->add_option("--ablation", ablations,
                          "plain_conv|no_init|base_only|detail_only|l2_only|ssim_only");
    train_cmd->add_option("--epochs", cfg.train.epochs, "training epochs");
    train_cmd->add_option("--batch-size", cfg.train.batch_size, "batch size");
    train_cmd->add_option("--crop", cfg.train.crop, "crop size");
    train_cmd->add_option("--mu", cfg.train.mu, "SSIM loss weight");
    train_cmd->add_option("--lr1", cfg.train.lr_phase1, "learning rate, first phase");
    train_cmd->add_option("--lr2", cfg.train.lr_phase2, "learning rate, second phase");
    train_cmd->add_option("--phase-split", cfg.train.phase_split, "epoch of the rate switch");
    train_cmd->add_option("--optimizer", cfg.train.optimizer, "adam|sgd");
    train_cmd->add_option("--num-layers", cfg.train.num_layers, "BCL/DCL layers per encoder");
    train_cmd->add_option("--channels", cfg.train.channels, "Conv1 output channels");
    train_cmd->add_option("--clip-norm", cfg.train.clip_norm, "gradient clipping (0 = off)");

    // fuse
    auto* fuse_cmd = app.add_subcommand("fuse", "fuse an infrared/visible pair");
    std::string ckpt, ir_path, vis_path, out_path, strategy = "addition", dump_dir;
    double avg_weight = 0.5;
    fuse_cmd->add_option("--checkpoint", ckpt)->required();
    fuse_cmd->add_option("--ir", ir_path)->required();
    fuse_cmd->add_option("--vis", vis_path)->required();
    fuse_cmd->add_option("--out", out_path)->required();
    fuse_cmd->add_option("--strategy", strategy, "addition|average|l1att");
    fuse_cmd->add_option("--avg-weight", avg_weight, "average strategy weight");
    fuse_cmd->add_option("--dump-maps", dump_dir, "dump merged feature maps here");

    // decompose
    auto* dec_cmd = app.add_subcommand("decompose", "classical two-scale decomposition");
    std::string method, dec_in, dec_base, dec_detail;
    double theta = 1.0, eta = 0.1, lambda = 5.0;
    int iters = 200;
    dec_cmd->add_option("--method", method, "filter|optim|gd-base|gd-detail")->required();
    dec_cmd->add_option("--input", dec_in)->required();
    dec_cmd->add_option("--out-base", dec_base)->required();
    dec_cmd->add_option("--out-detail", dec_detail)->required();
    dec_cmd->add_option("--theta", theta, "fidelity weight");
    dec_cmd->add_option("--eta", eta, "gradient step size");
    dec_cmd->add_option("--iters", iters, "iterations");
    dec_cmd->add_option("--lambda", lambda, "regularization weight (optim)");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "fusion quality metrics to CSV");
    std::string e_ir, e_vis, e_fused, e_csv;
    eval_cmd->add_option("--ir-dir", e_ir)->required();
    eval_cmd->add_option("--vis-dir", e_vis)->required();
    eval_cmd->add_option("--fused-dir", e_fused)->required();
    eval_cmd->add_option("--csv", e_csv)->required();

    // gradcheck
    auto* gc_cmd = app.add_subcommand("gradcheck", "finite-difference gradient suite");
    double tolerance = 1e-4;
    gc_cmd->add_option("--tolerance", tolerance, "composite tolerance (primitives use /10)");

    // params
    auto* params_cmd = app.add_subcommand("params", "print the learnable parameter count");
    std::string params_ckpt;
    params_cmd->add_option("--checkpoint", params_ckpt)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (train_cmd->parsed()) return run_train(cfg_path, ablations, train_cmd, cfg);
        if (fuse_cmd->parsed())
            return run_fuse(ckpt, ir_path, vis_path, out_path, strategy, avg_weight, dump_dir);
        if (dec_cmd->parsed())
            return run_decompose(method, dec_in, dec_base, dec_detail, theta, eta,
                                 dec_cmd->count("--eta") > 0, iters, lambda);
        if (eval_cmd->parsed()) return run_eval(e_ir, e_vis, e_fused, e_csv);
        if (gc_cmd->parsed()) return run_gradcheck(tolerance);
        if (params_cmd->parsed()) return run_params(params_ckpt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace auif
