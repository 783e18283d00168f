#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "auif/ops.hpp"
#include "auif/rng.hpp"
#include "auif/tensor.hpp"

namespace auif {

// ---------------------------------------------------------------------------
// ablation flags (checkpoint bitmask layout is part of the file format)
// ---------------------------------------------------------------------------

enum AblationFlag : uint32_t {
    kAblPlainConv = 1u << 0,   // convolution units connected end to end, no update arithmetic
    kAblNoInit = 1u << 1,      // skip the blur/Laplacian initialization layers
    kAblBaseOnly = 1u << 2,    // decoder sees only the base feature map
    kAblDetailOnly = 1u << 3,  // decoder sees only the detail feature map
    kAblL2Only = 1u << 4,      // training loss drops the SSIM term
    kAblSsimOnly = 1u << 5,    // training loss drops the l2 term
};

inline uint32_t ablation_from_name(const std::string& name) {
    if (name == "plain_conv") return kAblPlainConv;
    if (name == "no_init") return kAblNoInit;
    if (name == "base_only") return kAblBaseOnly;
    if (name == "detail_only") return kAblDetailOnly;
    if (name == "l2_only") return kAblL2Only;
    if (name == "ssim_only") return kAblSsimOnly;
    throw std::invalid_argument("unknown ablation: " + name);
}

inline std::string ablation_names(uint32_t mask) {
    static const std::pair<uint32_t, const char*> table[] = {
        {kAblPlainConv, "plain_conv"}, {kAblNoInit, "no_init"},
        {kAblBaseOnly, "base_only"},   {kAblDetailOnly, "detail_only"},
        {kAblL2Only, "l2_only"},       {kAblSsimOnly, "ssim_only"},
    };
    std::string out;
    for (const auto& [bit, nm] : table)
        if (mask & bit) {
            if (!out.empty()) out += ",";
            out += nm;
        }
    return out;
}

struct NetworkConfig {
    int num_layers = 10;
    int channels = 64;
    uint32_t ablation = 0;

    bool plain_conv() const { return ablation & kAblPlainConv; }
    bool no_init() const { return ablation & kAblNoInit; }
    bool base_only() const { return ablation & kAblBaseOnly; }
    bool detail_only() const { return ablation & kAblDetailOnly; }

    void validate() const {
        if (num_layers < 0 || channels < 1)
            throw std::invalid_argument("NetworkConfig: need num_layers >= 0 and channels >= 1");
        if (base_only() && detail_only())
            throw std::invalid_argument("NetworkConfig: base_only and detail_only are exclusive");
    }
};

// ---------------------------------------------------------------------------
// parameters
// ---------------------------------------------------------------------------

template <class T>
struct BnState {
    std::vector<T> scale, shift, running_mean, running_var;
    explicit BnState(int channels = 1)
        : scale(channels, T(1)),
          shift(channels, T(0)),
          running_mean(channels, T(0)),
          running_var(channels, T(1)) {}
};

/// One BCL/DCL layer. kernel2 is never stored: it is rederived from kernel1
/// via tie_rot180 whenever needed.
template <class T>
struct LayerParams {
    Tensor4<T> kernel1;  // (C, 1, 3, 3)
    T eta = T(0);
    T theta = T(0);
    BnState<T> bn{1};
    T prelu_slope = T(0.25);
};

template <class T>
struct NetworkParams {
    NetworkConfig config;
    std::vector<LayerParams<T>> base_layers, detail_layers;
    Tensor4<T> decoder_kernel;  // (1, 1, 3, 3)
    BnState<T> decoder_bn{1};

    template <class U>
    NetworkParams<U> cast() const {
        NetworkParams<U> out;
        out.config = config;
        auto cast_layer = [](const LayerParams<T>& l) {
            LayerParams<U> o;
            o.kernel1 = l.kernel1.template cast<U>();
            o.eta = static_cast<U>(l.eta);
            o.theta = static_cast<U>(l.theta);
            o.prelu_slope = static_cast<U>(l.prelu_slope);
            for (size_t i = 0; i < l.bn.scale.size(); ++i) {
                o.bn.scale[i] = static_cast<U>(l.bn.scale[i]);
                o.bn.shift[i] = static_cast<U>(l.bn.shift[i]);
                o.bn.running_mean[i] = static_cast<U>(l.bn.running_mean[i]);
                o.bn.running_var[i] = static_cast<U>(l.bn.running_var[i]);
            }
            return o;
        };
        for (const auto& l : base_layers) out.base_layers.push_back(cast_layer(l));
        for (const auto& l : detail_layers) out.detail_layers.push_back(cast_layer(l));
        out.decoder_kernel = decoder_kernel.template cast<U>();
        out.decoder_bn.scale[0] = static_cast<U>(decoder_bn.scale[0]);
        out.decoder_bn.shift[0] = static_cast<U>(decoder_bn.shift[0]);
        out.decoder_bn.running_mean[0] = static_cast<U>(decoder_bn.running_mean[0]);
        out.decoder_bn.running_var[0] = static_cast<U>(decoder_bn.running_var[0]);
        return out;
    }
};

using NetworkParamsF = NetworkParams<float>;

template <class T>
NetworkParams<T> init_network(int num_layers, int channels, uint64_t seed, uint32_t ablation = 0) {
    NetworkConfig cfg;
    cfg.num_layers = num_layers;
    cfg.channels = channels;
    cfg.ablation = ablation;
    cfg.validate();

    Rng rng(seed);
    const double kernel_std = std::sqrt(2.0 / 9.0);  // fan_in = 9 * in_channels, in_channels = 1
    auto make_layer = [&](double theta_init) {
        LayerParams<T> l;
        l.kernel1 = Tensor4<T>(channels, 1, 3, 3);
        for (auto& v : l.kernel1.data) v = static_cast<T>(rng.normal(0.0, kernel_std));
        l.eta = static_cast<T>(rng.normal(0.1, 0.03));
        l.theta = static_cast<T>(theta_init);
        return l;
    };

    NetworkParams<T> p;
    p.config = cfg;
    for (int i = 0; i < num_layers; ++i) p.base_layers.push_back(make_layer(1e-3));
    for (int i = 0; i < num_layers; ++i) p.detail_layers.push_back(make_layer(1.0));
    p.decoder_kernel = Tensor4<T>(1, 1, 3, 3);
    for (auto& v : p.decoder_kernel.data) v = static_cast<T>(rng.normal(0.0, kernel_std));
    return p;
}

/// Zero-valued network with the shapes implied by `cfg` (checkpoint loading).
template <class T>
NetworkParams<T> make_network_skeleton(const NetworkConfig& cfg) {
    cfg.validate();
    NetworkParams<T> p;
    p.config = cfg;
    for (int i = 0; i < 2 * cfg.num_layers; ++i) {
        LayerParams<T> l;
        l.kernel1 = Tensor4<T>(cfg.channels, 1, 3, 3);
        l.prelu_slope = T(0);
        (i < cfg.num_layers ? p.base_layers : p.detail_layers).push_back(std::move(l));
    }
    p.decoder_kernel = Tensor4<T>(1, 1, 3, 3);
    return p;
}

// ---------------------------------------------------------------------------
// parameter enumeration (fixed order; shared by the optimizer, the
// checkpoint writer and the gradient checker)
// ---------------------------------------------------------------------------

template <class T>
struct ParamView {
    std::string name;
    T* data;
    size_t count;
    std::vector<uint64_t> dims;  // serialization shape
};

template <class T>
void append_layer_views(std::vector<ParamView<T>>& out, LayerParams<T>& l, const std::string& prefix,
                        bool include_step_params) {
    out.push_back({prefix + ".kernel1", l.kernel1.data.data(), l.kernel1.size(),
                   {static_cast<uint64_t>(l.kernel1.n), static_cast<uint64_t>(l.kernel1.c),
                    static_cast<uint64_t>(l.kernel1.h), static_cast<uint64_t>(l.kernel1.w)}});
    if (include_step_params) {
        out.push_back({prefix + ".eta", &l.eta, 1, {1}});
        out.push_back({prefix + ".theta", &l.theta, 1, {1}});
    }
    out.push_back({prefix + ".bn_scale", l.bn.scale.data(), l.bn.scale.size(), {l.bn.scale.size()}});
    out.push_back({prefix + ".bn_shift", l.bn.shift.data(), l.bn.shift.size(), {l.bn.shift.size()}});
    out.push_back({prefix + ".prelu", &l.prelu_slope, 1, {1}});
}

/// Learnable parameters. Under the plain_conv ablation the eta/theta scalars
/// take no part in the computation and are excluded.
template <class T>
std::vector<ParamView<T>> learnable_views(NetworkParams<T>& p) {
    std::vector<ParamView<T>> v;
    const bool step_params = !p.config.plain_conv();
    for (size_t i = 0; i < p.base_layers.size(); ++i)
        append_layer_views(v, p.base_layers[i], "base." + std::to_string(i), step_params);
    for (size_t i = 0; i < p.detail_layers.size(); ++i)
        append_layer_views(v, p.detail_layers[i], "detail." + std::to_string(i), step_params);
    v.push_back({"decoder.kernel", p.decoder_kernel.data.data(), p.decoder_kernel.size(),
                 {1, 1, 3, 3}});
    v.push_back({"decoder.bn_scale", p.decoder_bn.scale.data(), p.decoder_bn.scale.size(),
                 {p.decoder_bn.scale.size()}});
    v.push_back({"decoder.bn_shift", p.decoder_bn.shift.data(), p.decoder_bn.shift.size(),
                 {p.decoder_bn.shift.size()}});
    return v;
}

/// Non-learnable buffers (running BN statistics); serialized but not counted.
template <class T>
std::vector<ParamView<T>> buffer_views(NetworkParams<T>& p) {
    std::vector<ParamView<T>> v;
    auto add = [&](BnState<T>& bn, const std::string& prefix) {
        v.push_back({prefix + ".bn_running_mean", bn.running_mean.data(), bn.running_mean.size(),
                     {bn.running_mean.size()}});
        v.push_back({prefix + ".bn_running_var", bn.running_var.data(), bn.running_var.size(),
                     {bn.running_var.size()}});
    };
    for (size_t i = 0; i < p.base_layers.size(); ++i)
        add(p.base_layers[i].bn, "base." + std::to_string(i));
    for (size_t i = 0; i < p.detail_layers.size(); ++i)
        add(p.detail_layers[i].bn, "detail." + std::to_string(i));
    add(p.decoder_bn, "decoder");
    return v;
}

/// Every tensor in the checkpoint, in serialization order. eta/theta are
/// always present here (even under plain_conv) so round-trips are lossless.
template <class T>
std::vector<ParamView<T>> all_views(NetworkParams<T>& p) {
    std::vector<ParamView<T>> v;
    for (size_t i = 0; i < p.base_layers.size(); ++i)
        append_layer_views(v, p.base_layers[i], "base." + std::to_string(i), true);
    for (size_t i = 0; i < p.detail_layers.size(); ++i)
        append_layer_views(v, p.detail_layers[i], "detail." + std::to_string(i), true);
    v.push_back({"decoder.kernel", p.decoder_kernel.data.data(), p.decoder_kernel.size(),
                 {1, 1, 3, 3}});
    v.push_back({"decoder.bn_scale", p.decoder_bn.scale.data(), p.decoder_bn.scale.size(),
                 {p.decoder_bn.scale.size()}});
    v.push_back({"decoder.bn_shift", p.decoder_bn.shift.data(), p.decoder_bn.shift.size(),
                 {p.decoder_bn.shift.size()}});
    auto bufs = buffer_views(p);
    v.insert(v.end(), bufs.begin(), bufs.end());
    return v;
}

template <class T>
size_t parameter_count(const NetworkParams<T>& p) {
    auto& mut = const_cast<NetworkParams<T>&>(p);
    size_t n = 0;
    for (const auto& view : learnable_views(mut)) n += view.count;
    return n;
}

/// Same shapes as `like`, every value zero. Used as a gradient accumulator.
template <class T>
NetworkParams<T> zeros_like(const NetworkParams<T>& like) {
    NetworkParams<T> g = like;
    auto wipe = [](LayerParams<T>& l) {
        std::fill(l.kernel1.data.begin(), l.kernel1.data.end(), T(0));
        l.eta = l.theta = l.prelu_slope = T(0);
        std::fill(l.bn.scale.begin(), l.bn.scale.end(), T(0));
        std::fill(l.bn.shift.begin(), l.bn.shift.end(), T(0));
        std::fill(l.bn.running_mean.begin(), l.bn.running_mean.end(), T(0));
        std::fill(l.bn.running_var.begin(), l.bn.running_var.end(), T(0));
    };
    for (auto& l : g.base_layers) wipe(l);
    for (auto& l : g.detail_layers) wipe(l);
    std::fill(g.decoder_kernel.data.begin(), g.decoder_kernel.data.end(), T(0));
    std::fill(g.decoder_bn.scale.begin(), g.decoder_bn.scale.end(), T(0));
    std::fill(g.decoder_bn.shift.begin(), g.decoder_bn.shift.end(), T(0));
    std::fill(g.decoder_bn.running_mean.begin(), g.decoder_bn.running_mean.end(), T(0));
    std::fill(g.decoder_bn.running_var.begin(), g.decoder_bn.running_var.end(), T(0));
    return g;
}

// ---------------------------------------------------------------------------
// forward pass with tape
// ---------------------------------------------------------------------------

/// Saved state of one BCL/DCL application, enough to run its backward pass.
template <class T>
struct StepCache {
    Tensor4<T> in;      // layer input (B_in or D_in)
    Tensor4<T> x;       // fidelity target
    Tensor4<T> c1;      // Conv1 output
    Tensor4<T> c2;      // Conv2 output
    Tensor4<T> u;       // c2 - theta * (x - in); empty under plain_conv
    BnCache<T> bn;
    Tensor4<T> bn_out;  // PReLU input
    bool plain = false;
};

/// One unrolled update step (Eq.-style: in - eta*(Conv2(Conv1(in)) -
/// theta*(x - in))), then batch norm and PReLU. Under plain_conv the update
/// arithmetic is dropped and the convolution units are chained directly.
template <class T>
Tensor4<T> step_forward(const Tensor4<T>& in, const Tensor4<T>& x, LayerParams<T>& p, BnMode mode,
                        bool plain, StepCache<T>* cache, bool commit_running) {
    require_same_dims(in, x, "bcl/dcl step");
    if (in.c != 1) throw std::invalid_argument("bcl/dcl step: expected 1-channel input");
    Tensor4<T> k2 = tie_rot180(p.kernel1);
    Tensor4<T> c1 = conv3x3_same(in, p.kernel1);
    Tensor4<T> c2 = conv3x3_same(c1, k2);

    Tensor4<T> raw, u;
    if (plain) {
        raw = c2;
    } else {
        u = Tensor4<T>(in.n, in.c, in.h, in.w);
        raw = Tensor4<T>(in.n, in.c, in.h, in.w);
        for (size_t i = 0; i < in.size(); ++i) {
            u.data[i] = c2.data[i] - p.theta * (x.data[i] - in.data[i]);
            raw.data[i] = in.data[i] - p.eta * u.data[i];
        }
    }

    BnOut<T> bn = batch_norm(raw, p.bn.scale, p.bn.shift, p.bn.running_mean, p.bn.running_var, mode);
    if (commit_running && mode == BnMode::train) {
        p.bn.running_mean = bn.new_running_mean;
        p.bn.running_var = bn.new_running_var;
    }
    Tensor4<T> out = prelu(bn.y, p.prelu_slope);

    if (cache) {
        cache->in = in;
        cache->x = x;
        cache->c1 = std::move(c1);
        cache->c2 = std::move(c2);
        cache->u = std::move(u);
        cache->bn = std::move(bn.cache);
        cache->bn_out = std::move(bn.y);
        cache->plain = plain;
    }
    return out;
}

/// Gradients of one step. Accumulates parameter gradients into `g`, returns
/// d/d(in), and adds the fidelity-path gradient into *dx when given.
template <class T>
Tensor4<T> step_backward(const Tensor4<T>& dout, const StepCache<T>& cache, const LayerParams<T>& p,
                         LayerParams<T>& g, Tensor4<T>* dx) {
    PreluGrads<T> pg = prelu_backward(dout, cache.bn_out, p.prelu_slope);
    g.prelu_slope += pg.dslope;
    BnGrads<T> bg = batch_norm_backward(pg.dx, cache.bn, p.bn.scale);
    for (size_t i = 0; i < bg.dscale.size(); ++i) {
        g.bn.scale[i] += bg.dscale[i];
        g.bn.shift[i] += bg.dshift[i];
    }
    const Tensor4<T>& draw = bg.dx;

    Tensor4<T> dc2;
    Tensor4<T> din(cache.in.n, cache.in.c, cache.in.h, cache.in.w);
    if (cache.plain) {
        dc2 = draw;
    } else {
        // raw = in - eta * u,  u = c2 - theta * (x - in)
        T deta = 0, dtheta = 0;
        dc2 = Tensor4<T>(draw.n, draw.c, draw.h, draw.w);
        const T eta = p.eta, theta = p.theta;
        for (size_t i = 0; i < draw.size(); ++i) {
            const T dr = draw.data[i];
            deta -= dr * cache.u.data[i];
            dtheta += dr * eta * (cache.x.data[i] - cache.in.data[i]);
            dc2.data[i] = -eta * dr;
            din.data[i] = (T(1) - eta * theta) * dr;
        }
        g.eta += deta;
        g.theta += dtheta;
        if (dx)
            for (size_t i = 0; i < draw.size(); ++i) dx->data[i] += eta * theta * draw.data[i];
    }

    // c2 = conv(pad(c1), k2), k2 = tie_rot180(kernel1)
    Tensor4<T> k2 = tie_rot180(p.kernel1);
    Tensor4<T> dpad_c1 = conv2d_backward_input(dc2, k2);
    Tensor4<T> dk2 = conv2d_backward_kernel(reflect_pad(cache.c1, 1), dc2, 3, 3);
    Tensor4<T> dc1 = reflect_pad_backward(dpad_c1, 1);
    // c1 = conv(pad(in), kernel1)
    Tensor4<T> dpad_in = conv2d_backward_input(dc1, p.kernel1);
    Tensor4<T> dk1 = conv2d_backward_kernel(reflect_pad(cache.in, 1), dc1, 3, 3);
    Tensor4<T> din_conv = reflect_pad_backward(dpad_in, 1);
    for (size_t i = 0; i < din.size(); ++i) din.data[i] += din_conv.data[i];

    Tensor4<T> dk1_tied = tie_rot180_backward(dk2);
    for (size_t i = 0; i < dk1.size(); ++i) g.kernel1.data[i] += dk1.data[i] + dk1_tied.data[i];
    return din;
}

/// Public single-step entry points matching the layer roles.
template <class T>
Tensor4<T> bcl_step(const Tensor4<T>& b_in, const Tensor4<T>& x, LayerParams<T>& p, BnMode mode) {
    return step_forward(b_in, x, p, mode, false, static_cast<StepCache<T>*>(nullptr), false);
}
template <class T>
Tensor4<T> dcl_step(const Tensor4<T>& d_in, const Tensor4<T>& x, LayerParams<T>& p, BnMode mode) {
    return step_forward(d_in, x, p, mode, false, static_cast<StepCache<T>*>(nullptr), false);
}

template <class T>
struct EncodeTape {
    std::vector<StepCache<T>> base_steps, detail_steps;
    Tensor4<T> x;
};

template <class T>
struct EncodeResult {
    Tensor4<T> base, detail;
};

template <class T>
EncodeResult<T> encode(const Tensor4<T>& x, NetworkParams<T>& p, BnMode mode,
                       EncodeTape<T>* tape = nullptr, bool commit_running = false) {
    if (x.c != 1) throw std::invalid_argument("encode: expected 1-channel input");
    static const Tensor4<T> blur = blur3_kernel<T>();
    static const Tensor4<T> lap = laplacian4_kernel<T>();
    EncodeResult<T> r;
    if (p.config.no_init()) {
        r.base = x;
        r.detail = x;
    } else {
        r.base = conv3x3_same(x, blur);
        r.detail = conv3x3_same(x, lap);
    }
    if (tape) {
        tape->x = x;
        tape->base_steps.resize(p.base_layers.size());
        tape->detail_steps.resize(p.detail_layers.size());
    }
    const bool plain = p.config.plain_conv();
    for (size_t i = 0; i < p.base_layers.size(); ++i)
        r.base = step_forward(r.base, x, p.base_layers[i], mode, plain,
                              tape ? &tape->base_steps[i] : nullptr, commit_running);
    for (size_t i = 0; i < p.detail_layers.size(); ++i)
        r.detail = step_forward(r.detail, x, p.detail_layers[i], mode, plain,
                                tape ? &tape->detail_steps[i] : nullptr, commit_running);
    return r;
}

template <class T>
struct DecoderCache {
    Tensor4<T> sum_in;
    BnCache<T> bn;
    Tensor4<T> bn_out;
    Tensor4<T> y;
};

template <class T>
Tensor4<T> reconstruct(const Tensor4<T>& base, const Tensor4<T>& detail, NetworkParams<T>& p,
                       BnMode mode, DecoderCache<T>* cache = nullptr, bool commit_running = false) {
    require_same_dims(base, detail, "reconstruct");
    Tensor4<T> sum(base.n, base.c, base.h, base.w);
    if (p.config.base_only()) {
        sum = base;
    } else if (p.config.detail_only()) {
        sum = detail;
    } else {
        for (size_t i = 0; i < sum.size(); ++i) sum.data[i] = base.data[i] + detail.data[i];
    }
    Tensor4<T> conv = conv3x3_same(sum, p.decoder_kernel);
    BnOut<T> bn = batch_norm(conv, p.decoder_bn.scale, p.decoder_bn.shift,
                             p.decoder_bn.running_mean, p.decoder_bn.running_var, mode);
    if (commit_running && mode == BnMode::train) {
        p.decoder_bn.running_mean = bn.new_running_mean;
        p.decoder_bn.running_var = bn.new_running_var;
    }
    Tensor4<T> y = sigmoid(bn.y);
    if (cache) {
        cache->sum_in = std::move(sum);
        cache->bn = std::move(bn.cache);
        cache->bn_out = std::move(bn.y);
        cache->y = y;
    }
    return y;
}

/// Everything the full-network backward pass needs, recorded in forward
/// order; the backward pass consumes it in reverse, each record once.
template <class T>
struct GradTape {
    EncodeTape<T> enc;
    DecoderCache<T> dec;
};

template <class T>
Tensor4<T> net_forward(const Tensor4<T>& x, NetworkParams<T>& p, BnMode mode,
                       GradTape<T>* tape = nullptr, bool commit_running = false) {
    EncodeResult<T> enc = encode(x, p, mode, tape ? &tape->enc : nullptr, commit_running);
    return reconstruct(enc.base, enc.detail, p, mode, tape ? &tape->dec : nullptr, commit_running);
}

/// Backpropagates d(loss)/d(xhat) through the decoder and both encoders,
/// accumulating into `grads` (a zeros_like clone of the parameters).
template <class T>
void net_backward(const Tensor4<T>& dxhat, const GradTape<T>& tape, const NetworkParams<T>& p,
                  NetworkParams<T>& grads) {
    // decoder: y = sigmoid(bn(conv(pad(sum))))
    Tensor4<T> dbn_out = sigmoid_backward(dxhat, tape.dec.y);
    BnGrads<T> bg = batch_norm_backward(dbn_out, tape.dec.bn, p.decoder_bn.scale);
    grads.decoder_bn.scale[0] += bg.dscale[0];
    grads.decoder_bn.shift[0] += bg.dshift[0];
    Tensor4<T> dpad = conv2d_backward_input(bg.dx, p.decoder_kernel);
    Tensor4<T> dk = conv2d_backward_kernel(reflect_pad(tape.dec.sum_in, 1), bg.dx, 3, 3);
    for (size_t i = 0; i < dk.size(); ++i) grads.decoder_kernel.data[i] += dk.data[i];
    Tensor4<T> dsum = reflect_pad_backward(dpad, 1);

    Tensor4<T> dbase, ddetail;
    Tensor4<T> zero(dsum.n, dsum.c, dsum.h, dsum.w);
    if (p.config.base_only()) {
        dbase = dsum;
        ddetail = zero;
    } else if (p.config.detail_only()) {
        dbase = zero;
        ddetail = dsum;
    } else {
        dbase = dsum;
        ddetail = dsum;
    }

    for (size_t i = p.base_layers.size(); i-- > 0;)
        dbase = step_backward(dbase, tape.enc.base_steps[i], p.base_layers[i], grads.base_layers[i],
                              static_cast<Tensor4<T>*>(nullptr));
    for (size_t i = p.detail_layers.size(); i-- > 0;)
        ddetail = step_backward(ddetail, tape.enc.detail_steps[i], p.detail_layers[i],
                                grads.detail_layers[i], static_cast<Tensor4<T>*>(nullptr));
    // gradients stop at the fixed blur/Laplacian initialization filters
}

}  // namespace auif
