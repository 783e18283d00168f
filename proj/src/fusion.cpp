#include "auif/fusion.hpp"

#include <cmath>
#include <stdexcept>

namespace auif {

MergeStrategy MergeStrategy::average(double w) {
    if (w < 0.0 || w > 1.0)
        throw std::invalid_argument("average strategy: weight must be in [0,1]");
    return {Kind::average, w};
}

MergeStrategy MergeStrategy::from_name(const std::string& name, double avg_weight) {
    if (name == "addition") return addition();
    if (name == "average") return average(avg_weight);
    if (name == "l1att") return l1_attention();
    throw std::invalid_argument("unknown fusion strategy: " + name);
}

std::pair<Tensor4d, Tensor4d> l1_attention_weights(const Tensor4f& m_ir, const Tensor4f& m_vis) {
    require_same_dims(m_ir, m_vis, "l1_attention_weights");
    static const Tensor4d blur = blur3_kernel<double>();
    Tensor4d abs_ir(m_ir.n, m_ir.c, m_ir.h, m_ir.w), abs_vis(m_ir.n, m_ir.c, m_ir.h, m_ir.w);
    for (size_t i = 0; i < m_ir.size(); ++i) {
        abs_ir.data[i] = std::fabs(double(m_ir.data[i]));
        abs_vis.data[i] = std::fabs(double(m_vis.data[i]));
    }
    Tensor4d chi_ir = conv3x3_same(abs_ir, blur);
    Tensor4d chi_vis = conv3x3_same(abs_vis, blur);
    Tensor4d a_ir(m_ir.n, m_ir.c, m_ir.h, m_ir.w), a_vis(m_ir.n, m_ir.c, m_ir.h, m_ir.w);
    for (size_t i = 0; i < m_ir.size(); ++i) {
        const double denom = chi_ir.data[i] + chi_vis.data[i];
        double w = denom < 1e-12 ? 0.5 : chi_ir.data[i] / denom;
        a_ir.data[i] = w;
        a_vis.data[i] = 1.0 - w;
    }
    return {std::move(a_ir), std::move(a_vis)};
}

Tensor4f merge_maps(const Tensor4f& m_ir, const Tensor4f& m_vis, const MergeStrategy& strategy) {
    require_same_dims(m_ir, m_vis, "merge_maps");
    Tensor4f out(m_ir.n, m_ir.c, m_ir.h, m_ir.w);
    switch (strategy.kind) {
        case MergeStrategy::Kind::addition:
            for (size_t i = 0; i < out.size(); ++i) out.data[i] = m_ir.data[i] + m_vis.data[i];
            break;
        case MergeStrategy::Kind::average: {
            if (strategy.weight < 0.0 || strategy.weight > 1.0)
                throw std::invalid_argument("merge_maps: average weight must be in [0,1]");
            const float w = static_cast<float>(strategy.weight);
            for (size_t i = 0; i < out.size(); ++i)
                out.data[i] = w * m_ir.data[i] + (1.0f - w) * m_vis.data[i];
            break;
        }
        case MergeStrategy::Kind::l1_attention: {
            auto [a_ir, a_vis] = l1_attention_weights(m_ir, m_vis);
            for (size_t i = 0; i < out.size(); ++i)
                out.data[i] = static_cast<float>(a_ir.data[i] * m_ir.data[i] +
                                                 a_vis.data[i] * m_vis.data[i]);
            break;
        }
    }
    return out;
}

FusionResult fuse(const Image& ir, const Image& vis, NetworkParamsF& params,
                  const MergeStrategy& strategy, bool keep_maps) {
    if (ir.height != vis.height || ir.width != vis.width)
        throw std::invalid_argument(
            "fuse: source dimensions differ: infrared " + std::to_string(ir.height) + "x" +
            std::to_string(ir.width) + " vs visible " + std::to_string(vis.height) + "x" +
            std::to_string(vis.width));

    Tensor4f t_ir = image_to_tensor(ir), t_vis = image_to_tensor(vis);
    EncodeResult<float> enc_ir = encode(t_ir, params, BnMode::eval);
    EncodeResult<float> enc_vis = encode(t_vis, params, BnMode::eval);
    Tensor4f base = merge_maps(enc_ir.base, enc_vis.base, strategy);
    Tensor4f detail = merge_maps(enc_ir.detail, enc_vis.detail, strategy);
    Tensor4f fused = reconstruct(base, detail, params, BnMode::eval);

    FusionResult r;
    r.fused = tensor_to_image(fused);
    if (keep_maps) {
        r.merged_base = std::move(base);
        r.merged_detail = std::move(detail);
    }
    return r;
}

}  // namespace auif
