#pragma once

#include <optional>
#include <string>
#include <utility>

#include "auif/image.hpp"
#include "auif/network.hpp"

namespace auif {

struct MergeStrategy {
    enum class Kind { addition, average, l1_attention };
    Kind kind = Kind::addition;
    double weight = 0.5;  // average only, in [0, 1]

    static MergeStrategy addition() { return {Kind::addition, 0.5}; }
    static MergeStrategy average(double w = 0.5);
    static MergeStrategy l1_attention() { return {Kind::l1_attention, 0.5}; }
    /// Parses "addition" | "average" | "l1att".
    static MergeStrategy from_name(const std::string& name, double avg_weight = 0.5);
};

/// Pixelwise attention weights from blurred absolute activations:
/// a_ir = blur(|m_ir|) / (blur(|m_ir|) + blur(|m_vis|)), a_vis = 1 - a_ir.
/// Computed in double so a_ir + a_vis = 1 holds to 1e-12; near-zero
/// denominators fall back to an even 0.5/0.5 split.
std::pair<Tensor4d, Tensor4d> l1_attention_weights(const Tensor4f& m_ir, const Tensor4f& m_vis);

Tensor4f merge_maps(const Tensor4f& m_ir, const Tensor4f& m_vis, const MergeStrategy& strategy);

struct FusionResult {
    Image fused;
    std::optional<Tensor4f> merged_base, merged_detail;  // populated when keep_maps
};

/// Test-phase pipeline: encode both sources in eval mode, merge base and
/// detail maps with the strategy, decode. Deterministic.
FusionResult fuse(const Image& ir, const Image& vis, NetworkParamsF& params,
                  const MergeStrategy& strategy, bool keep_maps = false);

}  // namespace auif
