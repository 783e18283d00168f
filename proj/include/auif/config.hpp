#pragma once

#include <iosfwd>
#include <string>

#include "auif/trainer.hpp"

namespace auif {

/// Run-level configuration: the training settings plus paths and the fusion
/// strategy selection, persisted as a one-`key = value`-per-line file.
struct RunConfig {
    TrainConfig train;
    std::string data_ir, data_vis;
    std::string out = "model.auif";
    std::string strategy = "addition";
    double avg_weight = 0.5;
};

/// Parses `key = value` lines; '#' starts a comment; unknown keys are errors.
RunConfig parse_run_config(std::istream& is);
RunConfig parse_run_config_file(const std::string& path);

/// Writes the effective configuration; stable byte-for-byte under
/// parse -> echo round trips.
void echo_run_config(std::ostream& os, const RunConfig& cfg);
std::string run_config_text(const RunConfig& cfg);

}  // namespace auif
