#pragma once

namespace auif {

/// Full command-line entry point (train/fuse/decompose/eval/gradcheck/params).
/// Returns the process exit code: 0 success, 1 runtime error, 2 usage error.
int cli_main(int argc, const char* const* argv);

}  // namespace auif
