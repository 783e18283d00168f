#pragma once

#include <string>

#include "auif/network.hpp"

namespace auif {

/// Binary checkpoint, little-endian:
///   magic "AUIF" | version u32 = 1 | N u32, C u32, ablation u32 |
///   tensor count u32 | per tensor: name len u16, name, rank u8,
///   dims u64 each, float32 payload | CRC-32 of all preceding bytes.
void save_checkpoint(const NetworkParamsF& params, const std::string& path);

/// Round-trips bit-exactly, including running BN statistics, eta/theta,
/// the config block and the ablation flags. Throws a format error naming
/// the byte offset on bad magic, version, truncation or CRC mismatch.
NetworkParamsF load_checkpoint(const std::string& path);

uint32_t crc32_ieee(const unsigned char* data, size_t len, uint32_t seed = 0);

}  // namespace auif
