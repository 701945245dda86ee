// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "verso/digest.hpp"

namespace verso {

// Content-defined chunking parameters. Boundaries depend only on local
// bytes, so an insertion reshuffles at most a couple of chunks instead of
// shifting every boundary after it.
struct ChunkParams {
  std::uint64_t min_size = 4096;
  std::uint64_t target_size = 8192;
  std::uint64_t max_size = 16384;

  // Throws SizeError unless 0 < min < target <= max.
  void validate() const;

  // Number of low hash bits that must be zero at a cut point, chosen so the
  // expected chunk size lands near target_size: min + 2^bits ~= target.
  unsigned mask_bits() const;
};

struct Chunk {
  std::uint64_t offset = 0;
  std::uint64_t size = 0;
  Digest id;  // digest of the chunk's raw bytes
};

// Splits data into content-defined chunks. Every byte lands in exactly one
// chunk; chunk sizes are in [min_size, max_size] except possibly the final
// chunk, which may be short. Empty input yields no chunks.
std::vector<Chunk> chunk_stream(std::span<const std::uint8_t> data,
                                const ChunkParams& params = {});

// Raw gear table bytes in big-endian order, matching assets/gear_table.bin.
std::vector<std::uint8_t> gear_table_bytes();

}  // namespace verso
