// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0

#include "verso/chunker.hpp"

#include <string>

#include "verso/errors.hpp"
#include "verso/gear.hpp"

namespace verso {

namespace {

unsigned floor_log2(std::uint64_t v) {
  unsigned bits = 0;
  while (v >>= 1) ++bits;
  return bits;
}

}  // namespace

void ChunkParams::validate() const {
  if (min_size == 0 || min_size >= target_size || target_size > max_size) {
    throw SizeError("chunk sizes must satisfy 0 < min (" + std::to_string(min_size) +
                    ") < target (" + std::to_string(target_size) + ") <= max (" +
                    std::to_string(max_size) + ")");
  }
}

unsigned ChunkParams::mask_bits() const {
  validate();
  // Round log2(target - min) to the nearest integer without floating
  // point: bump b up when diff is closer to 2^(b+1), i.e. diff^2 >= 2^(2b+1).
  std::uint64_t diff = target_size - min_size;
  unsigned b = floor_log2(diff);
  unsigned __int128 squared = static_cast<unsigned __int128>(diff) * diff;
  if (squared >= (static_cast<unsigned __int128>(1) << (2 * b + 1))) ++b;
  return b < 1 ? 1 : b;
}

std::vector<Chunk> chunk_stream(std::span<const std::uint8_t> data, const ChunkParams& params) {
  const unsigned bits = params.mask_bits();  // validates params
  const std::uint64_t mask = (bits >= 64) ? ~0ULL : ((1ULL << bits) - 1);

  std::vector<Chunk> chunks;
  std::uint64_t start = 0;
  std::uint64_t hash = 0;
  std::uint64_t len = 0;
  for (std::uint64_t i = 0; i < data.size(); ++i) {
    hash = gear_step(hash, data[i]);
    ++len;
    if ((len >= params.min_size && (hash & mask) == 0) || len >= params.max_size) {
      chunks.push_back({start, len, sha256(data.subspan(start, len))});
      start = i + 1;
      hash = 0;
      len = 0;
    }
  }
  if (len > 0) {
    chunks.push_back({start, len, sha256(data.subspan(start, len))});
  }
  return chunks;
}

std::vector<std::uint8_t> gear_table_bytes() {
  std::vector<std::uint8_t> out;
  out.reserve(kGearTable.size() * 8);
  for (std::uint64_t entry : kGearTable) {
    for (int shift = 56; shift >= 0; shift -= 8) {
      out.push_back(static_cast<std::uint8_t>(entry >> shift));
    }
  }
  return out;
}

}  // namespace verso
