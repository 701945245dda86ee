// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace verso {

enum class ByteOpKind : std::uint8_t {
  kInsert = 0x01,   // old_len == 0, new_bytes non-empty
  kReplace = 0x02,  // old_len > 0, new_bytes non-empty
  kDelete = 0x03,   // old_len > 0, new_bytes empty
};

struct ByteEditOp {
  ByteOpKind kind = ByteOpKind::kInsert;
  std::uint64_t old_offset = 0;
  std::uint64_t old_len = 0;
  std::vector<std::uint8_t> new_bytes;

  bool operator==(const ByteEditOp&) const = default;
};

// Ordered, non-overlapping byte-level edit operations against one input.
//
// Ops are validated with a cursor rule: each op's old_offset must be >= the
// end of the previous op's range. Several inserts may share an offset; they
// apply in list order. Range checks against the actual input length happen
// at application time.
class ByteEditScript {
 public:
  ByteEditScript() = default;
  explicit ByteEditScript(std::vector<ByteEditOp> ops);  // throws ScriptRangeError

  const std::vector<ByteEditOp>& ops() const { return ops_; }
  bool empty() const { return ops_.empty(); }

  // Sum of new_bytes over all ops (the payload the script transmits).
  std::uint64_t new_bytes_total() const;
  // Smallest input length the script is valid against.
  std::uint64_t min_old_size() const;

  bool operator==(const ByteEditScript&) const = default;

 private:
  std::vector<ByteEditOp> ops_;
};

// Anchor-based greedy binary diff: indexes `old_data` with a rolling hash
// over 64-byte windows sampled every 16 bytes, extends matches in both
// directions, and emits insert/replace/delete ops for the gaps. Near-linear;
// best-effort, not optimal.
ByteEditScript byte_diff(std::span<const std::uint8_t> old_data,
                         std::span<const std::uint8_t> new_data);

// Patches old_data with the script. Throws ScriptRangeError if the script
// addresses bytes beyond old_data.
std::vector<std::uint8_t> byte_apply(std::span<const std::uint8_t> old_data,
                                     const ByteEditScript& script);

// Ordered interval map from base-input ranges (and inserted literals) to
// output ranges. Scripts stack without materializing intermediate versions:
// apply() rewrites the piece list, materialize() reads the base once.
class PieceTable {
 public:
  explicit PieceTable(std::uint64_t base_len);

  // Applies a script addressed in the table's CURRENT coordinates.
  void apply(const ByteEditScript& script);

  std::uint64_t size() const { return total_; }
  std::vector<std::uint8_t> materialize(std::span<const std::uint8_t> base) const;

 private:
  struct Piece {
    bool is_base;
    std::uint64_t base_off;            // valid when is_base
    std::vector<std::uint8_t> bytes;   // valid when !is_base
    std::uint64_t len;
  };

  std::vector<Piece> pieces_;
  std::uint64_t base_len_ = 0;
  std::uint64_t total_ = 0;
};

}  // namespace verso
