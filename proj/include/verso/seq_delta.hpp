// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "verso/digest.hpp"

namespace verso {

enum class SeqOpKind : std::uint8_t {
  kKeepRun = 0x01,    // copy old[old_index .. old_index+count)
  kInsertIds = 0x02,  // append ids at position old_index of the old list
  kDeleteRun = 0x03,  // drop old[old_index .. old_index+count)
};

struct SeqEditOp {
  SeqOpKind kind = SeqOpKind::kKeepRun;
  std::uint64_t old_index = 0;
  std::uint64_t count = 0;  // run length; equals ids.size() for kInsertIds
  std::vector<Digest> ids;  // kInsertIds only

  static SeqEditOp keep(std::uint64_t index, std::uint64_t count);
  static SeqEditOp insert(std::uint64_t index, std::vector<Digest> ids);
  static SeqEditOp del(std::uint64_t index, std::uint64_t count);

  bool operator==(const SeqEditOp&) const = default;
};

// LCS-based diff over digest lists. Unchanged runs become kKeepRun
// (index + count) instead of repeated ids; deletions are explicit.
// seq_apply(old_ids, seq_diff(old_ids, new_ids)) == new_ids always.
std::vector<SeqEditOp> seq_diff(std::span<const Digest> old_ids,
                                std::span<const Digest> new_ids);

// Replays ops against old_ids. Ops must be sorted by old_index with
// non-overlapping runs; violations throw ScriptRangeError.
std::vector<Digest> seq_apply(std::span<const Digest> old_ids,
                              std::span<const SeqEditOp> ops);

}  // namespace verso
