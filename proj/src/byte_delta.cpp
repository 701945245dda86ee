// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0

#include "verso/byte_delta.hpp"

#include <algorithm>
#include <cstring>
#include <limits>
#include <string>
#include <unordered_map>

#include "verso/errors.hpp"
#include "verso/gear.hpp"

namespace verso {

namespace {

void check_op_shape(const ByteEditOp& op, std::size_t index) {
  auto fail = [&](const char* msg) {
    throw ScriptRangeError("op " + std::to_string(index) + ": " + msg);
  };
  switch (op.kind) {
    case ByteOpKind::kInsert:
      if (op.old_len != 0) fail("insert must not consume input bytes");
      if (op.new_bytes.empty()) fail("insert needs replacement bytes");
      break;
    case ByteOpKind::kReplace:
      if (op.old_len == 0) fail("replace must consume input bytes");
      if (op.new_bytes.empty()) fail("replace needs replacement bytes");
      break;
    case ByteOpKind::kDelete:
      if (op.old_len == 0) fail("delete must consume input bytes");
      if (!op.new_bytes.empty()) fail("delete must not carry bytes");
      break;
    default:
      fail("unknown op kind");
  }
}

}  // namespace

ByteEditScript::ByteEditScript(std::vector<ByteEditOp> ops) : ops_(std::move(ops)) {
  std::uint64_t cursor = 0;
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    const ByteEditOp& op = ops_[i];
    check_op_shape(op, i);
    if (op.old_offset < cursor) {
      throw ScriptRangeError("op " + std::to_string(i) + " at offset " +
                             std::to_string(op.old_offset) +
                             " overlaps the previous op ending at " + std::to_string(cursor));
    }
    if (op.old_len > std::numeric_limits<std::uint64_t>::max() - op.old_offset) {
      throw ScriptRangeError("op " + std::to_string(i) + " range overflows");
    }
    cursor = op.old_offset + op.old_len;
  }
}

std::uint64_t ByteEditScript::new_bytes_total() const {
  std::uint64_t total = 0;
  for (const ByteEditOp& op : ops_) total += op.new_bytes.size();
  return total;
}

std::uint64_t ByteEditScript::min_old_size() const {
  // Ops are cursor-ordered, so the last op ends furthest into the input.
  if (ops_.empty()) return 0;
  return ops_.back().old_offset + ops_.back().old_len;
}

std::vector<std::uint8_t> byte_apply(std::span<const std::uint8_t> old_data,
                                     const ByteEditScript& script) {
  if (script.min_old_size() > old_data.size()) {
    throw ScriptRangeError("script addresses " + std::to_string(script.min_old_size()) +
                           " input bytes but input has " + std::to_string(old_data.size()));
  }
  std::vector<std::uint8_t> out;
  out.reserve(old_data.size() + script.new_bytes_total());
  std::uint64_t cursor = 0;
  for (const ByteEditOp& op : script.ops()) {
    out.insert(out.end(), old_data.begin() + cursor, old_data.begin() + op.old_offset);
    out.insert(out.end(), op.new_bytes.begin(), op.new_bytes.end());
    cursor = op.old_offset + op.old_len;
  }
  out.insert(out.end(), old_data.begin() + cursor, old_data.end());
  return out;
}

PieceTable::PieceTable(std::uint64_t base_len) : base_len_(base_len), total_(base_len) {
  if (base_len > 0) pieces_.push_back({true, 0, {}, base_len});
}

void PieceTable::apply(const ByteEditScript& script) {
  if (script.min_old_size() > total_) {
    throw ScriptRangeError("script addresses " + std::to_string(script.min_old_size()) +
                           " bytes but the table holds " + std::to_string(total_));
  }
  std::vector<Piece> next;
  std::size_t pi = 0;
  std::uint64_t poff = 0;
  std::uint64_t new_total = 0;

  auto append_piece = [&](Piece&& p) {
    if (p.len == 0) return;
    if (!next.empty()) {
      Piece& back = next.back();
      if (back.is_base && p.is_base && back.base_off + back.len == p.base_off) {
        back.len += p.len;
        return;
      }
      if (!back.is_base && !p.is_base) {
        back.bytes.insert(back.bytes.end(), p.bytes.begin(), p.bytes.end());
        back.len = back.bytes.size();
        return;
      }
    }
    next.push_back(std::move(p));
  };

  // Consumes len bytes of the CURRENT sequence, copying them into the new
  // piece list when keep is set and dropping them otherwise.
  auto consume = [&](std::uint64_t len, bool keep) {
    while (len > 0) {
      const Piece& cur = pieces_[pi];
      std::uint64_t take = std::min(len, cur.len - poff);
      if (keep) {
        if (cur.is_base) {
          append_piece({true, cur.base_off + poff, {}, take});
        } else {
          Piece lit{false, 0, {}, take};
          lit.bytes.assign(cur.bytes.begin() + static_cast<std::ptrdiff_t>(poff),
                           cur.bytes.begin() + static_cast<std::ptrdiff_t>(poff + take));
          append_piece(std::move(lit));
        }
        new_total += take;
      }
      poff += take;
      len -= take;
      if (poff == cur.len) {
        ++pi;
        poff = 0;
      }
    }
  };

  std::uint64_t cursor = 0;
  for (const ByteEditOp& op : script.ops()) {
    consume(op.old_offset - cursor, true);
    if (!op.new_bytes.empty()) {
      Piece lit{false, 0, op.new_bytes, op.new_bytes.size()};
      new_total += lit.len;
      append_piece(std::move(lit));
    }
    consume(op.old_len, false);
    cursor = op.old_offset + op.old_len;
  }
  consume(total_ - cursor, true);
  pieces_ = std::move(next);
  total_ = new_total;
}

std::vector<std::uint8_t> PieceTable::materialize(std::span<const std::uint8_t> base) const {
  if (base.size() != base_len_) {
    throw ScriptRangeError("base has " + std::to_string(base.size()) +
                           " bytes but the table was built for " + std::to_string(base_len_));
  }
  std::vector<std::uint8_t> out;
  out.reserve(total_);
  for (const Piece& p : pieces_) {
    if (p.is_base) {
      out.insert(out.end(), base.begin() + static_cast<std::ptrdiff_t>(p.base_off),
                 base.begin() + static_cast<std::ptrdiff_t>(p.base_off + p.len));
    } else {
      out.insert(out.end(), p.bytes.begin(), p.bytes.end());
    }
  }
  return out;
}

namespace {

constexpr std::uint64_t kAnchorWindow = 64;
constexpr std::uint64_t kAnchorStride = 16;
constexpr std::size_t kAnchorBucketCap = 8;

std::uint64_t window_hash(const std::uint8_t* p) {
  std::uint64_t h = 0;
  for (std::uint64_t i = 0; i < kAnchorWindow; ++i) h = gear_step(h, p[i]);
  return h;
}

void emit_gap(std::vector<ByteEditOp>& ops, std::uint64_t old_from, std::uint64_t old_to,
              std::span<const std::uint8_t> new_slice) {
  std::uint64_t old_len = old_to - old_from;
  if (old_len == 0 && new_slice.empty()) return;
  ByteEditOp op;
  op.old_offset = old_from;
  op.old_len = old_len;
  op.new_bytes.assign(new_slice.begin(), new_slice.end());
  if (old_len == 0) {
    op.kind = ByteOpKind::kInsert;
  } else if (new_slice.empty()) {
    op.kind = ByteOpKind::kDelete;
  } else {
    op.kind = ByteOpKind::kReplace;
  }
  ops.push_back(std::move(op));
}

}  // namespace

ByteEditScript byte_diff(std::span<const std::uint8_t> old_data,
                         std::span<const std::uint8_t> new_data) {
  // Index sampled old windows. The gear hash ages a byte out after 64
  // shifts, so the 64-bit rolling state over the new data IS the hash of
  // the trailing 64-byte window; no separate removal step is needed.
  std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> index;
  if (old_data.size() >= kAnchorWindow) {
    index.reserve(old_data.size() / kAnchorStride + 1);
    for (std::uint64_t w = 0; w + kAnchorWindow <= old_data.size(); w += kAnchorStride) {
      auto& bucket = index[window_hash(old_data.data() + w)];
      if (bucket.size() < kAnchorBucketCap) bucket.push_back(w);
    }
  }

  std::vector<ByteEditOp> ops;
  std::uint64_t old_cursor = 0;
  std::uint64_t new_cursor = 0;

  if (!index.empty() && new_data.size() >= kAnchorWindow) {
    std::uint64_t h = 0;
    for (std::uint64_t i = 0; i < new_data.size(); ++i) {
      h = gear_step(h, new_data[i]);
      if (i + 1 < kAnchorWindow) continue;
      std::uint64_t s = i + 1 - kAnchorWindow;
      if (s < new_cursor) continue;
      auto it = index.find(h);
      if (it == index.end()) continue;
      for (std::uint64_t ow : it->second) {
        // Matches must advance monotonically through the old data so the
        // resulting ops come out cursor-ordered.
        if (ow < old_cursor) continue;
        if (std::memcmp(old_data.data() + ow, new_data.data() + s, kAnchorWindow) != 0) continue;
        std::uint64_t os = ow;
        std::uint64_t ns = s;
        while (os > old_cursor && ns > new_cursor && old_data[os - 1] == new_data[ns - 1]) {
          --os;
          --ns;
        }
        std::uint64_t oe = ow + kAnchorWindow;
        std::uint64_t ne = s + kAnchorWindow;
        while (oe < old_data.size() && ne < new_data.size() && old_data[oe] == new_data[ne]) {
          ++oe;
          ++ne;
        }
        emit_gap(ops, old_cursor, os, new_data.subspan(new_cursor, ns - new_cursor));
        old_cursor = oe;
        new_cursor = ne;
        break;
      }
    }
  }
  emit_gap(ops, old_cursor, old_data.size(), new_data.subspan(new_cursor));
  return ByteEditScript(std::move(ops));
}

}  // namespace verso
