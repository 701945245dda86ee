// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0

#include "verso/seq_delta.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "verso/errors.hpp"

namespace verso {

SeqEditOp SeqEditOp::keep(std::uint64_t index, std::uint64_t count) {
  return {SeqOpKind::kKeepRun, index, count, {}};
}

SeqEditOp SeqEditOp::insert(std::uint64_t index, std::vector<Digest> ids) {
  std::uint64_t count = ids.size();
  return {SeqOpKind::kInsertIds, index, count, std::move(ids)};
}

SeqEditOp SeqEditOp::del(std::uint64_t index, std::uint64_t count) {
  return {SeqOpKind::kDeleteRun, index, count, {}};
}

std::vector<Digest> seq_apply(std::span<const Digest> old_ids, std::span<const SeqEditOp> ops) {
  std::vector<Digest> out;
  std::uint64_t cursor = 0;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const SeqEditOp& op = ops[i];
    if (op.old_index < cursor) {
      throw ScriptRangeError("op " + std::to_string(i) + " at index " +
                             std::to_string(op.old_index) +
                             " overlaps the previous run ending at " + std::to_string(cursor));
    }
    switch (op.kind) {
      case SeqOpKind::kKeepRun:
      case SeqOpKind::kDeleteRun:
        if (op.old_index + op.count > old_ids.size()) {
          throw ScriptRangeError("op " + std::to_string(i) + " run ends at " +
                                 std::to_string(op.old_index + op.count) + " but list has " +
                                 std::to_string(old_ids.size()) + " entries");
        }
        if (op.kind == SeqOpKind::kKeepRun) {
          out.insert(out.end(), old_ids.begin() + static_cast<std::ptrdiff_t>(op.old_index),
                     old_ids.begin() + static_cast<std::ptrdiff_t>(op.old_index + op.count));
        }
        cursor = op.old_index + op.count;
        break;
      case SeqOpKind::kInsertIds:
        if (op.old_index > old_ids.size()) {
          throw ScriptRangeError("op " + std::to_string(i) + " inserts at " +
                                 std::to_string(op.old_index) + " but list has " +
                                 std::to_string(old_ids.size()) + " entries");
        }
        if (op.count != op.ids.size()) {
          throw ScriptRangeError("op " + std::to_string(i) + " count disagrees with its ids");
        }
        out.insert(out.end(), op.ids.begin(), op.ids.end());
        break;
      default:
        throw ScriptRangeError("op " + std::to_string(i) + ": unknown kind");
    }
  }
  return out;
}

namespace {

// Myers diffs beyond this many edits fall back to delete-all + insert-all;
// the quadratic trace memory stays bounded and heavily divergent lists gain
// nothing from a precise alignment anyway.
constexpr std::int64_t kMaxEditDistance = 1024;

void push_op(std::vector<SeqEditOp>& ops, SeqEditOp op) {
  if (op.count == 0) return;
  if (!ops.empty()) {
    SeqEditOp& back = ops.back();
    if (back.kind == op.kind) {
      switch (op.kind) {
        case SeqOpKind::kKeepRun:
        case SeqOpKind::kDeleteRun:
          if (back.old_index + back.count == op.old_index) {
            back.count += op.count;
            return;
          }
          break;
        case SeqOpKind::kInsertIds:
          if (back.old_index == op.old_index) {
            back.ids.insert(back.ids.end(), op.ids.begin(), op.ids.end());
            back.count = back.ids.size();
            return;
          }
          break;
      }
    }
  }
  ops.push_back(std::move(op));
}

// Myers O(ND) greedy diff on the stripped middle sections. Returns ops in
// middle-local coordinates, or nullopt when the edit distance exceeds the
// fallback threshold.
std::optional<std::vector<SeqEditOp>> myers_middle(std::span<const Digest> a,
                                                   std::span<const Digest> b) {
  const std::int64_t n = static_cast<std::int64_t>(a.size());
  const std::int64_t m = static_cast<std::int64_t>(b.size());
  const std::int64_t max_d = std::min(n + m, kMaxEditDistance);
  const std::int64_t width = 2 * max_d + 1;
  auto idx = [&](std::int64_t k) { return static_cast<std::size_t>(k + max_d); };

  std::vector<std::int64_t> v(static_cast<std::size_t>(width), 0);
  std::vector<std::vector<std::int64_t>> trace;
  std::int64_t found_d = -1;
  for (std::int64_t d = 0; d <= max_d && found_d < 0; ++d) {
    for (std::int64_t k = -d; k <= d; k += 2) {
      std::int64_t x;
      if (k == -d || (k != d && v[idx(k - 1)] < v[idx(k + 1)])) {
        x = v[idx(k + 1)];
      } else {
        x = v[idx(k - 1)] + 1;
      }
      std::int64_t y = x - k;
      while (x < n && y < m && a[static_cast<std::size_t>(x)] == b[static_cast<std::size_t>(y)]) {
        ++x;
        ++y;
      }
      v[idx(k)] = x;
      if (x >= n && y >= m) {
        found_d = d;
        break;
      }
    }
    trace.push_back(v);
  }
  if (found_d < 0) return std::nullopt;

  // Walk the trace backwards, collecting ops newest-first.
  std::vector<SeqEditOp> rev;
  std::int64_t x = n;
  std::int64_t y = m;
  for (std::int64_t d = found_d; d > 0; --d) {
    const auto& prev = trace[static_cast<std::size_t>(d - 1)];
    std::int64_t k = x - y;
    bool down = (k == -d || (k != d && prev[idx(k - 1)] < prev[idx(k + 1)]));
    std::int64_t pk = down ? k + 1 : k - 1;
    std::int64_t px = prev[idx(pk)];
    std::int64_t py = px - pk;
    std::int64_t sx = down ? px : px + 1;  // position right after the edit step
    std::int64_t snake = x - sx;
    if (snake > 0) {
      rev.push_back(SeqEditOp::keep(static_cast<std::uint64_t>(sx),
                                    static_cast<std::uint64_t>(snake)));
    }
    if (down) {
      rev.push_back(SeqEditOp::insert(static_cast<std::uint64_t>(px),
                                      {b[static_cast<std::size_t>(py)]}));
    } else {
      rev.push_back(SeqEditOp::del(static_cast<std::uint64_t>(px), 1));
    }
    x = px;
    y = py;
  }
  if (x > 0) rev.push_back(SeqEditOp::keep(0, static_cast<std::uint64_t>(x)));

  std::vector<SeqEditOp> ops;
  for (auto it = rev.rbegin(); it != rev.rend(); ++it) push_op(ops, std::move(*it));
  return ops;
}

}  // namespace

std::vector<SeqEditOp> seq_diff(std::span<const Digest> old_ids, std::span<const Digest> new_ids) {
  // Strip shared prefix and suffix first; edits cluster, Myers cost drops.
  std::uint64_t prefix = 0;
  while (prefix < old_ids.size() && prefix < new_ids.size() &&
         old_ids[prefix] == new_ids[prefix]) {
    ++prefix;
  }
  std::uint64_t suffix = 0;
  while (suffix < old_ids.size() - prefix && suffix < new_ids.size() - prefix &&
         old_ids[old_ids.size() - 1 - suffix] == new_ids[new_ids.size() - 1 - suffix]) {
    ++suffix;
  }

  std::span<const Digest> mid_old = old_ids.subspan(prefix, old_ids.size() - prefix - suffix);
  std::span<const Digest> mid_new = new_ids.subspan(prefix, new_ids.size() - prefix - suffix);

  std::vector<SeqEditOp> middle;
  if (mid_old.empty() && mid_new.empty()) {
    // nothing to do
  } else if (mid_old.empty()) {
    middle.push_back(SeqEditOp::insert(0, {mid_new.begin(), mid_new.end()}));
  } else if (mid_new.empty()) {
    middle.push_back(SeqEditOp::del(0, mid_old.size()));
  } else if (auto ops = myers_middle(mid_old, mid_new)) {
    middle = std::move(*ops);
  } else {
    middle.push_back(SeqEditOp::del(0, mid_old.size()));
    middle.push_back(SeqEditOp::insert(mid_old.size(), {mid_new.begin(), mid_new.end()}));
  }

  std::vector<SeqEditOp> ops;
  if (prefix > 0) push_op(ops, SeqEditOp::keep(0, prefix));
  for (SeqEditOp& op : middle) {
    op.old_index += prefix;
    push_op(ops, std::move(op));
  }
  if (suffix > 0) push_op(ops, SeqEditOp::keep(old_ids.size() - suffix, suffix));
  return ops;
}

}  // namespace verso
