// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "verso/name.hpp"

namespace verso {

// Default cap on a content object payload. Wire encoding rejects larger.
inline constexpr std::uint64_t kDefaultMaxObjectSize = 64 * 1024;

enum class PayloadKind : std::uint8_t {
  kDataSegment = 0x01,
  kDiffSegment = 0x02,
  kChunk = 0x03,
  kCatalog = 0x04,
};

// Named, hash-addressed payload unit; the transfer atom. Identity is the
// SHA-256 of the canonical encoding (name + kind + payload).
struct ContentObject {
  HierarchicalName name;
  PayloadKind kind = PayloadKind::kDataSegment;
  std::vector<std::uint8_t> payload;

  bool operator==(const ContentObject&) const = default;
};

}  // namespace verso
