// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace verso {

// 32-byte SHA-256 value. Compares by value, renders as lowercase hex.
struct Digest {
  static constexpr std::size_t kSize = 32;

  std::array<std::uint8_t, kSize> bytes{};

  auto operator<=>(const Digest&) const = default;

  std::string hex() const;
  static Digest from_hex(std::string_view text);  // throws DecodeError

  std::span<const std::uint8_t> span() const { return {bytes.data(), bytes.size()}; }
};

// SHA-256 of a byte string.
Digest sha256(std::span<const std::uint8_t> data);

// Incremental SHA-256, for hashing streams without a copy. finish() ends
// the stream; instances are single-use.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;
  void update(std::span<const std::uint8_t> data);
  Digest finish();

 private:
  void* ctx_;  // EVP_MD_CTX, kept opaque so OpenSSL stays out of the headers
};

struct DigestHash {
  std::size_t operator()(const Digest& d) const {
    std::uint64_t v;
    std::memcpy(&v, d.bytes.data(), sizeof(v));
    return static_cast<std::size_t>(v);
  }
};

}  // namespace verso
