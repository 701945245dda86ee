// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "verso/digest.hpp"

namespace verso {

inline constexpr std::uint8_t kSchemeEd25519 = 0x01;

struct KeyPair {
  std::array<std::uint8_t, 32> public_key{};
  std::array<std::uint8_t, 32> private_key{};
};

// Fresh random keypair.
KeyPair generate_keypair();
// Deterministic keypair from a 32-byte seed (the seed is the private key).
KeyPair keypair_from_seed(std::span<const std::uint8_t> seed32);

// Detached signature over a message. Signing is deterministic for Ed25519.
std::vector<std::uint8_t> sign_message(std::uint8_t scheme_id, const KeyPair& key,
                                       std::span<const std::uint8_t> message);
bool verify_message(std::uint8_t scheme_id, std::span<const std::uint8_t> public_key,
                    std::span<const std::uint8_t> message,
                    std::span<const std::uint8_t> signature);

// Registry lookup; throws UnsupportedSchemeError for unknown ids.
struct SchemeInfo {
  std::uint8_t id;
  const char* name;
  std::size_t public_key_size;
  std::size_t signature_size;
};
const SchemeInfo& scheme_info(std::uint8_t scheme_id);
bool scheme_registered(std::uint8_t scheme_id);

// Signature carried by a secure catalog: scheme, digest of the signing
// public key, and the detached signature bytes.
struct SignatureBlock {
  std::uint8_t scheme_id = kSchemeEd25519;
  Digest public_key_digest;
  std::vector<std::uint8_t> signature;

  bool operator==(const SignatureBlock&) const = default;
};

}  // namespace verso
