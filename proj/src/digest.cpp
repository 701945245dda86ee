// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0

#include "verso/digest.hpp"

#include <openssl/evp.h>

#include "verso/errors.hpp"

namespace verso {

namespace {

int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string Digest::hex() const {
  static const char* kDigits = "0123456789abcdef";
  std::string out;
  out.reserve(kSize * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

Digest Digest::from_hex(std::string_view text) {
  if (text.size() != kSize * 2) throw DecodeError("digest hex must be 64 characters");
  Digest d;
  for (std::size_t i = 0; i < kSize; ++i) {
    int hi = hex_nibble(text[2 * i]);
    int lo = hex_nibble(text[2 * i + 1]);
    if (hi < 0 || lo < 0) throw DecodeError("digest hex has a non-hex character");
    d.bytes[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return d;
}

Digest sha256(std::span<const std::uint8_t> data) {
  Digest d;
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), d.bytes.data(), &len, EVP_sha256(), nullptr) != 1 ||
      len != Digest::kSize) {
    throw Error("SHA-256 computation failed");
  }
  return d;
}

Sha256::Sha256() : ctx_(EVP_MD_CTX_new()) {
  if (ctx_ == nullptr ||
      EVP_DigestInit_ex(static_cast<EVP_MD_CTX*>(ctx_), EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 context initialization failed");
  }
}

Sha256::~Sha256() { EVP_MD_CTX_free(static_cast<EVP_MD_CTX*>(ctx_)); }

void Sha256::update(std::span<const std::uint8_t> data) {
  if (EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), data.data(), data.size()) != 1) {
    throw Error("SHA-256 update failed");
  }
}

Digest Sha256::finish() {
  Digest d;
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(static_cast<EVP_MD_CTX*>(ctx_), d.bytes.data(), &len) != 1 ||
      len != Digest::kSize) {
    throw Error("SHA-256 finalization failed");
  }
  return d;
}

}  // namespace verso
