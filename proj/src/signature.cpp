// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0

#include "verso/signature.hpp"

#include <openssl/err.h>
#include <openssl/evp.h>

#include <memory>
#include <string>

#include "verso/errors.hpp"

namespace verso {

namespace {

struct PkeyDeleter {
  void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
struct CtxDeleter {
  void operator()(EVP_MD_CTX* c) const { EVP_MD_CTX_free(c); }
};
using PkeyPtr = std::unique_ptr<EVP_PKEY, PkeyDeleter>;
using CtxPtr = std::unique_ptr<EVP_MD_CTX, CtxDeleter>;

[[noreturn]] void throw_openssl(const char* what) {
  unsigned long code = ERR_get_error();
  char buf[256] = "unknown error";
  if (code != 0) ERR_error_string_n(code, buf, sizeof buf);
  throw Error(std::string(what) + ": " + buf);
}

PkeyPtr private_pkey(const KeyPair& key) {
  EVP_PKEY* raw = EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr,
                                               key.private_key.data(), key.private_key.size());
  if (raw == nullptr) throw_openssl("loading private key");
  return PkeyPtr(raw);
}

PkeyPtr public_pkey(std::span<const std::uint8_t> public_key) {
  EVP_PKEY* raw = EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr, public_key.data(),
                                              public_key.size());
  if (raw == nullptr) throw_openssl("loading public key");
  return PkeyPtr(raw);
}

std::array<std::uint8_t, 32> raw_public_key(EVP_PKEY* pkey) {
  std::array<std::uint8_t, 32> out{};
  std::size_t len = out.size();
  if (EVP_PKEY_get_raw_public_key(pkey, out.data(), &len) != 1 || len != out.size()) {
    throw_openssl("extracting public key");
  }
  return out;
}

constexpr SchemeInfo kSchemes[] = {
    {kSchemeEd25519, "ed25519", 32, 64},
};

const SchemeInfo* find_scheme(std::uint8_t scheme_id) {
  for (const SchemeInfo& s : kSchemes) {
    if (s.id == scheme_id) return &s;
  }
  return nullptr;
}

}  // namespace

KeyPair generate_keypair() {
  EVP_PKEY* raw = nullptr;
  std::unique_ptr<EVP_PKEY_CTX, decltype([](EVP_PKEY_CTX* c) { EVP_PKEY_CTX_free(c); })> ctx(
      EVP_PKEY_CTX_new_id(EVP_PKEY_ED25519, nullptr));
  if (!ctx || EVP_PKEY_keygen_init(ctx.get()) != 1 || EVP_PKEY_keygen(ctx.get(), &raw) != 1) {
    throw_openssl("generating keypair");
  }
  PkeyPtr pkey(raw);
  KeyPair out;
  std::size_t len = out.private_key.size();
  if (EVP_PKEY_get_raw_private_key(pkey.get(), out.private_key.data(), &len) != 1 ||
      len != out.private_key.size()) {
    throw_openssl("extracting private key");
  }
  out.public_key = raw_public_key(pkey.get());
  return out;
}

KeyPair keypair_from_seed(std::span<const std::uint8_t> seed32) {
  if (seed32.size() != 32) {
    throw SizeError("keypair seed must be 32 bytes, got " + std::to_string(seed32.size()));
  }
  KeyPair out;
  std::copy(seed32.begin(), seed32.end(), out.private_key.begin());
  PkeyPtr pkey = private_pkey(out);
  out.public_key = raw_public_key(pkey.get());
  return out;
}

std::vector<std::uint8_t> sign_message(std::uint8_t scheme_id, const KeyPair& key,
                                       std::span<const std::uint8_t> message) {
  const SchemeInfo& info = scheme_info(scheme_id);
  PkeyPtr pkey = private_pkey(key);
  CtxPtr ctx(EVP_MD_CTX_new());
  if (!ctx || EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, pkey.get()) != 1) {
    throw_openssl("initializing signer");
  }
  std::vector<std::uint8_t> sig(info.signature_size);
  std::size_t sig_len = sig.size();
  if (EVP_DigestSign(ctx.get(), sig.data(), &sig_len, message.data(), message.size()) != 1 ||
      sig_len != sig.size()) {
    throw_openssl("signing");
  }
  return sig;
}

bool verify_message(std::uint8_t scheme_id, std::span<const std::uint8_t> public_key,
                    std::span<const std::uint8_t> message,
                    std::span<const std::uint8_t> signature) {
  const SchemeInfo& info = scheme_info(scheme_id);
  if (public_key.size() != info.public_key_size || signature.size() != info.signature_size) {
    return false;
  }
  PkeyPtr pkey = public_pkey(public_key);
  CtxPtr ctx(EVP_MD_CTX_new());
  if (!ctx || EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, pkey.get()) != 1) {
    throw_openssl("initializing verifier");
  }
  return EVP_DigestVerify(ctx.get(), signature.data(), signature.size(), message.data(),
                          message.size()) == 1;
}

const SchemeInfo& scheme_info(std::uint8_t scheme_id) {
  const SchemeInfo* s = find_scheme(scheme_id);
  if (s == nullptr) {
    throw UnsupportedSchemeError("unknown signature scheme id " + std::to_string(scheme_id));
  }
  return *s;
}

bool scheme_registered(std::uint8_t scheme_id) { return find_scheme(scheme_id) != nullptr; }

}  // namespace verso
