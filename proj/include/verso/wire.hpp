// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "verso/byte_delta.hpp"
#include "verso/catalog.hpp"
#include "verso/content_object.hpp"
#include "verso/digest.hpp"
#include "verso/name.hpp"
#include "verso/seq_delta.hpp"
#include "verso/tlv.hpp"

// Canonical codecs. Encoding is deterministic: equal values yield identical
// bytes. Decoding is strict: unknown fields, bad ordering, or trailing bytes
// raise DecodeError, never silent acceptance.
namespace verso {

void write_name(tlv::Writer& w, const HierarchicalName& name);
HierarchicalName read_name(tlv::Reader& r);

std::vector<std::uint8_t> encode_name(const HierarchicalName& name);
HierarchicalName decode_name(std::span<const std::uint8_t> data);

// Throws SizeError when the payload exceeds max_object_size.
std::vector<std::uint8_t> canonical_encode(const ContentObject& object,
                                           std::uint64_t max_object_size = kDefaultMaxObjectSize);
ContentObject decode_content_object(std::span<const std::uint8_t> data);

std::vector<std::uint8_t> canonical_encode(const SecureCatalog& catalog);
SecureCatalog decode_catalog(std::span<const std::uint8_t> data);

// SHA-256 over the canonical encoding.
Digest object_digest(const ContentObject& object);
Digest catalog_digest(const SecureCatalog& catalog);

// The byte string a catalog signature covers: name + parents + body TLVs.
std::vector<std::uint8_t> catalog_signed_bytes(const HierarchicalName& name,
                                               const std::vector<Digest>& parents,
                                               const CatalogBody& body);

std::vector<std::uint8_t> encode_byte_script(const ByteEditScript& script);
ByteEditScript decode_byte_script(std::span<const std::uint8_t> data);

std::vector<std::uint8_t> encode_byte_op(const ByteEditOp& op);
ByteEditOp decode_byte_op(std::span<const std::uint8_t> data);

std::vector<std::uint8_t> encode_seq_ops(std::span<const SeqEditOp> ops);
std::vector<SeqEditOp> decode_seq_ops(std::span<const std::uint8_t> data);

// Outer classification of a stored encoding without a full decode.
enum class EncodedKind : std::uint8_t {
  kContentObject,
  kCatalog,
};
EncodedKind classify_encoded(std::span<const std::uint8_t> data);  // throws DecodeError

}  // namespace verso
