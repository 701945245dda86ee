// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "verso/digest.hpp"
#include "verso/name.hpp"
#include "verso/seq_delta.hpp"
#include "verso/signature.hpp"

namespace verso {

enum class Variant : std::uint8_t { kV1 = 1, kV2 = 2, kV3 = 3, kV4 = 4, kV5 = 5 };

std::string_view variant_name(Variant v);                 // "v1".."v5"
std::optional<Variant> parse_variant(std::string_view);   // nullopt on bad input

// V1: binary diff carried in segment objects. With no parents the digests
// are the data segments of a full version; with parents they are diff
// segments whose concatenated payloads encode one ByteEditScript.
struct V1Body {
  std::vector<Digest> segments;
  bool operator==(const V1Body&) const = default;
};

// V2: sequence-number replacement. A ground truth enumerates (0, d0),
// (1, d1), ...; a diff lists only the changed numbers. Shrinking a version
// re-emits trailing segments with shorter or empty payloads.
struct V2Body {
  std::vector<std::pair<std::uint64_t, Digest>> replacements;
  bool operator==(const V2Body&) const = default;
};

// V3: byte-offset ops. With no parents the digests are data segments; with
// parents each digest is a diff object whose payload is one ByteEditOp.
struct V3Body {
  std::vector<Digest> segments;
  bool operator==(const V3Body&) const = default;
};

// V4: full chunk enumeration. The chunk prefix is stated once; entries are
// the 32-byte ids of the chunk objects in order.
struct V4Body {
  HierarchicalName chunk_prefix;
  std::vector<Digest> chunks;
  bool operator==(const V4Body&) const = default;
};

// V5: sequence diff over the resolved parent chunk list.
struct V5Body {
  std::vector<SeqEditOp> ops;
  bool operator==(const V5Body&) const = default;
};

using CatalogBody = std::variant<V1Body, V2Body, V3Body, V4Body, V5Body>;

Variant body_variant(const CatalogBody& body);

// Signed aggregated-signing object: one signature covers the whole version
// because every constituent object is referenced by hash. Parents reference
// catalog digests, never names, so the version tree is tamper-evident.
struct SecureCatalog {
  HierarchicalName name;            // versioned, no segment
  std::vector<Digest> parents;      // empty for ground truths
  CatalogBody body;
  SignatureBlock signature;

  Variant variant() const { return body_variant(body); }
  bool is_ground_truth() const { return parents.empty(); }
  std::uint64_t version() const;  // from the name

  bool operator==(const SecureCatalog&) const = default;
};

// Structural checks shared by signing and tree insertion: versioned
// segment-free name, variant/parent rules (V5 needs >= 1 parent, V4 none).
// Throws BodyError.
void validate_catalog_shape(const HierarchicalName& name,
                            const std::vector<Digest>& parents,
                            const CatalogBody& body);

// Builds and signs a catalog. The signature covers the canonical encoding
// of (name, parents, body). Throws BodyError on invalid shapes.
SecureCatalog sign_catalog(HierarchicalName name, std::vector<Digest> parents,
                           CatalogBody body, const KeyPair& key,
                           std::uint8_t scheme_id = kSchemeEd25519);

// True iff the signature verifies under this exact public key (its digest
// must match the catalog's key digest). Throws UnsupportedSchemeError for
// unregistered scheme ids.
bool verify_catalog(const SecureCatalog& catalog,
                    std::span<const std::uint8_t> public_key);

// Decode-then-verify for raw bytes, e.g. objects pulled off the wire.
// Returns false on any decode or verification failure.
bool verify_catalog_bytes(std::span<const std::uint8_t> encoded,
                          std::span<const std::uint8_t> public_key) noexcept;

}  // namespace verso
