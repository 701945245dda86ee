// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0

#include "verso/catalog.hpp"

#include <string>

#include "verso/errors.hpp"
#include "verso/wire.hpp"

namespace verso {

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::kV1: return "v1";
    case Variant::kV2: return "v2";
    case Variant::kV3: return "v3";
    case Variant::kV4: return "v4";
    case Variant::kV5: return "v5";
  }
  return "?";
}

std::optional<Variant> parse_variant(std::string_view text) {
  if (text.size() == 2 && text[0] == 'v' && text[1] >= '1' && text[1] <= '5') {
    return static_cast<Variant>(text[1] - '0');
  }
  return std::nullopt;
}

Variant body_variant(const CatalogBody& body) {
  return static_cast<Variant>(body.index() + 1);
}

std::uint64_t SecureCatalog::version() const {
  // validate_catalog_shape guarantees a version for signed catalogs.
  return name.version().value_or(0);
}

void validate_catalog_shape(const HierarchicalName& name, const std::vector<Digest>& parents,
                            const CatalogBody& body) {
  if (!name.version()) throw BodyError("catalog name must carry a version");
  if (name.segment()) throw BodyError("catalog name must not carry a segment");
  switch (body_variant(body)) {
    case Variant::kV1:
    case Variant::kV3:
      // Ground truth or single-parent diff; diff bodies need a base to
      // patch, ground truths need data segments.
      if (parents.size() > 1) throw BodyError("byte-diff catalogs take at most one parent");
      break;
    case Variant::kV2:
      // Any parent count: resolution overlays parents left to right.
      break;
    case Variant::kV4:
      if (!parents.empty()) throw BodyError("enumeration catalogs are always ground truths");
      break;
    case Variant::kV5:
      if (parents.empty()) throw BodyError("sequence-diff catalogs need at least one parent");
      break;
  }
}

SecureCatalog sign_catalog(HierarchicalName name, std::vector<Digest> parents, CatalogBody body,
                           const KeyPair& key, std::uint8_t scheme_id) {
  validate_catalog_shape(name, parents, body);
  SecureCatalog catalog{std::move(name), std::move(parents), std::move(body), {}};
  auto tbs = catalog_signed_bytes(catalog.name, catalog.parents, catalog.body);
  catalog.signature.scheme_id = scheme_id;
  catalog.signature.public_key_digest = sha256(key.public_key);
  catalog.signature.signature = sign_message(scheme_id, key, tbs);
  return catalog;
}

bool verify_catalog(const SecureCatalog& catalog, std::span<const std::uint8_t> public_key) {
  if (catalog.signature.public_key_digest != sha256(public_key)) return false;
  auto tbs = catalog_signed_bytes(catalog.name, catalog.parents, catalog.body);
  return verify_message(catalog.signature.scheme_id, public_key, tbs,
                        catalog.signature.signature);
}

bool verify_catalog_bytes(std::span<const std::uint8_t> encoded,
                          std::span<const std::uint8_t> public_key) noexcept {
  try {
    return verify_catalog(decode_catalog(encoded), public_key);
  } catch (...) {
    return false;
  }
}

}  // namespace verso
