// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>
#include <vector>

#include "support/test_util.hpp"
#include "verso/catalog.hpp"
#include "verso/errors.hpp"
#include "verso/signature.hpp"
#include "verso/wire.hpp"

using namespace verso;

TEST_SUITE("catalog") {

TEST_CASE("variant names round trip") {
  for (auto v : {Variant::kV1, Variant::kV2, Variant::kV3, Variant::kV4, Variant::kV5}) {
    CHECK(parse_variant(variant_name(v)) == v);
  }
  CHECK_FALSE(parse_variant("v6").has_value());
  CHECK_FALSE(parse_variant("V1").has_value());
  CHECK_FALSE(parse_variant("").has_value());
}

TEST_CASE("ed25519 scheme registry") {
  SchemeInfo info = scheme_info(kSchemeEd25519);
  CHECK(info.name == "ed25519");
  CHECK(info.public_key_size == 32);
  CHECK(info.signature_size == 64);
  CHECK(scheme_registered(kSchemeEd25519));
  CHECK_FALSE(scheme_registered(0x02));
  CHECK_THROWS_AS(scheme_info(0x02), UnsupportedSchemeError);
}

TEST_CASE("keypair from seed is deterministic, generate is not") {
  auto seed = sha256(test::rng_bytes(10, 42));
  KeyPair a = keypair_from_seed(seed.span());
  KeyPair b = keypair_from_seed(seed.span());
  CHECK(a.public_key == b.public_key);
  CHECK(a.private_key == b.private_key);
  CHECK(generate_keypair().public_key != generate_keypair().public_key);
  CHECK_THROWS_AS(keypair_from_seed(test::rng_bytes(31, 1)), SizeError);
}

TEST_CASE("raw message signatures verify and reject") {
  KeyPair key = generate_keypair();
  auto msg = test::rng_bytes(500, 7);
  auto sig = sign_message(kSchemeEd25519, key, msg);
  CHECK(sig.size() == 64);
  CHECK(verify_message(kSchemeEd25519, key.public_key, msg, sig));

  auto other = msg;
  other[0] ^= 1;
  CHECK_FALSE(verify_message(kSchemeEd25519, key.public_key, other, sig));
  auto bad_sig = sig;
  bad_sig[63] ^= 1;
  CHECK_FALSE(verify_message(kSchemeEd25519, key.public_key, msg, bad_sig));
  CHECK_FALSE(verify_message(kSchemeEd25519, key.public_key, msg, test::rng_bytes(63, 1)));
  CHECK_THROWS_AS(sign_message(0x07, key, msg), UnsupportedSchemeError);

  // Deterministic scheme: same message, same signature.
  CHECK(sign_message(kSchemeEd25519, key, msg) == sig);
}

TEST_CASE("catalog shape rules") {
  std::mt19937_64 rng(1);
  auto versioned = HierarchicalName::parse("/doc/v1");
  auto parent = test::rng_digest(rng);

  // Name must carry a version and no segment.
  CHECK_THROWS_AS(validate_catalog_shape(HierarchicalName::parse("/doc"), {}, V1Body{}),
                  BodyError);
  CHECK_THROWS_AS(validate_catalog_shape(HierarchicalName::parse("/doc/v1/s0"), {}, V1Body{}),
                  BodyError);

  // V4 enumerations are ground truths; parents are forbidden.
  V4Body v4;
  v4.chunk_prefix = HierarchicalName::parse("/chunks");
  CHECK_THROWS_AS(validate_catalog_shape(versioned, {parent}, v4), BodyError);
  CHECK_NOTHROW(validate_catalog_shape(versioned, {}, v4));

  // V5 diffs need at least one parent.
  CHECK_THROWS_AS(validate_catalog_shape(versioned, {}, V5Body{}), BodyError);
  CHECK_NOTHROW(validate_catalog_shape(versioned, {parent}, V5Body{}));
  CHECK_NOTHROW(validate_catalog_shape(versioned, {parent, test::rng_digest(rng)}, V5Body{}));

  // Byte-diff variants take at most one parent.
  CHECK_NOTHROW(validate_catalog_shape(versioned, {parent}, V1Body{}));
  CHECK_THROWS_AS(validate_catalog_shape(versioned, {parent, test::rng_digest(rng)}, V1Body{}),
                  BodyError);
  CHECK_THROWS_AS(validate_catalog_shape(versioned, {parent, test::rng_digest(rng)}, V3Body{}),
                  BodyError);

  // Segment replacement accepts any parent count.
  CHECK_NOTHROW(validate_catalog_shape(versioned, {}, V2Body{}));
  CHECK_NOTHROW(validate_catalog_shape(versioned, {parent, test::rng_digest(rng)}, V2Body{}));
}

TEST_CASE("sign and verify round trip") {
  std::mt19937_64 rng(2);
  KeyPair key = generate_keypair();
  V1Body body{{test::rng_digest(rng), test::rng_digest(rng)}};
  SecureCatalog cat = sign_catalog(HierarchicalName::parse("/doc/v0"), {}, body, key);

  CHECK(cat.signature.scheme_id == kSchemeEd25519);
  CHECK(cat.signature.public_key_digest == sha256(key.public_key));
  CHECK(cat.signature.signature.size() == 64);
  CHECK(verify_catalog(cat, key.public_key));
  CHECK(cat.is_ground_truth());
  CHECK(cat.version() == 0);
  CHECK(cat.variant() == Variant::kV1);
}

TEST_CASE("verification rejects wrong keys and tampering") {
  std::mt19937_64 rng(3);
  KeyPair key = generate_keypair();
  KeyPair other = generate_keypair();
  SecureCatalog cat = sign_catalog(HierarchicalName::parse("/doc/v0"), {},
                                   V1Body{{test::rng_digest(rng)}}, key);

  CHECK_FALSE(verify_catalog(cat, other.public_key));

  SecureCatalog renamed = cat;
  renamed.name = HierarchicalName::parse("/doc/v1");
  CHECK_FALSE(verify_catalog(renamed, key.public_key));

  SecureCatalog reparented = cat;
  reparented.parents.push_back(test::rng_digest(rng));
  CHECK_FALSE(verify_catalog(reparented, key.public_key));

  SecureCatalog rebodied = cat;
  rebodied.body = V1Body{{test::rng_digest(rng)}};
  CHECK_FALSE(verify_catalog(rebodied, key.public_key));

  SecureCatalog bad_scheme = cat;
  bad_scheme.signature.scheme_id = 0x44;
  CHECK_THROWS_AS(verify_catalog(bad_scheme, key.public_key), UnsupportedSchemeError);
}

TEST_CASE("verify_catalog_bytes is total") {
  KeyPair key = generate_keypair();
  SecureCatalog cat = sign_catalog(HierarchicalName::parse("/doc/v0"), {},
                                   V4Body{HierarchicalName::parse("/c"), {}}, key);
  auto encoded = canonical_encode(cat);
  CHECK(verify_catalog_bytes(encoded, key.public_key));
  CHECK_FALSE(verify_catalog_bytes(test::rng_bytes(40, 1), key.public_key));
  CHECK_FALSE(verify_catalog_bytes({}, key.public_key));
  auto tampered = encoded;
  tampered[tampered.size() / 2] ^= 0x10;
  CHECK_FALSE(verify_catalog_bytes(tampered, key.public_key));
}

TEST_CASE("sign_catalog enforces shape before signing") {
  KeyPair key = generate_keypair();
  CHECK_THROWS_AS(sign_catalog(HierarchicalName::parse("/doc"), {}, V1Body{}, key), BodyError);
  CHECK_THROWS_AS(sign_catalog(HierarchicalName::parse("/doc/v1"), {}, V5Body{}, key), BodyError);
}

}  // TEST_SUITE
