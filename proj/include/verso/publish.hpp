// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "verso/catalog.hpp"
#include "verso/catalog_tree.hpp"
#include "verso/chunker.hpp"
#include "verso/content_object.hpp"
#include "verso/object_store.hpp"

namespace verso {

// Fetches the canonical encoded bytes of a payload object by digest.
// Throws NotFoundError when the digest is unknown.
using ObjectSource = std::function<std::vector<std::uint8_t>(const Digest&)>;

// ObjectSource reading from a store.
ObjectSource store_source(const ObjectStore& store);

struct PublishParams {
  Variant variant = Variant::kV5;
  ChunkParams chunk;                            // chunked variants (V4/V5)
  std::uint64_t segment_size = 8 * 1024;        // segmented variants (V1-V3)
  std::uint64_t max_object_size = kDefaultMaxObjectSize;
  // A diff request becomes a fresh ground truth when the resolution spine
  // would grow deeper than this, or when the diff payload accumulated since
  // the last ground truth would exceed the ratio of the full version size.
  std::size_t consolidate_depth = 8;
  double consolidate_payload_ratio = 0.5;
  // Prefix for chunk object names; defaults to the version-free base name.
  std::optional<HierarchicalName> chunk_prefix;

  void validate() const;  // throws SizeError
};

struct PublishResult {
  SecureCatalog catalog;
  // Payload objects that did not previously exist (deduplicated against
  // `known` / the parent resolution). Ground truths may also reference
  // already-known objects; the catalog body lists everything needed.
  std::vector<ContentObject> new_objects;
};

// Builds a signed ground-truth catalog plus the payload objects for `data`.
// V4/V5 requests produce a V4 enumeration body (a sequence diff needs a
// parent, so its ground truth form IS the enumeration); V1-V3 produce their
// own ground-truth bodies over fixed-size segments. `known(d)` returns true
// for objects the publisher already holds, letting unchanged chunks drop
// out of new_objects; pass nullptr when everything is new.
PublishResult make_ground_truth(const HierarchicalName& base_name, std::uint64_t version,
                                std::span<const std::uint8_t> data, const PublishParams& params,
                                const KeyPair& key,
                                const std::function<bool(const Digest&)>& known = nullptr);

// Builds a signed diff catalog against resolvable parents plus only the
// payload objects that are not already resolvable. `parents` are catalog
// digests present in `tree`; ops address the LAST listed parent.
PublishResult make_diff_version(const CatalogTree& tree, const ObjectSource& source,
                                const std::vector<Digest>& parents,
                                const HierarchicalName& base_name, std::uint64_t version,
                                std::span<const std::uint8_t> new_data,
                                const PublishParams& params, const KeyPair& key);

// Reconstructs the plaintext of a version from its catalog tree and the
// payload objects reachable through `source`.
std::vector<std::uint8_t> reconstruct_version(const CatalogTree& tree, const ObjectSource& source,
                                              const Digest& version);

// Publisher workflow: owns the store side of publishing. Each publish()
// call stores the payload objects and catalog, inserts the catalog into
// the tree, and applies the consolidation policy.
class Publisher {
 public:
  struct Info {
    Digest catalog_digest;
    std::uint64_t version = 0;
    bool ground_truth = false;
    std::size_t new_objects = 0;
    std::uint64_t new_object_bytes = 0;  // encoded bytes of new payload objects
  };

  Publisher(ObjectStore& store, CatalogTree& tree, KeyPair key, HierarchicalName base_name,
            PublishParams params);

  // Publishes `data` as the next version (0, 1, 2, ...). Version 0 and
  // consolidation points become ground truths; every other version diffs
  // against the previous one.
  Info publish(std::span<const std::uint8_t> data);

  // Publishes `data` as a diff against explicit parent catalogs. No
  // consolidation check; the caller controls the tree shape.
  Info publish_diff(std::span<const std::uint8_t> data, const std::vector<Digest>& parents);

  std::uint64_t next_version() const { return next_version_; }
  const std::optional<Digest>& head() const { return head_; }
  const KeyPair& key() const { return key_; }

 private:
  Info commit(PublishResult result);
  // Encoded size of a diff catalog's payload objects, from the store index.
  std::uint64_t diff_object_bytes(const SecureCatalog& catalog) const;

  ObjectStore& store_;
  CatalogTree& tree_;
  KeyPair key_;
  HierarchicalName base_name_;
  PublishParams params_;
  std::uint64_t next_version_ = 0;
  std::optional<Digest> head_;
  std::uint64_t diff_bytes_since_truth_ = 0;
};

}  // namespace verso
