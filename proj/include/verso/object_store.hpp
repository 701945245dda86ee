// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <unordered_map>
#include <vector>

#include "verso/catalog.hpp"
#include "verso/content_object.hpp"
#include "verso/digest.hpp"
#include "verso/wire.hpp"

namespace verso {

// Disk-backed content-addressable store for encoded content objects and
// catalogs. Files live at <root>/objects/<2 hex>/<62 hex>; the digest IS
// the key, so the directory scan at open time is the source of truth and
// no separate manifest is required. Writes stage to a temp file and rename,
// so a crash never leaves partial bytes under a valid digest name.
class ObjectStore {
 public:
  struct Entry {
    EncodedKind kind = EncodedKind::kContentObject;
    std::uint64_t size = 0;  // encoded byte length
  };
  struct PutResult {
    Digest digest;
    bool inserted = false;  // false: digest was already present (duplicate)
  };

  // Opens or creates a store rooted at `root` and indexes what is there.
  explicit ObjectStore(std::filesystem::path root);

  // Stores canonical encoded bytes under their digest. Idempotent.
  PutResult put(std::span<const std::uint8_t> encoded);
  PutResult put(const ContentObject& object);
  PutResult put(const SecureCatalog& catalog);

  // Returns the stored bytes, re-verifying the digest on every read.
  std::vector<std::uint8_t> get(const Digest& digest) const;

  bool contains(const Digest& digest) const { return index_.contains(digest); }

  // Order-preserving filter: the subsequence of `digests` not present.
  std::vector<Digest> missing(std::span<const Digest> digests) const;

  const std::unordered_map<Digest, Entry, DigestHash>& index() const { return index_; }
  std::size_t count() const { return index_.size(); }
  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path object_path(const Digest& digest) const;
  void scan();

  std::filesystem::path root_;
  std::unordered_map<Digest, Entry, DigestHash> index_;
};

}  // namespace verso
