// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "verso/catalog.hpp"
#include "verso/catalog_tree.hpp"
#include "verso/object_store.hpp"

namespace verso {

// Exact byte accounting for one version fetch. The "wire" is modeled as
// digest-keyed reads from the remote store; the interesting quantity is
// volume, not timing.
struct TransferStats {
  std::uint64_t version = 0;
  Variant variant = Variant::kV5;
  std::uint64_t objects_requested = 0;    // catalogs + payload objects
  std::uint64_t objects_transferred = 0;  // of those, absent locally
  std::uint64_t cache_hits = 0;           // transferred + hits = requested
  std::uint64_t bytes_on_wire = 0;        // encoded bytes actually moved
  std::uint64_t full_size = 0;            // plaintext size of the version
  double savings_ratio = 0.0;             // 1 - bytes_on_wire / full_size
};

struct FetchResult {
  TransferStats stats;
  std::vector<std::uint8_t> data;      // reconstructed plaintext
  std::size_t catalogs_verified = 0;   // signatures checked on this fetch
};

// Fetches one version into the local store: pulls the catalogs on the
// resolution path and whatever payload objects the local store lacks, then
// reconstructs and returns the plaintext. When publisher_key is non-empty
// every catalog signature is verified against it and a mismatch aborts the
// fetch with IntegrityError; payload integrity always rests on digest
// checks. Objects missing from the remote raise RepoIncompleteError.
FetchResult fetch_version(const ObjectStore& remote, ObjectStore& local, CatalogTree& tree,
                          const Digest& version,
                          std::span<const std::uint8_t> publisher_key = {});

// Inserts every catalog found in the store into the tree. Returns the
// number inserted (already-present digests are skipped).
std::size_t load_catalogs(const ObjectStore& store, CatalogTree& tree);

CatalogTree tree_from_store(const ObjectStore& store);

}  // namespace verso
