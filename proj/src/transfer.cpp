// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0

#include "verso/transfer.hpp"

#include <unordered_set>
#include <utility>

#include "verso/errors.hpp"
#include "verso/publish.hpp"
#include "verso/wire.hpp"

namespace verso {

namespace {

void count_request(TransferStats& stats, bool transferred, std::uint64_t bytes) {
  ++stats.objects_requested;
  if (transferred) {
    ++stats.objects_transferred;
    stats.bytes_on_wire += bytes;
  } else {
    ++stats.cache_hits;
  }
}

}  // namespace

FetchResult fetch_version(const ObjectStore& remote, ObjectStore& local, CatalogTree& tree,
                          const Digest& version, std::span<const std::uint8_t> publisher_key) {
  FetchResult result;
  TransferStats& stats = result.stats;

  // One digest-keyed read: local first, the wire only for misses.
  auto fetch = [&](const Digest& d) -> std::vector<std::uint8_t> {
    if (local.contains(d)) {
      std::vector<std::uint8_t> bytes = local.get(d);
      count_request(stats, false, 0);
      return bytes;
    }
    std::vector<std::uint8_t> bytes;
    try {
      bytes = remote.get(d);
    } catch (const NotFoundError&) {
      throw RepoIncompleteError("remote store lacks object " + d.hex());
    }
    count_request(stats, true, bytes.size());
    local.put(bytes);
    return bytes;
  };

  // Pull the catalogs on the resolution path, parents after children as
  // they are discovered. Signatures are checked on every fetch when a
  // publisher key is pinned.
  std::unordered_set<Digest, DigestHash> seen;
  auto fetch_catalog = [&](auto&& self, const Digest& d) -> void {
    if (!seen.insert(d).second) return;
    std::vector<std::uint8_t> bytes = fetch(d);
    SecureCatalog catalog = decode_catalog(bytes);
    if (!publisher_key.empty()) {
      if (!verify_catalog(catalog, publisher_key)) {
        throw IntegrityError("catalog " + d.hex() + " fails signature verification");
      }
      ++result.catalogs_verified;
    }
    std::vector<Digest> parents = catalog.parents;
    if (!tree.contains(d)) tree.insert(std::move(catalog));
    for (const Digest& p : parents) self(self, p);
  };
  fetch_catalog(fetch_catalog, version);

  // Payload objects for this version, deduplicated in plan order.
  const SecureCatalog& cat = tree.at(version);
  std::vector<Digest> plan;
  switch (cat.variant()) {
    case Variant::kV4:
    case Variant::kV5:
      plan = tree.resolve_chunks(version);
      break;
    case Variant::kV2:
      for (const auto& [number, digest] : tree.resolve_segments(version)) {
        plan.push_back(digest);
      }
      break;
    case Variant::kV1:
    case Variant::kV3:
      for (const BytePlanLayer& layer : tree.resolve_byte_plan(version)) {
        plan.insert(plan.end(), layer.objects.begin(), layer.objects.end());
      }
      break;
  }
  std::unordered_set<Digest, DigestHash> fetched;
  for (const Digest& d : plan) {
    if (fetched.insert(d).second) fetch(d);
  }

  result.data = reconstruct_version(tree, store_source(local), version);
  stats.version = cat.version();
  stats.variant = cat.variant();
  stats.full_size = result.data.size();
  stats.savings_ratio =
      stats.full_size == 0
          ? 0.0
          : 1.0 - static_cast<double>(stats.bytes_on_wire) / static_cast<double>(stats.full_size);
  return result;
}

std::size_t load_catalogs(const ObjectStore& store, CatalogTree& tree) {
  std::size_t inserted = 0;
  for (const auto& [digest, entry] : store.index()) {
    if (entry.kind != EncodedKind::kCatalog || tree.contains(digest)) continue;
    tree.insert(decode_catalog(store.get(digest)));
    ++inserted;
  }
  return inserted;
}

CatalogTree tree_from_store(const ObjectStore& store) {
  CatalogTree tree;
  load_catalogs(store, tree);
  return tree;
}

}  // namespace verso
