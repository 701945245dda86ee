// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <unordered_map>
#include <vector>

#include "verso/catalog.hpp"
#include "verso/digest.hpp"

namespace verso {

// One layer of a byte-diff reconstruction: the ground truth's data segments
// first, then one diff-segment layer per descendant catalog.
struct BytePlanLayer {
  Digest catalog;
  Variant variant = Variant::kV1;
  bool is_ground_truth = false;
  std::vector<Digest> objects;  // data or diff segment ids, in order
};

// Version tree of signed catalogs, keyed by catalog digest. Parents refer
// to digests, so any tampering with an ancestor changes every digest below
// it. Resolution walks the tree post-order and never mutates it; readers
// may run concurrently, insertion needs exclusive access.
class CatalogTree {
 public:
  // Validates the catalog's structural shape (BodyError) and, for parents
  // already present, version monotonicity (CycleError: versions must
  // strictly increase along parent edges). Missing parents are tolerated
  // here and reported at resolution time. Returns the catalog digest.
  Digest insert(SecureCatalog catalog);

  bool contains(const Digest& digest) const { return nodes_.contains(digest); }
  const SecureCatalog* find(const Digest& digest) const;
  const SecureCatalog& at(const Digest& digest) const;  // NotFoundError
  std::size_t size() const { return nodes_.size(); }
  const std::unordered_map<Digest, SecureCatalog, DigestHash>& nodes() const { return nodes_; }

  // V4/V5 resolution: the version's chunk-object id list.
  std::vector<Digest> resolve_chunks(const Digest& version) const;

  // V2 resolution: overlay of (segment number, object id) pairs. Parents
  // are folded in left to right, then the catalog's own pairs; the
  // right-most occurrence of a number wins.
  std::map<std::uint64_t, Digest> resolve_segments(const Digest& version) const;

  // V1/V3 resolution: the ordered layer stack, ground truth first.
  std::vector<BytePlanLayer> resolve_byte_plan(const Digest& version) const;

  // Catalog digests visited when resolving, post-order (ancestors before
  // descendants, duplicates dropped, the version itself last).
  std::vector<Digest> resolution_path(const Digest& version) const;

  // Catalogs on the spine from this version to its ground truth, following
  // the last listed parent at each step. Ground truths have depth 1.
  std::size_t depth(const Digest& version) const;

 private:
  const SecureCatalog& parent_of(const SecureCatalog& child, const Digest& parent_digest) const;

  std::unordered_map<Digest, SecureCatalog, DigestHash> nodes_;
};

}  // namespace verso
