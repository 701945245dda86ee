// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0

#include "verso/catalog_tree.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>
#include <utility>

#include "verso/errors.hpp"
#include "verso/seq_delta.hpp"
#include "verso/wire.hpp"

namespace verso {

namespace {

using DigestSet = std::unordered_set<Digest, DigestHash>;

[[noreturn]] void throw_cycle(const SecureCatalog& child, const SecureCatalog& parent) {
  throw CycleError("catalog " + child.name.render() + " (version " +
                   std::to_string(child.version()) + ") lists parent version " +
                   std::to_string(parent.version()) +
                   "; versions must strictly increase along parent edges");
}

}  // namespace

Digest CatalogTree::insert(SecureCatalog catalog) {
  validate_catalog_shape(catalog.name, catalog.parents, catalog.body);
  for (const Digest& p : catalog.parents) {
    if (const SecureCatalog* parent = find(p); parent != nullptr) {
      if (parent->version() >= catalog.version()) throw_cycle(catalog, *parent);
    }
  }
  Digest digest = catalog_digest(catalog);
  nodes_.emplace(digest, std::move(catalog));
  return digest;
}

const SecureCatalog* CatalogTree::find(const Digest& digest) const {
  auto it = nodes_.find(digest);
  return it == nodes_.end() ? nullptr : &it->second;
}

const SecureCatalog& CatalogTree::at(const Digest& digest) const {
  const SecureCatalog* c = find(digest);
  if (c == nullptr) throw NotFoundError("catalog " + digest.hex() + " not in tree");
  return *c;
}

const SecureCatalog& CatalogTree::parent_of(const SecureCatalog& child,
                                            const Digest& parent_digest) const {
  const SecureCatalog* parent = find(parent_digest);
  if (parent == nullptr) {
    throw DanglingParentError("catalog " + child.name.render() + " references missing parent " +
                              parent_digest.hex());
  }
  if (parent->version() >= child.version()) throw_cycle(child, *parent);
  return *parent;
}

std::vector<Digest> CatalogTree::resolve_chunks(const Digest& version) const {
  // Per-call memo keeps DAG resolution linear without a shared cache that
  // would break concurrent readers.
  std::unordered_map<Digest, std::vector<Digest>, DigestHash> memo;

  auto resolve = [&](auto&& self, const Digest& d) -> const std::vector<Digest>& {
    if (auto it = memo.find(d); it != memo.end()) return it->second;
    const SecureCatalog& cat = at(d);
    std::vector<Digest> ids;
    if (const auto* v4 = std::get_if<V4Body>(&cat.body)) {
      ids = v4->chunks;
    } else if (const auto* v5 = std::get_if<V5Body>(&cat.body)) {
      // Post-order: every listed parent resolves first (their chunks must
      // be available), the ops then rewrite the LAST parent's list.
      const std::vector<Digest>* base = nullptr;
      for (const Digest& p : cat.parents) {
        parent_of(cat, p);
        base = &self(self, p);
      }
      ids = seq_apply(*base, v5->ops);
    } else {
      throw BodyError("catalog " + cat.name.render() + " (" +
                      std::string(variant_name(cat.variant())) +
                      ") does not resolve to a chunk list");
    }
    return memo.emplace(d, std::move(ids)).first->second;
  };
  return resolve(resolve, version);
}

std::map<std::uint64_t, Digest> CatalogTree::resolve_segments(const Digest& version) const {
  std::unordered_map<Digest, std::map<std::uint64_t, Digest>, DigestHash> memo;

  auto resolve = [&](auto&& self, const Digest& d) -> const std::map<std::uint64_t, Digest>& {
    if (auto it = memo.find(d); it != memo.end()) return it->second;
    const SecureCatalog& cat = at(d);
    const auto* v2 = std::get_if<V2Body>(&cat.body);
    if (v2 == nullptr) {
      throw BodyError("catalog " + cat.name.render() + " (" +
                      std::string(variant_name(cat.variant())) +
                      ") does not resolve to a segment map");
    }
    std::map<std::uint64_t, Digest> segments;
    for (const Digest& p : cat.parents) {
      parent_of(cat, p);
      for (const auto& [number, digest] : self(self, p)) segments[number] = digest;
    }
    // Own pairs last, in listed order: the right-most occurrence wins.
    for (const auto& [number, digest] : v2->replacements) segments[number] = digest;
    return memo.emplace(d, std::move(segments)).first->second;
  };
  return resolve(resolve, version);
}

std::vector<BytePlanLayer> CatalogTree::resolve_byte_plan(const Digest& version) const {
  std::vector<BytePlanLayer> layers;
  Digest current = version;
  while (true) {
    const SecureCatalog& cat = at(current);
    BytePlanLayer layer;
    layer.catalog = current;
    layer.variant = cat.variant();
    layer.is_ground_truth = cat.is_ground_truth();
    if (const auto* v1 = std::get_if<V1Body>(&cat.body)) {
      layer.objects = v1->segments;
    } else if (const auto* v3 = std::get_if<V3Body>(&cat.body)) {
      layer.objects = v3->segments;
    } else {
      throw BodyError("catalog " + cat.name.render() + " (" +
                      std::string(variant_name(cat.variant())) +
                      ") does not resolve to a byte plan");
    }
    layers.push_back(std::move(layer));
    if (cat.is_ground_truth()) break;
    parent_of(cat, cat.parents.front());
    current = cat.parents.front();
  }
  std::reverse(layers.begin(), layers.end());
  return layers;
}

std::vector<Digest> CatalogTree::resolution_path(const Digest& version) const {
  std::vector<Digest> path;
  DigestSet seen;
  auto visit = [&](auto&& self, const Digest& d) -> void {
    if (!seen.insert(d).second) return;
    const SecureCatalog& cat = at(d);
    for (const Digest& p : cat.parents) {
      parent_of(cat, p);
      self(self, p);
    }
    path.push_back(d);
  };
  visit(visit, version);
  return path;
}

std::size_t CatalogTree::depth(const Digest& version) const {
  std::size_t depth = 0;
  Digest current = version;
  while (true) {
    const SecureCatalog& cat = at(current);
    ++depth;
    if (cat.is_ground_truth()) return depth;
    parent_of(cat, cat.parents.back());
    current = cat.parents.back();
  }
}

}  // namespace verso
