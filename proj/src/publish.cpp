// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0

#include "verso/publish.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>
#include <utility>

#include "verso/byte_delta.hpp"
#include "verso/errors.hpp"
#include "verso/seq_delta.hpp"
#include "verso/wire.hpp"

namespace verso {

namespace {

// Encoded ByteEditOp overhead: 6-byte TLV header + kind + two u64 fields.
constexpr std::uint64_t kByteOpOverhead = 23;

std::string hex_component(const Digest& d) { return d.hex(); }

ContentObject data_segment(const HierarchicalName& base, std::uint64_t version, std::uint64_t i,
                           std::span<const std::uint8_t> payload) {
  return {base.with_version(version).with_segment(i), PayloadKind::kDataSegment,
          {payload.begin(), payload.end()}};
}

ContentObject diff_segment(const HierarchicalName& base, std::uint64_t version, std::uint64_t i,
                           std::vector<std::uint8_t> payload) {
  return {base.with_version(version).with_segment(i), PayloadKind::kDiffSegment,
          std::move(payload)};
}

std::vector<ContentObject> fixed_segments(const HierarchicalName& base, std::uint64_t version,
                                          std::span<const std::uint8_t> data,
                                          std::uint64_t segment_size) {
  std::vector<ContentObject> out;
  for (std::uint64_t off = 0; off < data.size(); off += segment_size) {
    std::uint64_t n = std::min<std::uint64_t>(segment_size, data.size() - off);
    out.push_back(data_segment(base, version, out.size(), data.subspan(off, n)));
  }
  return out;
}

struct ChunkSet {
  std::vector<ContentObject> objects;  // one per distinct id, in first-seen order
  std::vector<Digest> ids;             // object digests, one per chunk in order
};

// Chunk objects are named <prefix>/<hex of the raw chunk hash>, so equal
// chunk content yields the same object everywhere it appears.
ChunkSet chunk_set(const HierarchicalName& prefix, std::span<const std::uint8_t> data,
                   const ChunkParams& params) {
  ChunkSet out;
  std::unordered_set<Digest, DigestHash> seen;
  for (const Chunk& c : chunk_stream(data, params)) {
    HierarchicalName name = prefix.with_component(hex_component(c.id));
    ContentObject object{std::move(name), PayloadKind::kChunk,
                         {data.begin() + static_cast<std::ptrdiff_t>(c.offset),
                          data.begin() + static_cast<std::ptrdiff_t>(c.offset + c.size)}};
    Digest id = object_digest(object);
    out.ids.push_back(id);
    if (seen.insert(id).second) out.objects.push_back(std::move(object));
  }
  return out;
}

std::vector<std::uint8_t> payload_of(const ObjectSource& source, const Digest& digest) {
  return decode_content_object(source(digest)).payload;
}

// Splits ops whose encoding would exceed the object payload cap. A REPLACE
// keeps its input range on the first piece and continues with INSERTs at
// the range end; INSERTs split into several at the same offset (applied in
// list order); DELETE carries no bytes and never splits.
std::vector<ByteEditOp> split_ops(std::vector<ByteEditOp> ops, std::uint64_t max_object_size) {
  if (max_object_size <= kByteOpOverhead) {
    throw SizeError("max object size " + std::to_string(max_object_size) +
                    " cannot fit a single edit op");
  }
  const std::uint64_t budget = max_object_size - kByteOpOverhead;
  std::vector<ByteEditOp> out;
  for (ByteEditOp& op : ops) {
    if (op.new_bytes.size() <= budget) {
      out.push_back(std::move(op));
      continue;
    }
    std::uint64_t done = 0;
    bool first = true;
    while (done < op.new_bytes.size()) {
      std::uint64_t n = std::min<std::uint64_t>(budget, op.new_bytes.size() - done);
      ByteEditOp piece;
      piece.new_bytes.assign(op.new_bytes.begin() + static_cast<std::ptrdiff_t>(done),
                             op.new_bytes.begin() + static_cast<std::ptrdiff_t>(done + n));
      if (first && op.kind == ByteOpKind::kReplace) {
        piece.kind = ByteOpKind::kReplace;
        piece.old_offset = op.old_offset;
        piece.old_len = op.old_len;
      } else {
        piece.kind = ByteOpKind::kInsert;
        piece.old_offset = op.old_offset + op.old_len;
        piece.old_len = 0;
      }
      out.push_back(std::move(piece));
      done += n;
      first = false;
    }
  }
  return out;
}

HierarchicalName versioned_name(const HierarchicalName& base, std::uint64_t version) {
  return base.with_version(version);
}

HierarchicalName effective_chunk_prefix(const HierarchicalName& base,
                                        const PublishParams& params) {
  return params.chunk_prefix ? *params.chunk_prefix : base;
}

}  // namespace

ObjectSource store_source(const ObjectStore& store) {
  return [&store](const Digest& d) { return store.get(d); };
}

void PublishParams::validate() const {
  chunk.validate();
  if (segment_size == 0) throw SizeError("segment size must be positive");
  if (segment_size > max_object_size) {
    throw SizeError("segment size " + std::to_string(segment_size) +
                    " exceeds max object size " + std::to_string(max_object_size));
  }
  if (chunk.max_size > max_object_size) {
    throw SizeError("max chunk size " + std::to_string(chunk.max_size) +
                    " exceeds max object size " + std::to_string(max_object_size));
  }
  if (consolidate_depth < 1) throw SizeError("consolidation depth must be at least 1");
  if (!(consolidate_payload_ratio > 0.0)) {
    throw SizeError("consolidation payload ratio must be positive");
  }
}

PublishResult make_ground_truth(const HierarchicalName& base_name, std::uint64_t version,
                                std::span<const std::uint8_t> data, const PublishParams& params,
                                const KeyPair& key,
                                const std::function<bool(const Digest&)>& known) {
  params.validate();
  HierarchicalName name = versioned_name(base_name, version);
  PublishResult result;
  CatalogBody body;

  if (params.variant == Variant::kV4 || params.variant == Variant::kV5) {
    ChunkSet chunks = chunk_set(effective_chunk_prefix(base_name, params), data, params.chunk);
    body = V4Body{effective_chunk_prefix(base_name, params), std::move(chunks.ids)};
    result.new_objects = std::move(chunks.objects);
  } else {
    std::vector<ContentObject> segments =
        fixed_segments(base_name, version, data, params.segment_size);
    std::vector<Digest> ids;
    ids.reserve(segments.size());
    for (const ContentObject& s : segments) ids.push_back(object_digest(s));
    switch (params.variant) {
      case Variant::kV1:
        body = V1Body{std::move(ids)};
        break;
      case Variant::kV2: {
        V2Body v2;
        for (std::uint64_t i = 0; i < ids.size(); ++i) v2.replacements.emplace_back(i, ids[i]);
        body = std::move(v2);
        break;
      }
      default:
        body = V3Body{std::move(ids)};
        break;
    }
    result.new_objects = std::move(segments);
  }

  if (known) {
    std::erase_if(result.new_objects,
                  [&](const ContentObject& o) { return known(object_digest(o)); });
  }
  result.catalog = sign_catalog(std::move(name), {}, std::move(body), key);
  return result;
}

PublishResult make_diff_version(const CatalogTree& tree, const ObjectSource& source,
                                const std::vector<Digest>& parents,
                                const HierarchicalName& base_name, std::uint64_t version,
                                std::span<const std::uint8_t> new_data,
                                const PublishParams& params, const KeyPair& key) {
  params.validate();
  if (parents.empty()) throw BodyError("a diff version needs at least one parent");
  for (const Digest& p : parents) {
    if (!tree.contains(p)) throw DanglingParentError("parent " + p.hex() + " not in tree");
  }
  HierarchicalName name = versioned_name(base_name, version);
  PublishResult result;

  switch (params.variant) {
    case Variant::kV5: {
      // All parents resolve (their chunks are fair game for dedup); the
      // ops rewrite the last listed parent's list.
      std::unordered_set<Digest, DigestHash> resolvable;
      std::vector<Digest> base_ids;
      for (const Digest& p : parents) {
        base_ids = tree.resolve_chunks(p);
        resolvable.insert(base_ids.begin(), base_ids.end());
      }
      ChunkSet chunks =
          chunk_set(effective_chunk_prefix(base_name, params), new_data, params.chunk);
      std::erase_if(chunks.objects, [&](const ContentObject& o) {
        return resolvable.contains(object_digest(o));
      });
      V5Body body{seq_diff(base_ids, chunks.ids)};
      result.new_objects = std::move(chunks.objects);
      result.catalog = sign_catalog(std::move(name), parents, std::move(body), key);
      return result;
    }
    case Variant::kV4:
      throw BodyError("enumeration catalogs are always ground truths; publish one instead");
    case Variant::kV1: {
      if (parents.size() != 1) throw BodyError("byte-diff catalogs take exactly one parent");
      std::vector<std::uint8_t> old_data = reconstruct_version(tree, source, parents.front());
      ByteEditScript script = byte_diff(old_data, new_data);
      V1Body body;
      if (!script.empty()) {
        std::vector<std::uint8_t> encoded = encode_byte_script(script);
        for (std::uint64_t off = 0; off < encoded.size(); off += params.segment_size) {
          std::uint64_t n = std::min<std::uint64_t>(params.segment_size, encoded.size() - off);
          result.new_objects.push_back(diff_segment(
              base_name, version, result.new_objects.size(),
              {encoded.begin() + static_cast<std::ptrdiff_t>(off),
               encoded.begin() + static_cast<std::ptrdiff_t>(off + n)}));
        }
        for (const ContentObject& o : result.new_objects) {
          body.segments.push_back(object_digest(o));
        }
      }
      result.catalog = sign_catalog(std::move(name), parents, std::move(body), key);
      return result;
    }
    case Variant::kV3: {
      if (parents.size() != 1) throw BodyError("byte-diff catalogs take exactly one parent");
      std::vector<std::uint8_t> old_data = reconstruct_version(tree, source, parents.front());
      ByteEditScript script = byte_diff(old_data, new_data);
      std::vector<ByteEditOp> ops = split_ops(script.ops(), params.max_object_size);
      V3Body body;
      for (const ByteEditOp& op : ops) {
        result.new_objects.push_back(diff_segment(base_name, version,
                                                  result.new_objects.size(),
                                                  encode_byte_op(op)));
        body.segments.push_back(object_digest(result.new_objects.back()));
      }
      result.catalog = sign_catalog(std::move(name), parents, std::move(body), key);
      return result;
    }
    case Variant::kV2: {
      if (parents.size() != 1) throw BodyError("replacement diffs take exactly one parent");
      std::map<std::uint64_t, Digest> old_segments = tree.resolve_segments(parents.front());
      std::uint64_t new_count =
          (new_data.size() + params.segment_size - 1) / params.segment_size;
      V2Body body;
      for (std::uint64_t i = 0; i < new_count; ++i) {
        std::uint64_t off = i * params.segment_size;
        std::uint64_t n = std::min<std::uint64_t>(params.segment_size, new_data.size() - off);
        std::span<const std::uint8_t> slice = new_data.subspan(off, n);
        if (auto it = old_segments.find(i); it != old_segments.end()) {
          std::vector<std::uint8_t> old_payload = payload_of(source, it->second);
          if (old_payload.size() == slice.size() &&
              std::equal(slice.begin(), slice.end(), old_payload.begin())) {
            continue;  // unchanged segment, keep the parent's object
          }
        }
        result.new_objects.push_back(data_segment(base_name, version, i, slice));
        body.replacements.emplace_back(i, object_digest(result.new_objects.back()));
      }
      // A shrinking version re-emits the now-dead tail numbers as empty
      // payloads so their bytes vanish from the concatenation.
      for (const auto& [number, digest] : old_segments) {
        if (number < new_count) continue;
        std::vector<std::uint8_t> old_payload = payload_of(source, digest);
        if (old_payload.empty()) continue;  // already elided upstream
        result.new_objects.push_back(data_segment(base_name, version, number, {}));
        body.replacements.emplace_back(number, object_digest(result.new_objects.back()));
      }
      result.catalog = sign_catalog(std::move(name), parents, std::move(body), key);
      return result;
    }
  }
  throw BodyError("unknown variant");
}

std::vector<std::uint8_t> reconstruct_version(const CatalogTree& tree, const ObjectSource& source,
                                              const Digest& version) {
  const SecureCatalog& cat = tree.at(version);
  switch (cat.variant()) {
    case Variant::kV4:
    case Variant::kV5: {
      std::vector<std::uint8_t> out;
      for (const Digest& id : tree.resolve_chunks(version)) {
        std::vector<std::uint8_t> payload = payload_of(source, id);
        out.insert(out.end(), payload.begin(), payload.end());
      }
      return out;
    }
    case Variant::kV2: {
      std::vector<std::uint8_t> out;
      for (const auto& [number, digest] : tree.resolve_segments(version)) {
        std::vector<std::uint8_t> payload = payload_of(source, digest);
        out.insert(out.end(), payload.begin(), payload.end());
      }
      return out;
    }
    case Variant::kV1:
    case Variant::kV3: {
      std::vector<BytePlanLayer> layers = tree.resolve_byte_plan(version);
      std::vector<std::uint8_t> base;
      for (const Digest& id : layers.front().objects) {
        std::vector<std::uint8_t> payload = payload_of(source, id);
        base.insert(base.end(), payload.begin(), payload.end());
      }
      PieceTable table(base.size());
      for (std::size_t i = 1; i < layers.size(); ++i) {
        const BytePlanLayer& layer = layers[i];
        if (layer.variant == Variant::kV1) {
          std::vector<std::uint8_t> encoded;
          for (const Digest& id : layer.objects) {
            std::vector<std::uint8_t> payload = payload_of(source, id);
            encoded.insert(encoded.end(), payload.begin(), payload.end());
          }
          if (!encoded.empty()) table.apply(decode_byte_script(encoded));
        } else {
          std::vector<ByteEditOp> ops;
          for (const Digest& id : layer.objects) {
            ops.push_back(decode_byte_op(payload_of(source, id)));
          }
          table.apply(ByteEditScript(std::move(ops)));
        }
      }
      return table.materialize(base);
    }
  }
  throw BodyError("unknown variant");
}

Publisher::Publisher(ObjectStore& store, CatalogTree& tree, KeyPair key,
                     HierarchicalName base_name, PublishParams params)
    : store_(store),
      tree_(tree),
      key_(key),
      base_name_(std::move(base_name)),
      params_(std::move(params)) {
  params_.validate();
  // Resume from existing state: the head is the highest version under this
  // base name already present in the tree.
  for (const auto& [digest, catalog] : tree_.nodes()) {
    if (catalog.name.base() != base_name_) continue;
    if (!head_ || catalog.version() >= next_version_) {
      head_ = digest;
      next_version_ = catalog.version() + 1;
    }
  }
  if (head_) {
    // Rebuild the consolidation accounting from the spine's object sizes.
    Digest current = *head_;
    while (true) {
      const SecureCatalog& cat = tree_.at(current);
      if (cat.is_ground_truth()) break;
      diff_bytes_since_truth_ += diff_object_bytes(cat);
      current = cat.parents.back();
      if (!tree_.contains(current)) break;  // partial tree: stop accounting
    }
  }
}

std::uint64_t Publisher::diff_object_bytes(const SecureCatalog& catalog) const {
  const auto& index = store_.index();
  auto size_of = [&](const Digest& d) -> std::uint64_t {
    auto it = index.find(d);
    return it == index.end() ? 0 : it->second.size;
  };
  std::uint64_t total = 0;
  if (const auto* v5 = std::get_if<V5Body>(&catalog.body)) {
    for (const SeqEditOp& op : v5->ops) {
      if (op.kind != SeqOpKind::kInsertIds) continue;
      for (const Digest& id : op.ids) total += size_of(id);
    }
  } else if (const auto* v1 = std::get_if<V1Body>(&catalog.body)) {
    for (const Digest& id : v1->segments) total += size_of(id);
  } else if (const auto* v3 = std::get_if<V3Body>(&catalog.body)) {
    for (const Digest& id : v3->segments) total += size_of(id);
  } else if (const auto* v2 = std::get_if<V2Body>(&catalog.body)) {
    for (const auto& [number, id] : v2->replacements) total += size_of(id);
  }
  return total;
}

Publisher::Info Publisher::publish(std::span<const std::uint8_t> data) {
  // Enumeration variants republish a full (deduplicated) ground truth every
  // version; the others start from one and then diff.
  bool want_truth = !head_ || params_.variant == Variant::kV4;
  if (!want_truth && tree_.depth(*head_) >= params_.consolidate_depth) want_truth = true;

  if (!want_truth) {
    PublishResult diff = make_diff_version(tree_, store_source(store_), {*head_}, base_name_,
                                           next_version_, data, params_, key_);
    std::uint64_t diff_bytes = 0;
    for (const ContentObject& o : diff.new_objects) {
      diff_bytes += canonical_encode(o, params_.max_object_size).size();
    }
    double limit = params_.consolidate_payload_ratio * static_cast<double>(data.size());
    if (static_cast<double>(diff_bytes_since_truth_ + diff_bytes) > limit) {
      want_truth = true;  // diffs have piled up; reset with a ground truth
    } else {
      diff_bytes_since_truth_ += diff_bytes;
      return commit(std::move(diff));
    }
  }

  PublishResult truth =
      make_ground_truth(base_name_, next_version_, data, params_, key_,
                        [this](const Digest& d) { return store_.contains(d); });
  diff_bytes_since_truth_ = 0;
  return commit(std::move(truth));
}

Publisher::Info Publisher::publish_diff(std::span<const std::uint8_t> data,
                                        const std::vector<Digest>& parents) {
  PublishResult diff = make_diff_version(tree_, store_source(store_), parents, base_name_,
                                         next_version_, data, params_, key_);
  for (const ContentObject& o : diff.new_objects) {
    diff_bytes_since_truth_ += canonical_encode(o, params_.max_object_size).size();
  }
  return commit(std::move(diff));
}

Publisher::Info Publisher::commit(PublishResult result) {
  Info info;
  info.version = result.catalog.version();
  info.ground_truth = result.catalog.is_ground_truth();
  for (const ContentObject& o : result.new_objects) {
    std::vector<std::uint8_t> encoded = canonical_encode(o, params_.max_object_size);
    if (store_.put(encoded).inserted) {
      ++info.new_objects;
      info.new_object_bytes += encoded.size();
    }
  }
  store_.put(result.catalog);
  info.catalog_digest = tree_.insert(std::move(result.catalog));
  head_ = info.catalog_digest;
  next_version_ = info.version + 1;
  return info;
}

}  // namespace verso
