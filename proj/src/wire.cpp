// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0

#include "verso/wire.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace verso {

namespace {

std::span<const std::uint8_t> as_bytes(const std::string& s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

void write_digest_list(tlv::Writer& w, std::uint16_t type, std::span<const Digest> list) {
  std::size_t mark = w.begin(type);
  for (const Digest& d : list) w.bytes(d.span());
  w.end(mark);
}

std::vector<Digest> read_digest_list(std::span<const std::uint8_t> value) {
  if (value.size() % Digest::kSize != 0) throw DecodeError("digest list length not a multiple of 32");
  std::vector<Digest> out(value.size() / Digest::kSize);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::copy_n(value.data() + i * Digest::kSize, Digest::kSize, out[i].bytes.data());
  }
  return out;
}

Digest read_digest(tlv::Reader& r) {
  auto bytes = r.take(Digest::kSize);
  Digest d;
  std::copy_n(bytes.data(), Digest::kSize, d.bytes.data());
  return d;
}

void write_seq_ops(tlv::Writer& w, std::span<const SeqEditOp> ops) {
  std::size_t mark = w.begin(tlv::kSeqOps);
  for (const SeqEditOp& op : ops) {
    switch (op.kind) {
      case SeqOpKind::kKeepRun: {
        std::size_t m = w.begin(tlv::kSeqKeepRun);
        w.u64(op.old_index);
        w.u64(op.count);
        w.end(m);
        break;
      }
      case SeqOpKind::kInsertIds: {
        std::size_t m = w.begin(tlv::kSeqInsertIds);
        w.u64(op.old_index);
        for (const Digest& d : op.ids) w.bytes(d.span());
        w.end(m);
        break;
      }
      case SeqOpKind::kDeleteRun: {
        std::size_t m = w.begin(tlv::kSeqDeleteRun);
        w.u64(op.old_index);
        w.u64(op.count);
        w.end(m);
        break;
      }
    }
  }
  w.end(mark);
}

std::vector<SeqEditOp> read_seq_ops(tlv::Reader& r) {
  std::vector<SeqEditOp> ops;
  tlv::Reader list = r.open(tlv::kSeqOps);
  while (!list.done()) {
    switch (list.peek_type()) {
      case tlv::kSeqKeepRun: {
        tlv::Reader op = list.open(tlv::kSeqKeepRun);
        std::uint64_t index = op.u64();
        std::uint64_t count = op.u64();
        op.expect_done();
        ops.push_back(SeqEditOp::keep(index, count));
        break;
      }
      case tlv::kSeqInsertIds: {
        tlv::Reader op = list.open(tlv::kSeqInsertIds);
        std::uint64_t index = op.u64();
        ops.push_back(SeqEditOp::insert(index, read_digest_list(op.rest())));
        break;
      }
      case tlv::kSeqDeleteRun: {
        tlv::Reader op = list.open(tlv::kSeqDeleteRun);
        std::uint64_t index = op.u64();
        std::uint64_t count = op.u64();
        op.expect_done();
        ops.push_back(SeqEditOp::del(index, count));
        break;
      }
      default:
        throw DecodeError("unknown sequence op type");
    }
  }
  return ops;
}

void write_body(tlv::Writer& w, const CatalogBody& body) {
  if (const auto* v1 = std::get_if<V1Body>(&body)) {
    write_digest_list(w, tlv::kBodyV1, v1->segments);
  } else if (const auto* v2 = std::get_if<V2Body>(&body)) {
    std::size_t mark = w.begin(tlv::kBodyV2);
    for (const auto& [number, digest] : v2->replacements) {
      w.u64(number);
      w.bytes(digest.span());
    }
    w.end(mark);
  } else if (const auto* v3 = std::get_if<V3Body>(&body)) {
    write_digest_list(w, tlv::kBodyV3, v3->segments);
  } else if (const auto* v4 = std::get_if<V4Body>(&body)) {
    std::size_t mark = w.begin(tlv::kBodyV4);
    write_name(w, v4->chunk_prefix);
    for (const Digest& d : v4->chunks) w.bytes(d.span());
    w.end(mark);
  } else {
    std::size_t mark = w.begin(tlv::kBodyV5);
    write_seq_ops(w, std::get<V5Body>(body).ops);
    w.end(mark);
  }
}

CatalogBody read_body(tlv::Reader& r) {
  switch (r.peek_type()) {
    case tlv::kBodyV1:
      return V1Body{read_digest_list(r.value(tlv::kBodyV1))};
    case tlv::kBodyV2: {
      tlv::Reader body = r.open(tlv::kBodyV2);
      V2Body v2;
      while (!body.done()) {
        std::uint64_t number = body.u64();
        v2.replacements.emplace_back(number, read_digest(body));
      }
      return v2;
    }
    case tlv::kBodyV3:
      return V3Body{read_digest_list(r.value(tlv::kBodyV3))};
    case tlv::kBodyV4: {
      tlv::Reader body = r.open(tlv::kBodyV4);
      V4Body v4;
      v4.chunk_prefix = read_name(body);
      v4.chunks = read_digest_list(body.rest());
      return v4;
    }
    case tlv::kBodyV5: {
      tlv::Reader body = r.open(tlv::kBodyV5);
      V5Body v5;
      v5.ops = read_seq_ops(body);
      body.expect_done();
      return v5;
    }
    default:
      throw DecodeError("unknown catalog body type");
  }
}

void write_signature(tlv::Writer& w, const SignatureBlock& sig) {
  std::size_t mark = w.begin(tlv::kSignature);
  w.field_u8(tlv::kSchemeId, sig.scheme_id);
  w.field(tlv::kKeyDigest, sig.public_key_digest.span());
  w.field(tlv::kSignatureBytes, sig.signature);
  w.end(mark);
}

SignatureBlock read_signature(tlv::Reader& r) {
  tlv::Reader sig = r.open(tlv::kSignature);
  SignatureBlock out;
  tlv::Reader scheme = sig.open(tlv::kSchemeId);
  out.scheme_id = scheme.u8();
  scheme.expect_done();
  auto key_digest = sig.value(tlv::kKeyDigest);
  if (key_digest.size() != Digest::kSize) throw DecodeError("key digest must be 32 bytes");
  std::copy_n(key_digest.data(), Digest::kSize, out.public_key_digest.bytes.data());
  auto sig_bytes = sig.value(tlv::kSignatureBytes);
  out.signature.assign(sig_bytes.begin(), sig_bytes.end());
  sig.expect_done();
  return out;
}

ByteEditOp read_byte_op(tlv::Reader& r) {
  tlv::Reader op = r.open(tlv::kByteOp);
  ByteEditOp out;
  std::uint8_t kind = op.u8();
  if (kind < 0x01 || kind > 0x03) throw DecodeError("unknown byte op kind");
  out.kind = static_cast<ByteOpKind>(kind);
  out.old_offset = op.u64();
  out.old_len = op.u64();
  auto tail = op.rest();
  out.new_bytes.assign(tail.begin(), tail.end());
  return out;
}

}  // namespace

void write_name(tlv::Writer& w, const HierarchicalName& name) {
  std::size_t mark = w.begin(tlv::kName);
  for (const std::string& c : name.components()) {
    w.field(tlv::kNameComponent, as_bytes(c));
  }
  if (name.version()) w.field_u64(tlv::kVersion, *name.version());
  if (name.segment()) w.field_u64(tlv::kSegment, *name.segment());
  w.end(mark);
}

HierarchicalName read_name(tlv::Reader& r) {
  tlv::Reader name = r.open(tlv::kName);
  std::vector<std::string> components;
  while (!name.done() && name.peek_type() == tlv::kNameComponent) {
    auto value = name.value(tlv::kNameComponent);
    if (value.empty()) throw DecodeError("empty name component");
    components.emplace_back(reinterpret_cast<const char*>(value.data()), value.size());
  }
  std::optional<std::uint64_t> version;
  std::optional<std::uint64_t> segment;
  if (!name.done() && name.peek_type() == tlv::kVersion) {
    tlv::Reader v = name.open(tlv::kVersion);
    version = v.u64();
    v.expect_done();
  }
  if (!name.done() && name.peek_type() == tlv::kSegment) {
    tlv::Reader s = name.open(tlv::kSegment);
    segment = s.u64();
    s.expect_done();
  }
  name.expect_done();
  try {
    return HierarchicalName(std::move(components), version, segment);
  } catch (const NameParseError& e) {
    throw DecodeError(std::string("invalid name on wire: ") + e.what());
  }
}

std::vector<std::uint8_t> encode_name(const HierarchicalName& name) {
  tlv::Writer w;
  write_name(w, name);
  return w.take();
}

HierarchicalName decode_name(std::span<const std::uint8_t> data) {
  tlv::Reader r(data);
  HierarchicalName name = read_name(r);
  r.expect_done();
  return name;
}

std::vector<std::uint8_t> canonical_encode(const ContentObject& object,
                                           std::uint64_t max_object_size) {
  if (object.payload.size() > max_object_size) {
    throw SizeError("payload of " + std::to_string(object.payload.size()) +
                    " bytes exceeds maximum object size " + std::to_string(max_object_size));
  }
  tlv::Writer w;
  std::size_t mark = w.begin(tlv::kContentObject);
  write_name(w, object.name);
  w.field_u8(tlv::kPayloadKind, static_cast<std::uint8_t>(object.kind));
  w.field(tlv::kPayload, object.payload);
  w.end(mark);
  return w.take();
}

ContentObject decode_content_object(std::span<const std::uint8_t> data) {
  tlv::Reader r(data);
  tlv::Reader obj = r.open(tlv::kContentObject);
  r.expect_done();
  ContentObject out;
  out.name = read_name(obj);
  tlv::Reader kind = obj.open(tlv::kPayloadKind);
  std::uint8_t k = kind.u8();
  kind.expect_done();
  if (k < 0x01 || k > 0x04) throw DecodeError("unknown payload kind");
  out.kind = static_cast<PayloadKind>(k);
  auto payload = obj.value(tlv::kPayload);
  out.payload.assign(payload.begin(), payload.end());
  obj.expect_done();
  return out;
}

std::vector<std::uint8_t> catalog_signed_bytes(const HierarchicalName& name,
                                               const std::vector<Digest>& parents,
                                               const CatalogBody& body) {
  tlv::Writer w;
  write_name(w, name);
  write_digest_list(w, tlv::kParents, parents);
  write_body(w, body);
  return w.take();
}

std::vector<std::uint8_t> canonical_encode(const SecureCatalog& catalog) {
  tlv::Writer w;
  std::size_t mark = w.begin(tlv::kSecureCatalog);
  write_name(w, catalog.name);
  write_digest_list(w, tlv::kParents, catalog.parents);
  write_body(w, catalog.body);
  write_signature(w, catalog.signature);
  w.end(mark);
  return w.take();
}

SecureCatalog decode_catalog(std::span<const std::uint8_t> data) {
  tlv::Reader r(data);
  tlv::Reader cat = r.open(tlv::kSecureCatalog);
  r.expect_done();
  SecureCatalog out;
  out.name = read_name(cat);
  out.parents = read_digest_list(cat.value(tlv::kParents));
  out.body = read_body(cat);
  out.signature = read_signature(cat);
  cat.expect_done();
  return out;
}

Digest object_digest(const ContentObject& object) {
  // Identity ignores the wire size cap: every constructible object has a
  // digest; the cap is enforced when the object is encoded for transfer.
  auto encoded = canonical_encode(object, std::numeric_limits<std::uint64_t>::max());
  return sha256(encoded);
}

Digest catalog_digest(const SecureCatalog& catalog) {
  return sha256(canonical_encode(catalog));
}

std::vector<std::uint8_t> encode_byte_op(const ByteEditOp& op) {
  tlv::Writer w;
  std::size_t mark = w.begin(tlv::kByteOp);
  w.u8(static_cast<std::uint8_t>(op.kind));
  w.u64(op.old_offset);
  w.u64(op.old_len);
  w.bytes(op.new_bytes);
  w.end(mark);
  return w.take();
}

ByteEditOp decode_byte_op(std::span<const std::uint8_t> data) {
  tlv::Reader r(data);
  ByteEditOp op = read_byte_op(r);
  r.expect_done();
  return op;
}

std::vector<std::uint8_t> encode_byte_script(const ByteEditScript& script) {
  tlv::Writer w;
  std::size_t mark = w.begin(tlv::kByteScript);
  w.field_u8(tlv::kDiffType, 0x01);  // binary; 0x02 reserved for text diffs
  for (const ByteEditOp& op : script.ops()) {
    w.bytes(encode_byte_op(op));
  }
  w.end(mark);
  return w.take();
}

ByteEditScript decode_byte_script(std::span<const std::uint8_t> data) {
  tlv::Reader r(data);
  tlv::Reader script = r.open(tlv::kByteScript);
  r.expect_done();
  tlv::Reader diff_type = script.open(tlv::kDiffType);
  std::uint8_t type = diff_type.u8();
  diff_type.expect_done();
  if (type != 0x01) throw DecodeError("unsupported diff type");
  std::vector<ByteEditOp> ops;
  while (!script.done()) ops.push_back(read_byte_op(script));
  try {
    return ByteEditScript(std::move(ops));
  } catch (const ScriptRangeError& e) {
    throw DecodeError(std::string("invalid script on wire: ") + e.what());
  }
}

std::vector<std::uint8_t> encode_seq_ops(std::span<const SeqEditOp> ops) {
  tlv::Writer w;
  write_seq_ops(w, ops);
  return w.take();
}

std::vector<SeqEditOp> decode_seq_ops(std::span<const std::uint8_t> data) {
  tlv::Reader r(data);
  auto ops = read_seq_ops(r);
  r.expect_done();
  return ops;
}

EncodedKind classify_encoded(std::span<const std::uint8_t> data) {
  tlv::Reader r(data);
  switch (r.peek_type()) {
    case tlv::kContentObject:
      return EncodedKind::kContentObject;
    case tlv::kSecureCatalog:
      return EncodedKind::kCatalog;
    default:
      throw DecodeError("not a content object or catalog encoding");
  }
}

}  // namespace verso
