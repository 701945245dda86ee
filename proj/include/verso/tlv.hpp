// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "verso/errors.hpp"

// Canonical type-length-value encoding: 2-byte type, 4-byte length, value,
// all big-endian. Every wire-visible structure is encoded with the fixed
// field order its codec writes; equal values always produce identical bytes.
namespace verso::tlv {

// Assigned type codes.
inline constexpr std::uint16_t kName = 0x0001;
inline constexpr std::uint16_t kNameComponent = 0x0002;
inline constexpr std::uint16_t kVersion = 0x0003;
inline constexpr std::uint16_t kSegment = 0x0004;
inline constexpr std::uint16_t kContentObject = 0x0010;
inline constexpr std::uint16_t kPayloadKind = 0x0011;
inline constexpr std::uint16_t kPayload = 0x0012;
inline constexpr std::uint16_t kSecureCatalog = 0x0020;
inline constexpr std::uint16_t kByteScript = 0x0030;
inline constexpr std::uint16_t kByteOp = 0x0031;
inline constexpr std::uint16_t kDiffType = 0x0032;
inline constexpr std::uint16_t kSeqOps = 0x0038;
inline constexpr std::uint16_t kSeqKeepRun = 0x0039;
inline constexpr std::uint16_t kSeqInsertIds = 0x003A;
inline constexpr std::uint16_t kSeqDeleteRun = 0x003B;
inline constexpr std::uint16_t kBodyV1 = 0x0040;
inline constexpr std::uint16_t kBodyV2 = 0x0041;
inline constexpr std::uint16_t kBodyV3 = 0x0042;
inline constexpr std::uint16_t kBodyV4 = 0x0043;
inline constexpr std::uint16_t kBodyV5 = 0x0044;
inline constexpr std::uint16_t kParents = 0x0046;
inline constexpr std::uint16_t kSignature = 0x0050;
inline constexpr std::uint16_t kSchemeId = 0x0051;
inline constexpr std::uint16_t kKeyDigest = 0x0052;
inline constexpr std::uint16_t kSignatureBytes = 0x0053;

inline constexpr std::size_t kHeaderSize = 6;

class Writer {
 public:
  // Opens a TLV whose length is patched in end(). Returns a mark for end().
  std::size_t begin(std::uint16_t type);
  void end(std::size_t mark);

  void bytes(std::span<const std::uint8_t> data);
  void u8(std::uint8_t v);
  void u64(std::uint64_t v);

  // Complete small TLVs.
  void field(std::uint16_t type, std::span<const std::uint8_t> value);
  void field_u8(std::uint16_t type, std::uint8_t v);
  void field_u64(std::uint16_t type, std::uint64_t v);

  std::size_t size() const { return buf_.size(); }
  std::vector<std::uint8_t> take() { return std::move(buf_); }

 private:
  std::vector<std::uint8_t> buf_;
};

// Bounds-checked cursor over an encoded buffer. Any structural violation
// throws DecodeError.
class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}

  bool done() const { return pos_ == data_.size(); }
  std::size_t remaining() const { return data_.size() - pos_; }

  // Type of the next TLV without consuming it.
  std::uint16_t peek_type() const;

  // Consumes the next TLV (checking its type) and returns a reader over its
  // value.
  Reader open(std::uint16_t expected_type) { return Reader(value(expected_type)); }

  // Consumes the next TLV (checking its type) and returns its raw value.
  std::span<const std::uint8_t> value(std::uint16_t expected_type);

  // Primitive reads inside a value.
  std::uint8_t u8();
  std::uint64_t u64();
  std::span<const std::uint8_t> take(std::size_t n);
  std::span<const std::uint8_t> rest();

  void expect_done() const {
    if (!done()) throw DecodeError("trailing bytes in encoding");
  }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

}  // namespace verso::tlv
