// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0

#include "verso/tlv.hpp"

#include <limits>

namespace verso::tlv {

std::size_t Writer::begin(std::uint16_t type) {
  u8(static_cast<std::uint8_t>(type >> 8));
  u8(static_cast<std::uint8_t>(type));
  std::size_t mark = buf_.size();
  buf_.insert(buf_.end(), 4, 0);
  return mark;
}

void Writer::end(std::size_t mark) {
  std::uint64_t len = buf_.size() - (mark + 4);
  if (len > std::numeric_limits<std::uint32_t>::max()) throw SizeError("TLV value exceeds 4 GiB");
  buf_[mark] = static_cast<std::uint8_t>(len >> 24);
  buf_[mark + 1] = static_cast<std::uint8_t>(len >> 16);
  buf_[mark + 2] = static_cast<std::uint8_t>(len >> 8);
  buf_[mark + 3] = static_cast<std::uint8_t>(len);
}

void Writer::bytes(std::span<const std::uint8_t> data) {
  buf_.insert(buf_.end(), data.begin(), data.end());
}

void Writer::u8(std::uint8_t v) { buf_.push_back(v); }

void Writer::u64(std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    buf_.push_back(static_cast<std::uint8_t>(v >> shift));
  }
}

void Writer::field(std::uint16_t type, std::span<const std::uint8_t> value) {
  std::size_t mark = begin(type);
  bytes(value);
  end(mark);
}

void Writer::field_u8(std::uint16_t type, std::uint8_t v) {
  std::size_t mark = begin(type);
  u8(v);
  end(mark);
}

void Writer::field_u64(std::uint16_t type, std::uint64_t v) {
  std::size_t mark = begin(type);
  u64(v);
  end(mark);
}

std::uint16_t Reader::peek_type() const {
  if (remaining() < kHeaderSize) throw DecodeError("truncated TLV header");
  return static_cast<std::uint16_t>((data_[pos_] << 8) | data_[pos_ + 1]);
}

std::span<const std::uint8_t> Reader::value(std::uint16_t expected_type) {
  std::uint16_t type = peek_type();
  if (type != expected_type) throw DecodeError("unexpected TLV type");
  std::uint32_t len = (static_cast<std::uint32_t>(data_[pos_ + 2]) << 24) |
                      (static_cast<std::uint32_t>(data_[pos_ + 3]) << 16) |
                      (static_cast<std::uint32_t>(data_[pos_ + 4]) << 8) |
                      static_cast<std::uint32_t>(data_[pos_ + 5]);
  if (remaining() - kHeaderSize < len) throw DecodeError("TLV length overruns buffer");
  auto out = data_.subspan(pos_ + kHeaderSize, len);
  pos_ += kHeaderSize + len;
  return out;
}

std::uint8_t Reader::u8() {
  if (remaining() < 1) throw DecodeError("truncated byte field");
  return data_[pos_++];
}

std::uint64_t Reader::u64() {
  if (remaining() < 8) throw DecodeError("truncated integer field");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | data_[pos_ + i];
  pos_ += 8;
  return v;
}

std::span<const std::uint8_t> Reader::take(std::size_t n) {
  if (remaining() < n) throw DecodeError("truncated field");
  auto out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

std::span<const std::uint8_t> Reader::rest() {
  auto out = data_.subspan(pos_);
  pos_ = data_.size();
  return out;
}

}  // namespace verso::tlv
