// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0

#include "verso/name.hpp"

#include <charconv>
#include <limits>

#include "verso/errors.hpp"

namespace verso {

namespace {

bool is_unescaped(char c) {
  return c > 0x20 && c < 0x7f && c != '%' && c != '/';
}

int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

void escape_to(std::string& out, std::string_view component) {
  static const char* kDigits = "0123456789abcdef";
  for (char c : component) {
    if (is_unescaped(c)) {
      out.push_back(c);
    } else {
      auto b = static_cast<unsigned char>(c);
      out.push_back('%');
      out.push_back(kDigits[b >> 4]);
      out.push_back(kDigits[b & 0x0f]);
    }
  }
}

std::string unescape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '%') {
      out.push_back(text[i]);
      continue;
    }
    if (i + 2 >= text.size()) throw NameParseError("truncated % escape in name component");
    int hi = hex_nibble(text[i + 1]);
    int lo = hex_nibble(text[i + 2]);
    if (hi < 0 || lo < 0) throw NameParseError("bad % escape in name component");
    out.push_back(static_cast<char>((hi << 4) | lo));
    i += 2;
  }
  return out;
}

// Matches v<digits> or s<digits> (the parsed marker forms).
bool is_marker_shaped(std::string_view c) {
  if (c.size() < 2 || (c[0] != 'v' && c[0] != 's')) return false;
  for (std::size_t i = 1; i < c.size(); ++i) {
    if (c[i] < '0' || c[i] > '9') return false;
  }
  return true;
}

std::uint64_t parse_marker_int(std::string_view digits) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) {
    throw NameParseError("malformed integer in name marker");
  }
  return value;
}

}  // namespace

HierarchicalName::HierarchicalName(std::vector<std::string> components,
                                   std::optional<std::uint64_t> version,
                                   std::optional<std::uint64_t> segment)
    : components_(std::move(components)), version_(version), segment_(segment) {
  for (const auto& c : components_) {
    if (c.empty()) throw NameParseError("empty name component");
  }
  if (segment_ && !version_) throw NameParseError("segment requires a version");
  if (!version_ && !components_.empty() && is_marker_shaped(components_.back())) {
    throw NameParseError("trailing component '" + components_.back() +
                         "' would re-parse as a version/segment marker");
  }
}

HierarchicalName HierarchicalName::parse(std::string_view text) {
  if (text.empty() || text[0] != '/') throw NameParseError("name must start with '/'");
  std::vector<std::string> raw;
  if (text != "/") {
    std::size_t start = 1;
    while (start <= text.size()) {
      std::size_t slash = text.find('/', start);
      std::string_view piece = (slash == std::string_view::npos)
                                   ? text.substr(start)
                                   : text.substr(start, slash - start);
      if (piece.empty()) throw NameParseError("empty name component");
      raw.push_back(unescape(piece));
      if (slash == std::string_view::npos) break;
      start = slash + 1;
    }
  }

  std::optional<std::uint64_t> version;
  std::optional<std::uint64_t> segment;
  if (!raw.empty() && is_marker_shaped(raw.back()) && raw.back()[0] == 's') {
    // A segment marker is only valid directly after a version marker.
    if (raw.size() < 2 || !(is_marker_shaped(raw[raw.size() - 2]) && raw[raw.size() - 2][0] == 'v')) {
      throw NameParseError("segment marker without preceding version");
    }
    segment = parse_marker_int(std::string_view(raw.back()).substr(1));
    raw.pop_back();
  }
  if (!raw.empty() && is_marker_shaped(raw.back()) && raw.back()[0] == 'v') {
    version = parse_marker_int(std::string_view(raw.back()).substr(1));
    raw.pop_back();
  } else if (segment) {
    throw NameParseError("segment marker without preceding version");
  }
  return HierarchicalName(std::move(raw), version, segment);
}

std::string HierarchicalName::render() const {
  if (components_.empty() && !version_) return "/";
  std::string out;
  for (const auto& c : components_) {
    out.push_back('/');
    escape_to(out, c);
  }
  if (version_) {
    out.push_back('/');
    out.push_back('v');
    out += std::to_string(*version_);
    if (segment_) {
      out.push_back('/');
      out.push_back('s');
      out += std::to_string(*segment_);
    }
  }
  return out;
}

HierarchicalName HierarchicalName::with_version(std::uint64_t v) const {
  return HierarchicalName(components_, v, segment_);
}

HierarchicalName HierarchicalName::with_segment(std::uint64_t s) const {
  return HierarchicalName(components_, version_, s);
}

HierarchicalName HierarchicalName::with_component(std::string component) const {
  std::vector<std::string> components = components_;
  components.push_back(std::move(component));
  return HierarchicalName(std::move(components), version_, segment_);
}

HierarchicalName HierarchicalName::base() const {
  return HierarchicalName(components_);
}

std::strong_ordering HierarchicalName::operator<=>(const HierarchicalName& other) const {
  if (auto c = components_ <=> other.components_; c != 0) return c;
  if (auto c = version_ <=> other.version_; c != 0) return c;
  return segment_ <=> other.segment_;
}

}  // namespace verso
