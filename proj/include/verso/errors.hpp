// Copyright (c) 2026 The verso Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace verso {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A text name failed to parse (or a name was constructed in a form whose
// rendering would not round-trip).
class NameParseError : public Error {
 public:
  using Error::Error;
};

// A content object payload exceeds the configured maximum object size.
class SizeError : public Error {
 public:
  using Error::Error;
};

// A buffer is not a well-formed canonical encoding.
class DecodeError : public Error {
 public:
  using Error::Error;
};

// An edit script references a range outside its input, or is malformed
// (unsorted, overlapping, wrong shape for its op kind).
class ScriptRangeError : public Error {
 public:
  using Error::Error;
};

// A catalog body violates the rules of its variant.
class BodyError : public Error {
 public:
  using Error::Error;
};

// Signature scheme id is not registered.
class UnsupportedSchemeError : public Error {
 public:
  using Error::Error;
};

// A catalog references a parent digest that is not present.
class DanglingParentError : public Error {
 public:
  using Error::Error;
};

// Catalog parent edges form a cycle (or violate the version ordering that
// guarantees acyclicity).
class CycleError : public Error {
 public:
  using Error::Error;
};

// Requested digest is not in the store.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

// Stored bytes do not hash to the digest they are filed under.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// Filesystem-level failure underneath the store.
class IoError : public Error {
 public:
  using Error::Error;
};

// The remote repository is missing an object required for a fetch.
class RepoIncompleteError : public Error {
 public:
  using Error::Error;
};

}  // namespace verso
