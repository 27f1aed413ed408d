// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace wafersage {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// rubric parsing
class SchemaError : public Error {
 public:
  using Error::Error;
};
class EmptyRubricError : public Error {
 public:
  using Error::Error;
};

// judge verdict parsing
class UnparseableError : public Error {
 public:
  using Error::Error;
};
class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

// transport
class TransportError : public Error {
 public:
  using Error::Error;
};
class AuthError : public Error {
 public:
  using Error::Error;
};
class EmptyReplyError : public Error {
 public:
  using Error::Error;
};

// statistics / optimization
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// embeddings / clustering
class FormatError : public Error {
 public:
  using Error::Error;
};
class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// synthesis
class UnrepairableRubricError : public Error {
 public:
  using Error::Error;
};
class QuotaUnmetError : public Error {
 public:
  using Error::Error;
};

// filesystem
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace wafersage
