#pragma once

#include <stdexcept>
#include <string>

namespace shiftk {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A configured resource limit (word count, context count, alphabet size) was hit.
class CapExceeded : public Error {
public:
  using Error::Error;
};

/// A presentation, move descriptor, or file failed validation.
class InvalidInput : public Error {
public:
  using Error::Error;
};

/// A word or point uses symbols that do not belong to the alphabet at hand.
class AlphabetMismatch : public Error {
public:
  using Error::Error;
};

/// A point was expected to lie in the shift space but does not.
class NotInShift : public Error {
public:
  using Error::Error;
};

/// An internal identity that must hold (no straddling, level independence,
/// invertibility) failed. Never silently patched.
class ConsistencyError : public Error {
public:
  using Error::Error;
};

/// The requested operation needs a stabilized partition chain.
class NotStabilized : public Error {
public:
  using Error::Error;
};

/// The input is well formed but outside what the operation supports.
class Unsupported : public Error {
public:
  using Error::Error;
};

} // namespace shiftk
