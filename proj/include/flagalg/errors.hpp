#pragma once

#include <stdexcept>
#include <string>

namespace flagalg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (poset files, JSON tables, ring names, scalars).
class ParseError : public Error {
 public:
  using Error::Error;
};

// The requested computation is not supported over the chosen ring.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

// Arguments violate an operation's precondition.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A commutative quotient could not be decomposed into primitive idempotents.
class SplittingError : public Error {
 public:
  using Error::Error;
};

// The input algebra does not behave like a third flag algebra.
class ReconstructionError : public Error {
 public:
  using Error::Error;
};

}  // namespace flagalg
