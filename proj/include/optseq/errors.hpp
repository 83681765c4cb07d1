#pragma once

#include <stdexcept>
#include <string>

namespace optseq {

// A cap (tensor size, top-k length, partial-sum range, enumeration budget)
// would be exceeded.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The operation has no defined result for this space family.
class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// An internal invariant was violated; indicates a bug, not bad input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Malformed space descriptor or command line; `token` names the offender.
class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::string token)
      : std::invalid_argument(what), token_(std::move(token)) {}
  const std::string& token() const noexcept { return token_; }

 private:
  std::string token_;
};

}  // namespace optseq
