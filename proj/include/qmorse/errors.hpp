#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qmorse {

// Input lies outside an operation's domain ("not Morse", off-diagonal term, ...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Term-count guard or other resource limit exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An invariant that cannot fail on valid arithmetic was violated.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, std::string message,
             std::vector<std::string> expected = {});

  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }
  const std::string& detail() const { return detail_; }

 private:
  std::size_t offset_;
  std::string detail_;
  std::vector<std::string> expected_;
};

}  // namespace qmorse
