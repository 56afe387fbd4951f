#include "qmorse/errors.hpp"

#include <utility>

namespace qmorse {

namespace {

std::string format_parse_error(std::size_t offset, const std::string& message,
                               const std::vector<std::string>& expected) {
  std::string out = "parse error at byte " + std::to_string(offset) + ": " + message;
  if (!expected.empty()) {
    out += " (expected one of:";
    for (const auto& e : expected) out += " " + e;
    out += ")";
  }
  return out;
}

}  // namespace

ParseError::ParseError(std::size_t offset, std::string message,
                       std::vector<std::string> expected)
    : std::runtime_error(format_parse_error(offset, message, expected)),
      offset_(offset),
      detail_(std::move(message)),
      expected_(std::move(expected)) {}

}  // namespace qmorse
