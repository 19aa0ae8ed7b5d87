#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dchain {

/// Base for all rejections raised by the library (bad input, violated preconditions).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax error in an expression, poset file or family file. `position` is a
/// 0-based character offset for expressions and a 1-based line for files.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at " + std::to_string(position) + ")"), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

}  // namespace dchain
