#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace blm {

// Base of every error the library throws. `kind()` is a short stable tag
// used by the CLI when it prints structured error messages.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t sentence)
      : Error("parse", "line " + std::to_string(line) + " (sentence " +
                           std::to_string(sentence) + "): " + what),
        line_(line),
        sentence_(sentence) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t sentence() const noexcept { return sentence_; }

 private:
  std::size_t line_;
  std::size_t sentence_;
};

class PatternError : public Error {
 public:
  PatternError(const std::string& what, std::size_t position)
      : Error("pattern", "at offset " + std::to_string(position) + ": " + what),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("io", what) {}
};

class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what) : Error("format", what) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error("invalid-argument", what) {}
};

}  // namespace blm
