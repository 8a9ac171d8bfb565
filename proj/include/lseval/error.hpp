#pragma once

#include <stdexcept>
#include <string>

namespace lseval {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Zero-length segment, or two tri-point displacements that coincide.
class DegenerateSegment : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A detection refers to an image id that has no annotation.
class UnknownImage : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. `line` is 1-based, 0 when not line-oriented.
class ParseError : public Error {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& what)
      : Error(path + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
        path_(path),
        line_(line) {}

  const std::string& path() const { return path_; }
  std::size_t line() const { return line_; }

 private:
  std::string path_;
  std::size_t line_;
};

}  // namespace lseval
