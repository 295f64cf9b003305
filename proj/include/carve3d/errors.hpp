#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace carve3d {

// Operation called with arguments outside its contract (wrong grid kind,
// mismatched dimensions, invalid parameters).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class BoundsError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Malformed grid file. offset is the byte position where decoding failed.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape fixture that does not fit its grid.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The grid has no occupied cell to anchor a seam on.
class NoAnchorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace carve3d
