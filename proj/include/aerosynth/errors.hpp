#pragma once

#include <stdexcept>
#include <string>

namespace aerosynth {

// Input failed validation (malformed manifest, bad parameter, ...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A file could not be read or written. what() carries the path.
class IoError : public std::runtime_error {
 public:
  IoError(const std::string& path, const std::string& reason)
      : std::runtime_error(path + ": " + reason), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class EmptyForeground : public ValidationError {
 public:
  EmptyForeground()
      : ValidationError("every pixel matches the background color") {}
};

class OutOfBounds : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class PlacementInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TooFewSamples : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class AnchorMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class CellCollision : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateGroundTruth : public std::domain_error {
 public:
  DegenerateGroundTruth() : std::domain_error("ground-truth box has zero area") {}
};

}  // namespace aerosynth
