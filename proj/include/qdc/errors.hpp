#pragma once

#include <stdexcept>
#include <string>

namespace qdc {

/// Raised for dataset problems: unreadable files, malformed rows, bad labels,
/// zero vectors or zero-variance features during preprocessing.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a numerical self-check fails: a synthesized circuit missing its
/// target beyond tolerance, a non-unitary matrix, an undefined conditional.
class VerifyError : public std::runtime_error {
 public:
  explicit VerifyError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qdc
