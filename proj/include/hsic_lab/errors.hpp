#pragma once

#include <stdexcept>
#include <string>

namespace hsic_lab {

/// Mismatched vector lengths or out-of-range feature indices.
class dimension_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain of an operation (negative radius, z < 0, ...).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A kernel that does not satisfy the admissibility requirements.
class admissibility_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exhaustive enumeration requested over too many candidates.
class enumeration_error : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Malformed or inconsistent input data (distribution files, kernel specs).
class format_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable or unwritable file.
class file_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hsic_lab
