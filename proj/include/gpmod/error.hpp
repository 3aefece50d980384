#pragma once

#include <stdexcept>
#include <string>

namespace gpmod {

// Malformed input: bad JSON, wrong shapes, unknown letters.
class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Well-formed input that violates a mathematical precondition
// (FV != 0, Kraft conditions, field mismatch, inverting zero).
class domain_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A theorem-backed invariant failed. Always a bug.
class internal_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline void check_internal(bool ok, const std::string& what) {
  if (!ok) throw internal_error(what);
}

}  // namespace gpmod
