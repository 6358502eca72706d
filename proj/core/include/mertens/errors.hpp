#pragma once

#include <stdexcept>
#include <string>

namespace mertens {

// Input outside an operation's stated domain (bad parameter, n below a
// bound's validity threshold, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Request too large to evaluate (e.g. brute-force enumeration size).
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Allocation failure while building a table.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Persisted data failed validation.
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two independent computations that must agree did not.
class CrossCheckError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mertens
