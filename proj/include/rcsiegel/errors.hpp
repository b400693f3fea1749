#pragma once

#include <stdexcept>
#include <string>

namespace rcs {

// the requested space is {0}, e.g. odd polynomial weight
class TrivialSpaceError : public std::domain_error {
  public:
    explicit TrivialSpaceError(const std::string& what) : std::domain_error(what) {}
};

// a recursion step had a vanishing leading factor (possible for d1 < n)
class SingularRecursionError : public std::domain_error {
  public:
    explicit SingularRecursionError(const std::string& what) : std::domain_error(what) {}
};

// a computed object failed its mandatory post-check
class VerificationError : public std::runtime_error {
  public:
    explicit VerificationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rcs
