#ifndef CATGEN_ERRORS_HPP
#define CATGEN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace catgen {

// Truncated basis too small: the discarded probability tail exceeds the
// tolerance for the requested operation.
class TailTooLarge : public std::runtime_error {
 public:
  TailTooLarge(const std::string& what, double discarded)
      : std::runtime_error(what), discarded_(discarded) {}
  double discarded() const { return discarded_; }

 private:
  double discarded_;
};

class ZeroNorm : public std::runtime_error {
 public:
  explicit ZeroNorm(const std::string& what) : std::runtime_error(what) {}
};

class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A derived-parameter tie (e.g. R3 = R2/sqrt(T2)) does not hold.
class ConstraintViolated : public std::runtime_error {
 public:
  explicit ConstraintViolated(const std::string& what)
      : std::runtime_error(what) {}
};

// Parameter selection rule produced values outside the physical region.
class InvalidRegime : public std::runtime_error {
 public:
  explicit InvalidRegime(const std::string& what) : std::runtime_error(what) {}
};

class NoSolution : public std::runtime_error {
 public:
  explicit NoSolution(const std::string& what) : std::runtime_error(what) {}
};

class NoConvergence : public std::runtime_error {
 public:
  explicit NoConvergence(const std::string& what) : std::runtime_error(what) {}
};

class ZeroProbability : public std::runtime_error {
 public:
  explicit ZeroProbability(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace catgen

#endif  // CATGEN_ERRORS_HPP
