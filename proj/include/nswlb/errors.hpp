#pragma once

#include <stdexcept>
#include <string>

namespace nswlb {

enum class ErrorKind { validation, sizeCap, nonConvergence, domain, internal };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct ValidationError : Error {
  explicit ValidationError(const std::string& what) : Error(ErrorKind::validation, what) {}
};

struct InstanceTooLarge : Error {
  explicit InstanceTooLarge(const std::string& what) : Error(ErrorKind::sizeCap, what) {}
};

struct DidNotConverge : Error {
  explicit DidNotConverge(const std::string& what) : Error(ErrorKind::nonConvergence, what) {}
};

struct DomainError : Error {
  explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

// Raised when a flagged latency fails the discrete convexity test on its slot costs.
struct ConvexityViolation : Error {
  explicit ConvexityViolation(const std::string& what) : Error(ErrorKind::domain, what) {}
};

struct InternalAnomaly : Error {
  explicit InternalAnomaly(const std::string& what) : Error(ErrorKind::internal, what) {}
};

inline const char* kindName(ErrorKind k) {
  switch (k) {
    case ErrorKind::validation: return "validation";
    case ErrorKind::sizeCap: return "sizeCap";
    case ErrorKind::nonConvergence: return "nonConvergence";
    case ErrorKind::domain: return "domain";
    case ErrorKind::internal: return "internal";
  }
  return "unknown";
}

inline int exitCode(ErrorKind k) {
  switch (k) {
    case ErrorKind::sizeCap: return 2;
    case ErrorKind::nonConvergence: return 3;
    default: return 1;
  }
}

}  // namespace nswlb
