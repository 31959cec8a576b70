#pragma once

#include <stdexcept>
#include <string>

namespace isopoint {

// Error taxonomy. Data problems (bad input, bad records) and resource caps
// (closure or enumeration too large) map to distinct CLI exit codes.
enum class ErrorKind {
  InvalidArgument,      // bad parameters: f not admissible, n < m, level < 5, ...
  SingularElement,      // non-unit determinant where a group element is required
  ClosureTooLarge,      // closure exceeded the configured cap
  EnumerationTooLarge,  // subgroup enumeration requested above its bound
  OutOfScope,           // even level in degree computations, small-level special case
  DataError,            // schema violations, invalid external image records
  InsufficientData,     // a classification step needs records that are absent
};

class IsopointError : public std::runtime_error {
 public:
  IsopointError(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Exit-code mapping used by the CLI: 0 success, 2 data/argument errors,
// 3 computation caps.
inline int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::ClosureTooLarge:
    case ErrorKind::EnumerationTooLarge:
      return 3;
    default:
      return 2;
  }
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw IsopointError(kind, msg);
}

}  // namespace isopoint
