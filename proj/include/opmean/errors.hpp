#ifndef OPMEAN_ERRORS_HPP
#define OPMEAN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace opmean {

// Input violates a mathematical precondition (range condition, sign, ...).
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// A sequence that must be monotone is not.
struct OrderError : std::runtime_error {
  explicit OrderError(const std::string& what) : std::runtime_error(what) {}
};

// An iteration failed to stabilize within its cap; carries the last gap.
struct ConvergenceError : std::runtime_error {
  double last_gap;
  ConvergenceError(const std::string& what, double gap)
      : std::runtime_error(what), last_gap(gap) {}
};

// Bad configuration value (node counts, unknown suite, ...).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace opmean

#endif
