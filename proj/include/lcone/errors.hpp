#ifndef LCONE_ERRORS_HPP
#define LCONE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lcone {

/// Malformed run configuration (bad schema, unknown key, invalid value).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A requested computation exceeds the desk-scale limits this code is built for.
class ResourceLimitError : public std::runtime_error {
 public:
  explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

/// The propagator could not reach its accuracy target.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double achieved_residual)
      : std::runtime_error(what), achieved_residual(achieved_residual) {}
  double achieved_residual;
};

}  // namespace lcone

#endif
